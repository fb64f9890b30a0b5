"""Conceptua: finite relational calculus, order adjunctions, polar
factorization, formal concept analysis, and a propositional lattice of
theories, with every law executable."""

from .errors import (
    AdjunctionError,
    CarrierMismatchError,
    ConceptuaError,
    NotAConceptLatticeError,
    ParseError,
    SizeLimitError,
    UnknownElementError,
)
from .finrel import (
    FinFunction,
    FinSet,
    Relation,
    Subset,
    compose,
    derive_forward,
    derive_reverse,
    image_factorize,
    images,
    residuate_left,
    residuate_right,
    transpose,
)
from .order import (
    MonotoneMap,
    OrderBimodule,
    Poset,
    Preorder,
    bounds,
    power_order,
    quotient,
)
from .galois import (
    Adjunction,
    PolarFactorization,
    check_adjunction,
    closure_interior,
    diagonalize,
    is_coreflection,
    is_reflection,
    polar_factorize,
)
from .clsn import (
    Classification,
    Infomorphism,
    check_infomorphism,
    derivation,
    exponent,
    multiply,
    order_as_classification,
)
from .clg import (
    ConceptLattice,
    ConceptMorphism,
    FormalConcept,
    classification_of,
    concept_lattice,
    concept_morphism_of,
    lattice_joins_meets,
    lattice_roundtrip_iso,
)
from .institution import (
    MergeSpan,
    Model,
    PropositionalInstitution,
    Sentence,
    Signature,
    SignatureMorphism,
    TheoryObject,
    check_satisfaction_condition,
    merge_theories,
    parse_sentence,
    satisfies,
    style_interconvert,
    theory_fiber,
    transport_theory,
)

__version__ = "0.1.0"

__all__ = [
    "AdjunctionError",
    "CarrierMismatchError",
    "ConceptuaError",
    "NotAConceptLatticeError",
    "ParseError",
    "SizeLimitError",
    "UnknownElementError",
    "FinFunction",
    "FinSet",
    "Relation",
    "Subset",
    "compose",
    "derive_forward",
    "derive_reverse",
    "image_factorize",
    "images",
    "residuate_left",
    "residuate_right",
    "transpose",
    "MonotoneMap",
    "OrderBimodule",
    "Poset",
    "Preorder",
    "bounds",
    "power_order",
    "quotient",
    "Adjunction",
    "PolarFactorization",
    "check_adjunction",
    "closure_interior",
    "diagonalize",
    "is_coreflection",
    "is_reflection",
    "polar_factorize",
    "Classification",
    "Infomorphism",
    "check_infomorphism",
    "derivation",
    "exponent",
    "multiply",
    "order_as_classification",
    "ConceptLattice",
    "ConceptMorphism",
    "FormalConcept",
    "classification_of",
    "concept_lattice",
    "concept_morphism_of",
    "lattice_joins_meets",
    "lattice_roundtrip_iso",
    "MergeSpan",
    "Model",
    "PropositionalInstitution",
    "Sentence",
    "Signature",
    "SignatureMorphism",
    "TheoryObject",
    "check_satisfaction_condition",
    "merge_theories",
    "parse_sentence",
    "satisfies",
    "style_interconvert",
    "theory_fiber",
    "transport_theory",
    "__version__",
]
