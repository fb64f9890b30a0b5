"""Classifications (formal contexts) and infomorphisms.

A classification relates instances to types; an infomorphism is a
contravariant map pair whose fundamental condition makes classification
invariant under change of notation.  Derivation packages the two derivation
operators of a classification as a Galois connection between power lattices.
"""

import itertools
from dataclasses import dataclass

from .errors import CarrierMismatchError, SizeLimitError
from .finrel import (
    FinFunction,
    FinSet,
    Relation,
    Subset,
    derive_forward,
    derive_reverse,
    transpose,
)
from .galois import Adjunction, check_adjunction
from .order import (
    MonotoneMap,
    PowerOrder,
    Preorder,
    bounds,
    carrier_bound,
    opposite,
    power_order,
)

__all__ = [
    "Classification",
    "Infomorphism",
    "DerivationAdjunction",
    "derivation",
    "check_infomorphism",
    "InfomorphismReport",
    "compose_infomorphisms",
    "identity_infomorphism",
    "order_as_classification",
    "bounds_adjunction",
    "derivation_equals_bounds",
    "exponent",
    "multiply",
    "enumerate_infomorphisms",
    "involution_classification",
]


@dataclass(frozen=True)
class Classification:
    """Instances, types, and an incidence relation between them."""

    instances: FinSet
    types: FinSet
    incidence: Relation

    def __post_init__(self):
        if self.incidence.source != self.instances or self.incidence.target != self.types:
            raise CarrierMismatchError("incidence carriers do not match instances/types")

    @classmethod
    def of(cls, instances, types, pairs=()) -> "Classification":
        inst = instances if isinstance(instances, FinSet) else FinSet(tuple(instances))
        typ = types if isinstance(types, FinSet) else FinSet(tuple(types))
        return cls(inst, typ, Relation.of(inst, typ, pairs))

    def holds(self, instance: str, type_: str) -> bool:
        return self.incidence.holds(instance, type_)

    def intent_of(self, x: Subset) -> Subset:
        return derive_forward(self.incidence, x)

    def extent_of(self, y: Subset) -> Subset:
        return derive_reverse(self.incidence, y)


def involution_classification(a: Classification) -> Classification:
    """Swap instances with types and transpose the incidence."""
    return Classification(a.types, a.instances, transpose(a.incidence))


@dataclass(frozen=True)
class DerivationAdjunction:
    """The Galois connection of derivation, between materialized power lattices."""

    classification: Classification
    instance_power: PowerOrder
    type_power: PowerOrder
    adjunction: Adjunction


def derivation(a: Classification, bound: int | None = None) -> DerivationAdjunction:
    """Build deriv(a) : power(instances) <=> power(types) with the type side reversed."""
    limit = carrier_bound() if bound is None else bound
    if a.instances.size > limit or a.types.size > limit:
        raise SizeLimitError("classification too large to materialize power lattices")
    ip = power_order(a.instances, bound=limit)
    tp = power_order(a.types, bound=limit)
    tp_op = opposite(tp.poset)
    left = MonotoneMap(ip.poset, tp_op, FinFunction(
        ip.poset.carrier, tp_op.carrier,
        tuple(derive_forward(a.incidence, Subset(a.instances, i)).bits for i in range(ip.size))))
    right = MonotoneMap(tp_op, ip.poset, FinFunction(
        tp_op.carrier, ip.poset.carrier,
        tuple(derive_reverse(a.incidence, Subset(a.types, j)).bits for j in range(tp.size))))
    return DerivationAdjunction(a, ip, tp, check_adjunction(left, right))


@dataclass(frozen=True)
class Infomorphism:
    """Contravariant map pair source <=> target: instances backward, types forward."""

    source: Classification
    target: Classification
    inst_map: FinFunction
    typ_map: FinFunction

    def __post_init__(self):
        if self.inst_map.source != self.target.instances or self.inst_map.target != self.source.instances:
            raise CarrierMismatchError("instance map must go target instances -> source instances")
        if self.typ_map.source != self.source.types or self.typ_map.target != self.target.types:
            raise CarrierMismatchError("type map must go source types -> target types")

    def fundamental_witness(self) -> tuple[str, str] | None:
        """First (target instance, source type) pair violating the condition."""
        a, b = self.source, self.target
        for x in range(b.instances.size):
            fx = self.inst_map.table[x]
            for y in range(a.types.size):
                if a.incidence.holds_idx(fx, y) != b.incidence.holds_idx(x, self.typ_map.table[y]):
                    return b.instances.elements[x], a.types.elements[y]
        return None

    def is_valid(self) -> bool:
        return self.fundamental_witness() is None


def identity_infomorphism(a: Classification) -> Infomorphism:
    return Infomorphism(a, a, FinFunction.identity(a.instances), FinFunction.identity(a.types))


def compose_infomorphisms(f: Infomorphism, g: Infomorphism) -> Infomorphism:
    """f : A <=> B then g : B <=> C, instance maps composing contravariantly."""
    if f.target != g.source:
        raise CarrierMismatchError("infomorphisms are not composable")
    return Infomorphism(f.source, g.target, g.inst_map.then(f.inst_map), f.typ_map.then(g.typ_map))


@dataclass(frozen=True)
class InfomorphismReport:
    relation_version: bool
    morphism_version: bool
    adjunction_version: bool
    witness: tuple[str, str] | None

    @property
    def valid(self) -> bool:
        return self.relation_version and self.morphism_version and self.adjunction_version

    @property
    def versions_agree(self) -> bool:
        return self.relation_version == self.morphism_version == self.adjunction_version


def check_infomorphism(f: Infomorphism) -> InfomorphismReport:
    """Evaluate the relation, morphism, and adjunction versions independently."""
    a, b = f.source, f.target
    witness = f.fundamental_witness()
    relation_ok = witness is None

    morphism_ok = True
    for y in range(a.types.size):
        ext_a = a.incidence.fiber10(y)
        pulled = 0
        for x in range(b.instances.size):
            if ext_a.bits >> f.inst_map.table[x] & 1:
                pulled |= 1 << x
        ext_b = b.incidence.fiber10(f.typ_map.table[y]).bits
        if pulled != ext_b:
            morphism_ok = False
            break
    if morphism_ok:
        for x in range(b.instances.size):
            int_b = b.incidence.fiber01(x)
            pulled = 0
            for y in range(a.types.size):
                if int_b.bits >> f.typ_map.table[y] & 1:
                    pulled |= 1 << y
            int_a = a.incidence.fiber01(f.inst_map.table[x]).bits
            if pulled != int_a:
                morphism_ok = False
                break

    adjunction_ok = True
    for xbits in range(1 << b.instances.size):
        image = 0
        for x in range(b.instances.size):
            if xbits >> x & 1:
                image |= 1 << f.inst_map.table[x]
        lhs = derive_forward(a.incidence, Subset(a.instances, image)).bits
        fwd_b = derive_forward(b.incidence, Subset(b.instances, xbits)).bits
        rhs = 0
        for y in range(a.types.size):
            if fwd_b >> f.typ_map.table[y] & 1:
                rhs |= 1 << y
        if lhs != rhs:
            adjunction_ok = False
            break
    if adjunction_ok:
        for ybits in range(1 << a.types.size):
            rev_a = derive_reverse(a.incidence, Subset(a.types, ybits)).bits
            lhs = 0
            for x in range(b.instances.size):
                if rev_a >> f.inst_map.table[x] & 1:
                    lhs |= 1 << x
            timage = 0
            for y in range(a.types.size):
                if ybits >> y & 1:
                    timage |= 1 << f.typ_map.table[y]
            rhs = derive_reverse(b.incidence, Subset(b.types, timage)).bits
            if lhs != rhs:
                adjunction_ok = False
                break

    return InfomorphismReport(relation_ok, morphism_ok, adjunction_ok, witness)


def order_as_classification(p: Preorder) -> Classification:
    """Instances and types are the carrier; incidence is the order itself."""
    return Classification(p.carrier, p.carrier, p.leq)


def bounds_adjunction(p: Preorder, bound: int | None = None) -> DerivationAdjunction:
    """The upper/lower bound Galois connection, as derivation of the order context."""
    return derivation(order_as_classification(p), bound=bound)


def _infomorphism_label(inst_table, typ_table) -> str:
    return "(" + ",".join(map(str, inst_table)) + ";" + ",".join(map(str, typ_table)) + ")"


def enumerate_infomorphisms(a: Classification, b: Classification,
                            max_results: int = 100_000) -> list[Infomorphism]:
    """All infomorphisms a <=> b, by backtracking over the type map.

    Partial type maps are pruned as soon as some target instance has no
    possible image under the instance map; complete type maps are expanded
    into every consistent instance-map choice.
    """
    n_b_inst, n_a_typ = b.instances.size, a.types.size
    if b.types.size ** n_a_typ > 1_000_000:
        raise SizeLimitError("type-map search space too large")
    results: list[Infomorphism] = []

    a_cols = [a.incidence.fiber10(y).bits for y in range(n_a_typ)]
    b_rows = b.incidence.rows

    def candidates(typ_table: tuple[int, ...]) -> list[list[int]]:
        """For each target instance, the source instances consistent so far."""
        cand = []
        for x in range(n_b_inst):
            ok = []
            for ax in range(a.instances.size):
                good = True
                for y, ty in enumerate(typ_table):
                    if bool(a_cols[y] >> ax & 1) != bool(b_rows[x] >> ty & 1):
                        good = False
                        break
                if good:
                    ok.append(ax)
            cand.append(ok)
        return cand

    def extend(typ_table: list[int]):
        if len(results) > max_results:
            raise SizeLimitError("infomorphism enumeration exceeded the result cap")
        cand = candidates(tuple(typ_table))
        if any(not c for c in cand):
            return
        if len(typ_table) == n_a_typ:
            for choice in itertools.product(*cand):
                inst_map = FinFunction(b.instances, a.instances, tuple(choice))
                typ_map = FinFunction(a.types, b.types, tuple(typ_table))
                results.append(Infomorphism(a, b, inst_map, typ_map))
            return
        for ty in range(b.types.size):
            typ_table.append(ty)
            extend(typ_table)
            typ_table.pop()

    extend([])
    return results


def exponent(a: Classification, b: Classification, max_results: int = 100_000) -> Classification:
    """Instances are all infomorphisms a <=> b; types are pairs of a target
    instance with a source type; an infomorphism is incident to (x, y) when
    its instance map sends x into the extent of y (equally, its type map
    sends y over the intent of x)."""
    infos = enumerate_infomorphisms(a, b, max_results=max_results)
    inst_labels = tuple(_infomorphism_label(f.inst_map.table, f.typ_map.table) for f in infos)
    typ_labels = tuple(
        f"({x},{y})" for x in b.instances.elements for y in a.types.elements
    )
    instances = FinSet(inst_labels)
    types = FinSet(typ_labels)
    n_a_typ = a.types.size
    rows = []
    for f in infos:
        mask = 0
        for xi in range(b.instances.size):
            for yi in range(n_a_typ):
                if a.incidence.holds_idx(f.inst_map.table[xi], yi):
                    mask |= 1 << (xi * n_a_typ + yi)
        rows.append(mask)
    return Classification(instances, types, Relation(instances, types, tuple(rows)))


def multiply(a: Classification, b: Classification, max_results: int = 100_000) -> Classification:
    """The involution of the exponent out of the transposed first factor."""
    return involution_classification(exponent(involution_classification(a), b, max_results=max_results))


def derivation_equals_bounds(p: Preorder) -> bool:
    """Derivation of the order-as-classification agrees with upper/lower bounds."""
    a = order_as_classification(p)
    for bits in range(1 << p.size):
        x = Subset(p.carrier, bits)
        upper, lower = bounds(p, x)
        if derive_forward(a.incidence, x) != upper:
            return False
        if derive_reverse(a.incidence, x) != lower:
            return False
    return True
