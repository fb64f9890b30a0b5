"""Exception hierarchy shared by all conceptua modules."""


class ConceptuaError(Exception):
    """Base class for all errors raised by this package."""


class CarrierMismatchError(ConceptuaError):
    """Operands live over incompatible carriers (wrong sets or wrong sizes)."""


class UnknownElementError(ConceptuaError):
    """A label was used that is not an element of the relevant carrier."""


class SizeLimitError(ConceptuaError):
    """An operation would materialize a structure above the configured bound."""


class AdjunctionError(ConceptuaError):
    """A claimed adjunction violates the fundamental condition.

    The message carries the first witness pair found.
    """


class NotAConceptLatticeError(ConceptuaError):
    """A manually built lattice fails a density or bipole invariant."""


class ParseError(ConceptuaError):
    """Malformed input file; carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
