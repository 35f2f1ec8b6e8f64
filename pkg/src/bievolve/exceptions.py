"""Exception hierarchy shared by all bievolve modules."""


class BievolveError(Exception):
    """Base class for computation-domain errors (CLI exit code 1)."""


class InvalidInputError(BievolveError, ValueError):
    """Input violates a documented precondition."""


class DimensionMismatchError(InvalidInputError):
    """Operands have incompatible dimensions."""


class CapExceededError(BievolveError):
    """A brute-force or recursion size cap would be exceeded."""


class UndefinedWidthError(InvalidInputError):
    """Peak width requested for a single-path (m=0 or n=0) case."""
