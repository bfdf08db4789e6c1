"""Exception hierarchy shared by all modules."""


class SpecpolyError(Exception):
    """Base class for library errors."""


class DomainError(SpecpolyError, ValueError):
    """An argument lies outside the domain of an operation."""


class CutoffTooSmallError(DomainError):
    """The spectral cutoff cannot support the requested small-time scheme."""


class NumericalQualityError(SpecpolyError, RuntimeError):
    """A numerical contract (conditioning, tolerance) was violated."""
