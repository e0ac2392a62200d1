"""Exception types raised by the library."""


class BellQuditError(ValueError):
    """Base class for all library errors."""


class NotPrimeError(BellQuditError):
    pass


class InvalidStateError(BellQuditError):
    pass


class DegenerateSurvival(BellQuditError):
    """The survival probability of a B-step underflowed (all parities almost never zero)."""


class AmbiguousMaximum(BellQuditError):
    """Two or more dit-error columns share the largest total weight."""


class UndefinedExponent(BellQuditError):
    pass


class NoUsefulBound(BellQuditError):
    """The lower bound on M is not positive, so no exponent bound follows."""


class NoRoot(BellQuditError):
    pass


class CapacityExceeded(BellQuditError):
    pass


class InsufficientData(BellQuditError):
    pass
