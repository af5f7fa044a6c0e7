"""Exception hierarchy shared by every module."""


class SchurHornError(Exception):
    """Base class for all errors raised by this package."""


class NonConvergence(SchurHornError):
    """The eigensolver result failed its residual test."""


class DimensionMismatch(SchurHornError, ValueError):
    pass


class EmptyInput(SchurHornError, ValueError):
    pass


class NotHermitian(SchurHornError, ValueError):
    """The Hermitian defect is too large to be roundoff."""


class DomainViolation(SchurHornError, ValueError):
    pass


class NotInMasa(SchurHornError, ValueError):
    """Operator has off-diagonal mass, so it is not in the diagonal masa."""


class GridMismatch(SchurHornError, ValueError):
    """The cell count is not divisible by 2**level."""


class NotMajorized(SchurHornError, ValueError):
    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class NumericalBreakdown(SchurHornError, ArithmeticError):
    pass


class LevelExhausted(SchurHornError):
    """No dyadic level meets the requested epsilon.

    ``floor`` holds the smallest epsilon the finite model can honor.
    """

    def __init__(self, message, floor):
        super().__init__(message)
        self.floor = floor
