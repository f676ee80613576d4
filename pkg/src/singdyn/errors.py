"""Exception types raised by the dynamics modules and the scenario runner."""


class SingDynError(Exception):
    """Base class for all errors raised by this package."""


class DegreeMismatch(SingDynError, ValueError):
    pass


class NotDivisible(SingDynError, ValueError):
    """Raised when a polynomial is not divisible by x1**2 + x2**2.

    The residual max-norm is stored on ``residual``.
    """

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class NonFinite(SingDynError, ArithmeticError):
    """State became non-finite during time integration (blow-up)."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class DegenerateExpansion(SingDynError, ValueError):
    pass


class GraphLost(SingDynError):
    """Front slope exceeded the graph-chart threshold; the front needs re-charting."""


class DegenerateVortex(SingDynError):
    pass


class CFLViolation(SingDynError, ValueError):
    pass


class BoundaryContact(SingDynError):
    pass


class NoCrossing(SingDynError, ValueError):
    pass


class ConfigError(SingDynError, ValueError):
    pass
