"""Exception hierarchy shared by every module of the package."""


class AutoHSICError(Exception):
    """Base class for all package errors."""


class ShapeMismatch(AutoHSICError, ValueError):
    """An observation or weight vector does not conform to its declared shape."""


class DegenerateBandwidth(AutoHSICError, ValueError):
    """The median heuristic produced a (numerically) zero bandwidth."""


class MissingBandwidth(AutoHSICError, ValueError):
    """A bandwidth-dependent kernel was evaluated without a resolved bandwidth."""


class TooShort(AutoHSICError, ValueError):
    """The effective sample size is too small for the requested statistic."""


class OracleTooLarge(AutoHSICError, ValueError):
    """The brute-force U-statistic oracle was asked for more than 40 pairs."""


class NonPositiveVariance(AutoHSICError, ArithmeticError):
    """A conditional variance recursion produced a non-positive value."""


class EstimationFailed(AutoHSICError, RuntimeError):
    """A model fit did not meet its convergence criterion."""


class DegenerateResiduals(AutoHSICError, ValueError):
    """Residuals have zero sample variance and cannot be standardized."""


class NumericalBlowup(AutoHSICError, ArithmeticError):
    """A simulated recursion left the numerically stationary region."""


class ConfigError(AutoHSICError, ValueError):
    """A run configuration or series file failed validation."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
