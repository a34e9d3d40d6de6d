"""
Typed errors raised by the laboratory.

Every error carries the process exit code the command-line runner reports
for it: 2 for invalid input, 3 for numerical failure.
"""


class LaboratoryError(Exception):
    """Root of all errors raised by the package."""

    exit_code = 1


class ValidationError(LaboratoryError, ValueError):
    """Raised when an argument or configuration is invalid."""

    exit_code = 2


class ConfigurationError(ValidationError):
    """Raised when an experiment configuration cannot be read or validated."""


class ComplexBetaError(ValidationError):
    """Raised when a statistics operation receives a non-real beta."""


class EmptySampleError(ValidationError):
    """Raised when a statistic is requested on an empty sample."""


class DegenerateInput(ValidationError):
    """Raised when every coefficient of a series vanishes."""


class NumericalError(LaboratoryError, ArithmeticError):
    """Raised when a numerical procedure fails."""

    exit_code = 3


class NonConvergence(NumericalError):
    """Raised when an iterative solve misses its tolerance within its cap."""


class Divergence(NumericalError):
    """Raised when the twisted iteration cannot contract (Re beta <= 0)."""


class ToleranceNotReached(NumericalError):
    """Raised when the series cap is too small for the requested tolerance."""

    def __init__(self, message: str, achievable: float):
        super().__init__(message)
        self.achievable = achievable


class GapTooSmall(NumericalError):
    """Raised when the leading eigenvalue is not separated from the rest."""


class TailNotDecaying(NumericalError):
    """Raised when correlations have not decayed by the last lag."""


class SlowMixingWarning(RuntimeWarning):
    """Emitted when a power iteration needs an unusually long run."""
