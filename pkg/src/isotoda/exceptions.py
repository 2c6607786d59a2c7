"""
Custom exception classes for the isotoda package.
"""


class IsotodaError(Exception):
    """Base exception class for all isotoda errors."""
    pass


class ConfigurationError(IsotodaError):
    """Raised when configuration is invalid or missing."""
    pass


class ValidationError(IsotodaError):
    """Raised when input data fails validation."""
    pass


class NonSimpleSpectrumError(ValidationError):
    """Raised when a spectrum has (numerically) repeated eigenvalues."""
    pass


class DegenerateLocusError(ValidationError):
    """Raised when an off-diagonal entry vanishes where it must not."""
    pass


class CapExceededError(ValidationError):
    """Raised when a size cap on an enumeration is exceeded."""
    pass


class NumericalError(IsotodaError):
    """Raised when a numeric computation fails."""
    pass


class ConvergenceError(NumericalError):
    """Raised when an iterative method does not converge."""
    pass


class DriftError(NumericalError):
    """Raised when a conserved quantity drifts beyond tolerance."""
    pass
