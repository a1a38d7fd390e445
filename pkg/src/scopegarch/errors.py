"""Exception hierarchy shared by the whole package.

Grouped by how the command line maps them to exit codes: configuration
problems, data problems, and numerical failures.  Library code raises the
specific classes; only the CLI cares about the grouping.
"""

__all__ = [
    "ScopeGarchError",
    "ConfigError",
    "DataError",
    "NumericalError",
    "DimensionMismatch",
    "NotStationary",
    "DegenerateSample",
    "DegenerateData",
    "InvalidPrice",
    "DidNotConverge",
    "SingularInformation",
]


class ScopeGarchError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(ScopeGarchError):
    """Invalid configuration: unknown keys, wrong types, inconsistent values."""


class DataError(ScopeGarchError):
    """Input data cannot be used: unreadable, malformed, or degenerate."""


class NumericalError(ScopeGarchError):
    """A numerical procedure failed in a way no fallback can repair."""


class DimensionMismatch(ConfigError):
    """A vector's length disagrees with the model orders.

    Carries the offending field name so callers can report it precisely.
    """

    def __init__(self, field, expected, got):
        self.field = field
        self.expected = expected
        self.got = got
        super().__init__(f"{field}: expected length {expected}, got {got}")


class NotStationary(ConfigError):
    """Operation requires sum(alphas) + sum(betas) < 1 but it is not."""


class DegenerateSample(DataError):
    """A sample or residual vector is constant where variation is required."""


class DegenerateData(DataError):
    """A series carries no usable variation for estimation (e.g. all zero)."""


class InvalidPrice(DataError):
    """A price record is unusable; carries the 1-based data row number."""

    def __init__(self, row, reason):
        self.row = row
        self.reason = reason
        super().__init__(f"row {row}: {reason}")


class DidNotConverge(NumericalError):
    """Optimization stopped without meeting the score tolerance.

    The best iterate found is attached as ``fit`` so callers that can live
    with an unconverged estimate may still use it.
    """

    def __init__(self, message, fit=None):
        self.fit = fit
        super().__init__(message)


class SingularInformation(NumericalError):
    """The information matrix (or a bootstrap covariance) is not invertible."""
