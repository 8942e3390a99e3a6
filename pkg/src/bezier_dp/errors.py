"""Exception taxonomy shared by the whole package.

The CLI maps these onto process exit codes (see cli.py): configuration
problems exit 2, data problems exit 3, capacity problems exit 4.
"""


class BezierDPError(Exception):
    """Base class for all package-specific errors."""


class DomainError(BezierDPError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapacityError(BezierDPError, ValueError):
    """A size/degree limit would be exceeded (e.g. degree > 60, vector > 1e6)."""


class UndefinedStatisticError(BezierDPError, ValueError):
    """The requested exact statistic does not exist for this dataset
    (empty dataset, zero marginal variance for correlation, ...)."""


class ReplayExhaustedError(BezierDPError, RuntimeError):
    """A replay noise source ran out of stored values."""


class DataFormatError(BezierDPError, ValueError):
    """An input file could not be parsed or contains out-of-range values."""


class ConfigError(BezierDPError, ValueError):
    """An experiment configuration is inconsistent or incomplete."""
