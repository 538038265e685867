"""
Error hierarchy shared by every package.

Each error carries the process exit code the CLI reports for it:
config problems exit 2, data problems 3, numerical failures 4.
"""


class GwSpectraError(Exception):
    """Base class for all expected failures."""

    exit_code: int = 1
    category: str = "error"


class ConfigError(GwSpectraError, ValueError):
    """Invalid experiment or runtime configuration."""

    exit_code = 2
    category = "config"


class DataError(GwSpectraError, ValueError):
    """Unreadable, malformed or inconsistent input data."""

    exit_code = 3
    category = "data"


class NumericError(GwSpectraError, ArithmeticError):
    """Non-finite values, divergence or solver non-convergence."""

    exit_code = 4
    category = "numeric"
