"""Exception types shared across the package.

The CLI maps ConfigError to exit code 2 and DataError to exit code 3.
"""


class ConfigError(ValueError):
    """Invalid parameter or conflicting run configuration."""


class DataError(ValueError):
    """Malformed or unusable input data."""
