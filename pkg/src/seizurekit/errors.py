"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: ConfigError -> 1, DataError -> 2,
LeakageError -> 3.
"""


class ConfigError(ValueError):
    """A parameter or configuration value is invalid."""


class DataError(Exception):
    """Input data violates a precondition or is malformed."""


class LeakageError(RuntimeError):
    """A patient appears on both sides of a train/test boundary."""
