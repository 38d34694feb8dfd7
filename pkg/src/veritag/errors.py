"""Exception hierarchy shared across the package."""


class VeritagError(Exception):
    """Base class for all package errors."""


class DataError(VeritagError):
    """Malformed or inconsistent input data (corpus files, dictionaries, models)."""


class ConfigError(VeritagError):
    """Invalid configuration or unusable parameter combination."""


class InvariantError(VeritagError):
    """An internal invariant was violated; indicates a bug, not bad input."""
