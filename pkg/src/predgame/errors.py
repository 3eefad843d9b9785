"""Exception hierarchy shared by all modules."""


class PredGameError(Exception):
    """Base class for library errors."""


class ConfigError(PredGameError):
    """Bad configuration: invalid distribution spec, oracle/class mismatch, missing parameter."""


class InputError(PredGameError):
    """Malformed or inconsistent input data (dimension mismatch, empty sample, ...)."""


class ResourceError(PredGameError):
    """A configured enumeration budget would be exceeded."""


class UnsupportedError(ConfigError):
    """The operation is not defined for this class kind or dimension."""


class OracleError(PredGameError):
    """A better-response oracle failed during dynamics or verification."""
