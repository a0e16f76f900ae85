"""Exception types shared across the engine."""


class ProxBurdenError(Exception):
    """Base class for all engine errors."""


class ParseError(ProxBurdenError):
    """Malformed or unsupported input data (GeoJSON, CSV)."""


class ConfigError(ProxBurdenError):
    """Bad run configuration: missing files, duplicate ids, unknown kinds."""


class BreakCountError(ProxBurdenError):
    """Requested class count cannot be satisfied by the data.

    Carries the number of distinct values so callers can suggest a usable k.
    """

    def __init__(self, message: str, distinct: int):
        super().__init__(message)
        self.distinct = distinct


class UndefinedStatisticError(ProxBurdenError):
    """A statistic has no defined value on the given input (e.g. constant series)."""


class ScaleUnavailableError(ProxBurdenError):
    """A zone scale the request needs is not loaded in this dataset."""
