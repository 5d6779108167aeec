"""Exception hierarchy.

Every error raised for bad input derives from :class:`QSBAIError`, which is
itself a :class:`ValueError`, so callers that only care about "the input was
wrong" can catch either.
"""


class QSBAIError(ValueError):
    """Base class for all input and consistency errors."""


class InvalidSizeError(QSBAIError):
    pass


class InvalidGraphError(QSBAIError):
    pass


class VertexIndexError(QSBAIError, IndexError):
    """A vertex or arm index lies outside ``0..n-1``."""


class InvalidEnvironmentError(QSBAIError):
    pass


class AmbiguousBestArmError(QSBAIError):
    """The maximum winning probability is attained by more than one arm."""


class DimensionError(QSBAIError):
    pass


class DegenerateEnvironmentError(QSBAIError):
    """Mean winning probability of 0 or 1; the step schedule is undefined."""


class ClusterMismatchError(QSBAIError):
    pass


class FamilyError(QSBAIError):
    """Graph does not belong to the declared theorem family."""


class InvalidDistributionError(QSBAIError):
    pass


class ConfigParseError(QSBAIError):
    pass


class ConfigValidationError(QSBAIError):
    pass
