"""Exception classes shared by the package."""


class HilbmodError(Exception):
    """Base class for all errors raised by :mod:`hilbmod`."""


class UnsupportedSpaceError(HilbmodError):
    """Raised when an operation is asked for on a space kind it does not handle."""


class ShapeError(HilbmodError, ValueError):
    """Raised when operator shapes do not compose."""


class HypothesisFailure(HilbmodError):
    """Raised when a numerically checked precondition does not hold.

    All arguments are well formed, but the data violate the assumption the
    computation relies on (e.g. a vanishing condition or a range inclusion).
    """


class ConstructionError(HilbmodError):
    """Raised when an internal post-construction identity check fails.

    This signals inconsistent inputs (or a bug), never a tolerance issue of
    the caller.
    """


class ResourceBoundError(HilbmodError):
    """Raised when a requested truncation exceeds the configured size bound."""
