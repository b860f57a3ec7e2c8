"""Exception types shared across the library."""


class DualityLabError(Exception):
    """Base class for all library errors."""


class MalformedSpec(DualityLabError):
    """State description is invalid (bad weights, negative means, bad matrix, ...)."""


class CutoffTooSmall(DualityLabError):
    """An explicit Fock cutoff cannot hold the requested state."""


class OrderOutOfRange(DualityLabError):
    """Correlation order k must be a positive integer."""


class UndefinedOrder(DualityLabError):
    """The normalization for this order vanishes; the quantity is undefined."""


class CutoffMismatch(DualityLabError):
    """Operands live on differently truncated Fock spaces."""


class EmptyLog(DualityLabError):
    """A shot log with no recorded outcomes cannot be estimated from."""
