"""Exception types raised by the library."""


class DomainError(ValueError):
    """Argument outside the region where a series or function is defined."""


class DivergenceError(ArithmeticError):
    """A series was detected not to converge."""


class ResourceError(MemoryError):
    """Request exceeds a configured size budget."""


class PrecisionError(ArithmeticError):
    """Working precision could not be raised far enough to cover cancellation."""
