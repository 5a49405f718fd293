"""Exception types shared across the package."""


class HallforgeError(Exception):
    """Base class for all package errors."""


class CapExceeded(HallforgeError):
    """A configured resource cap would be exceeded.

    Carries the offending estimate so callers can report or raise limits.
    """

    def __init__(self, what: str, estimate, cap):
        self.what = what
        self.estimate = estimate
        self.cap = cap
        super().__init__(f"{what}: estimated {estimate} exceeds cap {cap}")


class SizeMismatch(HallforgeError):
    """Dimension vector or matrix shape inconsistent with the quiver/field."""


class SingularMatrix(HallforgeError):
    """Inversion of a singular matrix or of zero in a field."""
