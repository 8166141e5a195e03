"""Exception types shared across the package."""


class QuditWGError(Exception):
    """Base class for all package errors."""


class DomainError(QuditWGError, ValueError):
    """A physical parameter lies outside its allowed domain."""


class LayoutError(QuditWGError, KeyError):
    """A path or emitter name is not part of the register layout."""

    def __str__(self):
        # KeyError quotes its message by default
        return str(self.args[0]) if self.args else ""


class ConsistencyError(QuditWGError, ValueError):
    """A state violates a numerical invariant (e.g. norm above one)."""


class SchemeError(QuditWGError, ValueError):
    """Unsupported scheme or gate parameters."""
