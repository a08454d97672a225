"""
Exception hierarchy for Primitive Forge.

Every error raised by the library derives from ForgeError so that callers
(and the CLI) can catch one type and report it.
"""

from typing import Optional


class ForgeError(Exception):
    """Base class for all Primitive Forge errors."""
    pass


class ExpressionSyntaxError(ForgeError):
    """Raised when expression text does not match the grammar."""

    def __init__(self, message: str, offset: int, expected: str = ""):
        self.offset = offset
        self.expected = expected
        detail = f"{message} at byte {offset}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class UnknownIdentifierError(ForgeError):
    """Raised for names outside the grammar (anything but x, pi, e and the functions)."""

    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown identifier '{name}' at byte {offset}")


class DomainError(ForgeError):
    """Raised when f leaves the reals or is not finite at a requested point."""

    def __init__(self, reason: str, point: Optional[float] = None):
        self.reason = reason
        self.point = point
        if point is None:
            super().__init__(reason)
        else:
            super().__init__(f"{reason} at x={point!r}")


class InvalidIntervalError(ForgeError):
    """Raised when [a, b] is empty, reversed or not finite."""
    pass


class LevelOutOfRangeError(ForgeError):
    """Raised when a partition level falls outside [1, max_level]."""
    pass


class OutOfDomainError(ForgeError):
    """Raised when an evaluation point lies outside [a, b]."""
    pass


class ConfigurationError(ForgeError):
    """Raised for invalid settings, config files or run configurations."""
    pass
