"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`InteractError`
so callers (and the CLI exit-code mapping) can catch them in one place.
"""

from __future__ import annotations


class InteractError(Exception):
    """Base class for library errors."""


class InvalidArgument(InteractError, ValueError):
    """An argument is outside the operation's documented preconditions."""


class DomainError(InteractError, ValueError):
    """A point (or shifted point) leaves the unit cube."""


class EvaluationError(InteractError):
    """A function could not be evaluated or integrated."""


class Unsupported(InteractError):
    """The requested operation is not available for this function class."""


class DegenerateError(InteractError, ArithmeticError):
    """A normalisation constant vanishes (zero variance, zero mean factor)."""


class SpecParseError(InteractError):
    """Malformed spec file. ``path`` names the offending JSON location."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message
