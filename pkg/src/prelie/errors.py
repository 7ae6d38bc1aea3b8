"""Exception types shared by all prelie modules."""


class PreLieError(Exception):
    """Base class for every error raised by this package."""


class BoundsError(PreLieError, ValueError):
    """An argument is outside the configured enumeration bounds."""


class DomainError(PreLieError, ValueError):
    """An operand violates a precondition (wrong unit part, not Maurer-Cartan, ...)."""


class TruncationMismatch(PreLieError, ValueError):
    """Binary operation on series with different truncation orders or alphabets."""


class ShapeError(PreLieError, ValueError):
    """Graded spaces or operator shapes are incompatible."""


class ValidationError(PreLieError, ValueError):
    """A structured value (levelization, contraction, JSON input) fails its invariants."""


class ParseError(PreLieError, ValueError):
    """Malformed textual or JSON input.  Carries a human-readable position."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{position}: {message}"
        super().__init__(message)
        self.position = position


class InternalCheckError(PreLieError, RuntimeError):
    """Two independent computation routes disagreed.  Indicates a library bug."""
