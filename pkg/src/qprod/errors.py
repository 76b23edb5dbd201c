"""Exception types shared across the package."""


class QprodError(Exception):
    """Base class for every error raised by this package."""


class DomainError(QprodError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class IncompatibleExponentError(QprodError):
    """Two series whose leading exponents differ by a non-integer."""


class FractionalExponentError(QprodError):
    """A leading exponent that must be an integer (or carry an allowed
    denominator) is not."""


class NonInvertibleError(QprodError):
    """Series with vanishing leading coefficient cannot be inverted."""


class InsufficientPrecisionError(QprodError):
    """More coefficients were requested than are guaranteed valid.

    Raised instead of silently zero-padding: unknown coefficients are
    unknown, not zero.
    """


class NormalizationError(QprodError):
    """Expansion is not normalized to leading coefficient 1."""


class InternalConsistencyError(QprodError):
    """Independently computed internal quantities disagree."""


class SpecValidationError(QprodError):
    """A FormSpec violates one of its declared invariants."""


class ParseError(QprodError):
    """Malformed input file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InsufficientDataError(QprodError):
    """Too few usable points for a regression."""
