"""Exception hierarchy shared by every module."""


class MixMomentsError(Exception):
    """Base class for all package errors."""


class PoleError(MixMomentsError, ZeroDivisionError):
    """Argument sits on (or numerically at) a pole."""


class DomainError(MixMomentsError, ValueError):
    """Argument outside the supported range."""


class ConvergenceError(MixMomentsError, ArithmeticError):
    """An iterative or truncated procedure failed to reach its tolerance."""


class NearZeroError(MixMomentsError, ArithmeticError):
    """A divisor is below the accuracy threshold (e.g. near a zeta zero)."""


class MissingInputError(MixMomentsError, ValueError):
    """A required L-value or normalization was not supplied."""


class InsufficientCoefficientsError(MixMomentsError, ValueError):
    """A coefficient record is too short for the requested evaluation."""


class UnsupportedParityError(MixMomentsError, ValueError):
    """Odd Maass forms are not supported."""


class InvalidGrowthError(MixMomentsError, ValueError):
    """A growth exponent equals 0 or 1, where regularization is undefined."""


class RegimeError(MixMomentsError, ValueError):
    """Input falls in none of the case guards of a piecewise function."""


class ValidationError(MixMomentsError, ValueError):
    """A record failed its invariants."""


class SchemaDriftError(MixMomentsError, ValueError):
    """A remote payload does not match any declared field layout."""

    def __init__(self, message, raw=None):
        super().__init__(message)
        self.raw = raw


class FixtureParseError(MixMomentsError, ValueError):
    """A fixture file is malformed; carries the byte offset and field."""

    def __init__(self, message, offset=None, line=None, field=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if offset is not None:
            loc.append(f"byte offset {offset}")
        if field is not None:
            loc.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)
        self.offset = offset
        self.line = line
        self.field = field


class NetworkError(MixMomentsError, OSError):
    """Remote fetch failed."""
