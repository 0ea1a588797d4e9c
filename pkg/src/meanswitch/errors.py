"""Exception classes shared across the package.

The CLI maps these onto exit codes: parse errors exit 2, validation and
domain errors exit 3, numerical failures exit 4.
"""


class MeanSwitchError(Exception):
    """Base class for all package errors."""


class ParseError(MeanSwitchError, ValueError):
    """Malformed textual input (generator mini-language, weights, CSV, JSON)."""


class ValidationError(MeanSwitchError, ValueError):
    """A domain object violates one of its invariants."""


class InvalidSpecError(ValidationError):
    """Generator parameters violate the catalog invariants on the given interval."""


class DomainError(MeanSwitchError, ValueError):
    """An argument lies outside the working interval or domain of definition."""


class OutOfImageError(MeanSwitchError, ArithmeticError):
    """A value exceeds the generator image hull by more than the allowed tolerance."""


class NumericalError(MeanSwitchError, ArithmeticError):
    """A non-finite value was produced where a finite one is required."""
