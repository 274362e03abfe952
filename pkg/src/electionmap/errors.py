"""Exception hierarchy shared by every module of the package."""


class ElectionMapError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ElectionMapError, ValueError):
    """An argument lies outside the domain of the operation (e.g. unequal masses for EMD)."""


class ParameterError(ElectionMapError, ValueError):
    """A culture or algorithm parameter is out of range or inconsistent."""


class SizeMismatchError(ElectionMapError, ValueError):
    """Two objects that must share a dimension do not."""


class BudgetExceededError(ElectionMapError):
    """An exact computation would exceed its configured size or effort budget."""


class UnsupportedParametersError(ElectionMapError, ValueError):
    """A closed-form formula does not cover the requested parameters."""


class NotAvailableError(ElectionMapError):
    """No closed form exists; carries the proven ``(lower, upper)`` bounds instead."""

    def __init__(self, message: str, bounds: tuple[float, float] | None = None):
        super().__init__(message)
        self.bounds = bounds


class UndefinedCorrelationError(ElectionMapError, ValueError):
    """Correlation requested for a constant vector."""


class ParseError(ElectionMapError, ValueError):
    """Malformed input text. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(ElectionMapError, ValueError):
    """Invalid experiment configuration."""
