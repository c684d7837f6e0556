"""Exception types raised across the package."""


class KerrBlowupError(Exception):
    """Base class for all package errors."""


class InvalidInputError(KerrBlowupError, ValueError):
    """Parameters violate a documented precondition."""


class DomainError(KerrBlowupError, ValueError):
    """A function was evaluated outside its domain."""


class PoleDomainError(DomainError):
    """The closed-form solution was evaluated at or beyond its pole."""


class DegenerateInitialDataError(InvalidInputError):
    """Initial data with a vanishing field or derivative."""


class InapplicableBoundError(KerrBlowupError, ValueError):
    """The blow-up bound does not apply to the given data."""


class ConfigError(KerrBlowupError, ValueError):
    """Malformed or inconsistent run configuration."""
