"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class CapacityError(ValueError):
    """A request exceeds the supported enumeration / integer range."""


class ParseError(ValueError):
    """Malformed input file."""


class UsageError(ValueError):
    """An operation was called in a way its state does not permit."""


class ConfigError(ValueError):
    """Invalid experiment or channel configuration."""
