"""Turning boundaries tree equalizer: tree combinatorics, channel simulator,
adaptive piecewise-linear equalizers and an experiment harness."""

from .errors import CapacityError, ConfigError, DomainError, ParseError, UsageError

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ConfigError",
    "DomainError",
    "ParseError",
    "UsageError",
    "__version__",
]
