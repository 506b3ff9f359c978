"""Exception hierarchy for Frechet Polytope.

The CLI maps ``ValidationError`` (and subclasses) to exit status 2 and
``ConsistencyError`` to exit status 1.
"""

from typing import Optional


class FrechetError(Exception):
    """Base class for all library errors."""


class ValidationError(FrechetError, ValueError):
    """Input rejected: malformed text or a violated constraint."""

    def __init__(self, message: str, constraint: Optional[str] = None):
        super().__init__(message)
        self.constraint = constraint


class PmfValidationError(ValidationError):
    """A vector is not a member of F_d(p)."""


class DimensionGuardError(ValidationError):
    """Brute-force work requested above the configured dimension guard."""


class ConfigError(FrechetError):
    """Malformed environment configuration."""


class ConsistencyError(FrechetError):
    """An asserted mathematical postcondition failed."""
