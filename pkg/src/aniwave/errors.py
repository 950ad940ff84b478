"""Shared exception types.

Error classes map onto the harness exit codes: schema problems exit 2,
numerical instability exits 3, resource exhaustion exits 4.
"""

from __future__ import annotations


class DomainError(ValueError):
    """An operation was called outside its mathematical domain.

    The message names the offending quantity (e.g. the vanishing
    denominator), so callers can report precisely what was violated.
    """


class SchemaError(ValueError):
    """A config file or structured input failed validation."""


class InstabilityError(RuntimeError):
    """The time stepper produced non-finite values."""

    def __init__(self, t: float, detail: str = ""):
        self.t = float(t)
        msg = f"non-finite values at t={t:.6g}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ResourceError(OSError):
    """Filesystem or memory resources were unavailable."""
