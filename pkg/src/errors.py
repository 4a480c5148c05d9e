"""
Exception hierarchy for the coexistence toolkit.

Undefined partial sums and differences are ordinary ``None`` values; the
exceptions below are reserved for malformed inputs and for broken
preconditions of the constructions.
"""

from typing import Any, Dict, Optional


class CoexistenceError(Exception):
    """Base class for all toolkit errors."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.context = context or {}

    def to_dict(self) -> Dict[str, Any]:
        """Convert the error to a dictionary for structured logging."""
        return {
            'error_type': self.__class__.__name__,
            'message': self.message,
            'context': self.context,
        }


class InputError(CoexistenceError, ValueError):
    """Malformed or out-of-scope input (exit code 2)."""


class AxiomBreachError(CoexistenceError):
    """A difference needed by D(X, A) is undefined because (a) or (b) fails."""


class DecompositionBreachError(CoexistenceError):
    """An orthogonal sum required by a simple observable is undefined."""


class ContractError(CoexistenceError):
    """An operation was called on an object lacking a required verified property."""


class ConstructionError(CoexistenceError):
    """The limit observable construction was aborted."""

    def __init__(self, message: str, failed_property: str,
                 context: Optional[Dict[str, Any]] = None):
        super().__init__(message, context)
        self.failed_property = failed_property

    def to_dict(self) -> Dict[str, Any]:
        entry = super().to_dict()
        entry['failed_property'] = self.failed_property
        return entry
