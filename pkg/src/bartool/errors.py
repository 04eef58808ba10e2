"""Shared exception types.

Every failure mode that callers are expected to handle gets its own
class; anything else is a plain bug and surfaces as a stock exception.
"""


class BartoolError(Exception):
    """Base class for all package-specific errors."""


class ContractViolation(BartoolError, ValueError):
    """An argument broke a stated precondition (reported, never silently fixed)."""


class LevelCapExceeded(BartoolError, RuntimeError):
    """A tree level grew past the configured combinatorial budget."""


class SearchCapExceeded(BartoolError, RuntimeError):
    """Child search in a spread exhausted its cap (defective spread spec)."""


class MalformedCodeError(BartoolError, ValueError):
    """A binary sequence is not shaped like a block code."""


class KindNotSupportedError(BartoolError, TypeError):
    """A bar translation was asked for a representation kind it cannot produce."""


class NoCommitmentError(BartoolError, RuntimeError):
    """A neighborhood function never committed within its depth bound."""


class NoNetCandidateError(BartoolError, RuntimeError):
    """No net index certifies the required proximity (point too far from the compact set)."""


class InstanceValidationError(BartoolError, ValueError):
    """An instance file or supplied oracle failed validation.

    ``witness`` carries the offending object when one exists.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetExhausted(BartoolError, RuntimeError):
    """A bounded search ended without a definite answer."""
