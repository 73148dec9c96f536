"""Shared exception types."""

__all__ = ["DomainError", "CapacityError", "DegenerateError", "BudgetExhausted"]


class DomainError(ValueError):
    """Parameters outside the operation's stated domain."""


class CapacityError(RuntimeError):
    """Instance exceeds the declared desk-scale envelope."""


class DegenerateError(ValueError):
    """Input makes the requested quantity undefined (zero normalizer etc.)."""


class BudgetExhausted(RuntimeError):
    """Search budget ran out before the result was proven optimal."""
