"""Shared error types."""


class BudgetError(RuntimeError):
    """Raised when an operation would exceed its configured work limit."""


class ConfigError(ValueError):
    """Raised for malformed user-facing configuration (CLI, text specs)."""
