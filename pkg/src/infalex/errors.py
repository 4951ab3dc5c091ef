"""Shared exception types."""


class BudgetExceededError(RuntimeError):
    """A computation was refused because it exceeds the configured resource budget.

    ``reason`` is a machine-readable dict suitable for JSON emission.
    """

    def __init__(self, reason: dict):
        self.reason = reason
        super().__init__(str(reason))


class InternalInconsistencyError(RuntimeError):
    """Two routes that must agree produced different answers."""


class AmbiguousDecompositionError(RuntimeError):
    """An isotypic projection was requested where the Casimir operator cannot
    separate constituents (eigenvalue collision or multiplicity above one)."""
