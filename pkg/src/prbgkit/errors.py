"""Exception types shared across generator modules."""


class OutputBudgetExhausted(RuntimeError):
    """Raised when emitting more bits would exceed a generator's output cap."""
