"""Error taxonomy shared across the package.

Domain errors signal invalid inputs or broken preconditions (CLI exit
code 1); budget errors signal that an exact computation was refused
because its enumeration / outcome count exceeds the configured budget
(CLI exit code 2).
"""


class DomainError(ValueError):
    """Invalid input: broken invariant, mismatched spaces, bad parameter."""


class BudgetError(RuntimeError):
    """Exact mode refused: enumeration or outcome count exceeds the budget."""

    def __init__(self, message, required=None, budget=None):
        super().__init__(message)
        self.required = required
        self.budget = budget
