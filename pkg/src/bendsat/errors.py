"""Error types shared across the solver.

Every error carries a stable machine-readable ``code`` so the CLI and tests can
match on it without parsing messages.
"""

from __future__ import annotations


class BendsatError(Exception):
    """Base class for all solver errors."""

    code = "INTERNAL"

    def __init__(self, message: str = "", **details: object) -> None:
        super().__init__(message or self.code)
        self.message = message
        self.details = details

    def __str__(self) -> str:
        if self.message:
            return f"{self.code}: {self.message}"
        return self.code


class NotABendError(BendsatError):
    """The given literals cannot be arranged into a bend."""

    code = "REJECTED_NOT_A_BEND"


class DifferentVariablesError(BendsatError):
    code = "DIFFERENT_VARIABLES"


class VariableMismatchError(BendsatError):
    code = "VARIABLE_MISMATCH"


class UnassignedVariableError(BendsatError):
    code = "UNASSIGNED_VARIABLE"


class VariableSetMismatchError(BendsatError):
    code = "VARIABLE_SET_MISMATCH"


class SharedEndpointError(BendsatError):
    code = "SHARED_ENDPOINT"


class NotAPathError(BendsatError):
    code = "NOT_A_PATH"


class NotACycleError(BendsatError):
    code = "NOT_A_CYCLE"


class UnknownVariableError(BendsatError):
    code = "UNKNOWN_VARIABLE"


class NoDisjunctDominatesError(BendsatError):
    """Internal invariant violation in disjunct fixing; never expected."""

    code = "NO_DISJUNCT_DOMINATES"


class NonTvpiInputError(BendsatError):
    code = "NON_TVPI_INPUT"


class EmptyIntervalError(BendsatError):
    """Internal soundness bug during back-substitution; never expected."""

    code = "EMPTY_INTERVAL"


class BudgetExceededError(BendsatError):
    code = "BUDGET_EXCEEDED"


class ParseError(BendsatError):
    code = "PARSE_ERROR"

    def __init__(self, message: str, location: object = None) -> None:
        super().__init__(message)
        self.location = location

    def __str__(self) -> str:
        if self.location is not None:
            return f"{self.code}: {self.location}: {self.message}"
        return super().__str__()
