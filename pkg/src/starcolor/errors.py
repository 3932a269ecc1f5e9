"""Exception hierarchy shared by every solver."""


class StarColorError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(StarColorError):
    """Malformed input text (graph file, coloring file, w-expression)."""

    def __init__(self, message: str, line: int | None = None, position: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"position {position}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.position = position


class ContractViolation(StarColorError):
    """A precondition of an operation does not hold."""


class ParameterError(StarColorError):
    """The instance is outside what the chosen method can handle."""


class BudgetExceeded(StarColorError):
    """A search or table grew past its configured budget.

    Distinct from an infeasible answer: nothing may be concluded from it.
    """


class InternalConsistencyError(StarColorError):
    """A solver produced a result that failed independent verification."""
