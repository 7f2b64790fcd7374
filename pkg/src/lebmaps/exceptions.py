"""Exception hierarchy shared by every module."""


class LebmapsError(Exception):
    """Base class for all package errors."""


class DomainError(LebmapsError, ValueError):
    """A point was evaluated outside the domain of a branch."""


class NumericError(LebmapsError, ArithmeticError):
    """An iterative solver failed to converge."""


class PreconditionError(LebmapsError, ValueError):
    """An operation was called on inputs that violate its precondition."""


class BudgetExceededError(LebmapsError, RuntimeError):
    """A cylinder enumeration would exceed the configured budget."""
