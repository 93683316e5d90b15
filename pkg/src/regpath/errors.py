"""Exception hierarchy shared across the solver modules."""

from __future__ import annotations


class RegpathError(Exception):
    """Base class for all library errors."""


class DataError(RegpathError):
    """Bad input data: parse failures, label domain, shape problems, non-finite values."""


class SolverError(RegpathError):
    """A solver could not produce a trustworthy result."""


class ConvergenceError(SolverError):
    """Iterative solver hit its iteration budget before meeting tolerance."""


class BudgetExceededError(SolverError):
    """Path engine exhausted its step budget; carries the partial path."""

    def __init__(self, message, partial_path=None):
        super().__init__(message)
        self.partial_path = partial_path


class KktViolationError(SolverError):
    """Internal consistency failure: a path state violates optimality beyond tolerance."""


class SingularGramError(SolverError):
    """A factored system became numerically singular."""
