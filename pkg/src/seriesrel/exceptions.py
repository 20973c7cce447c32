"""Exception hierarchy shared by every module in the package."""


class SeriesRelError(Exception):
    """Base class for all package errors."""


class DomainError(SeriesRelError, ValueError):
    """An argument or model parameter lies outside its admissible domain."""


class SolverError(SeriesRelError):
    """Base class for failures of the numerical solvers."""


class BracketError(SolverError):
    """The supplied interval does not bracket a root (or an extremum)."""


class ConvergenceError(SolverError):
    """An iterative method exhausted its iteration or subdivision budget."""


class FlatError(SolverError):
    """The function is constant on the interval, so no extremum is defined."""
