"""Exception hierarchy shared by the numerical modules."""


class SwaveError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SwaveError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(SwaveError, ArithmeticError):
    """A series or iteration could not reach its accuracy target."""


class ToleranceNotMet(ConvergenceError):
    """Adaptive quadrature stopped before reaching the requested tolerance.

    The best available estimate is kept on the exception so callers can
    decide whether it is good enough.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class GridTooSmall(SwaveError):
    """The radial grid truncates more probability than allowed."""


class SolverError(SwaveError):
    """Time stepping aborted; ``series`` holds the samples taken so far."""

    def __init__(self, message, series=None):
        super().__init__(message)
        self.series = series


class BoundaryContamination(SolverError):
    """The wave packet reached the outer edge of the box."""


class NormDrift(SolverError):
    """The discrete norm drifted beyond the allowed budget."""


class InsufficientSampling(SwaveError):
    """A minimum lies too close to the end of a sampled series."""


class ResolutionInsufficient(SwaveError):
    """Successive quadrature refinements disagree by more than requested."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
