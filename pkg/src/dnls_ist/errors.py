"""Exception hierarchy.

``DataError`` subclasses signal inadmissible input (CLI exit code 3);
``ConvergenceError`` subclasses signal a numerical failure (exit code 4).
"""


class ScatteringError(Exception):
    """Base class for all errors raised by this package."""


class DataError(ScatteringError, ValueError):
    pass


class ConvergenceError(ScatteringError, RuntimeError):
    pass


class GridMismatchError(DataError):
    pass


class SpectralConditionViolated(DataError):
    def __init__(self, message, lam=None, margin=None):
        super().__init__(message)
        self.lam = lam
        self.margin = margin


class AlphaVanishes(SpectralConditionViolated):
    pass


class CoverageGapError(DataError):
    pass


class NonFiniteError(ConvergenceError):
    pass


class NoConvergence(ConvergenceError):
    def __init__(self, message, x=None, residual=None):
        super().__init__(message)
        self.x = x
        self.residual = residual


class SingularSystem(ConvergenceError):
    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class BlowupDetected(ConvergenceError):
    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t
