"""
Error hierarchy shared by the numerical apps.

Domain errors that come from bad input also derive from ValueError so that
callers validating user input can catch them uniformly.
"""


class QBallError(Exception):
    """Base class for every error raised by the qball apps"""


class ConvergenceError(QBallError):
    """A series or infinite product ran out of terms before reaching tolerance"""

    def __init__(self, message: str, terms: int = 0, last_term: float = 0.0):
        super().__init__(message)
        self.terms = terms
        self.last_term = last_term


class PoleError(QBallError):
    """q-Gamma evaluated at a pole, (base^x; base)_inf vanishes"""


class DimensionMismatchError(QBallError, ValueError):
    """Partitions or vectors of different length were combined"""


class CoincidentCoordinatesError(QBallError, ValueError):
    """An alternant was divided by a vanishing Vandermonde"""


class WindowOverflowError(QBallError):
    """An operator image left the truncation window"""

    def __init__(self, message: str, overflow=None):
        super().__init__(message)
        self.overflow = overflow or []


class IllConditionedError(QBallError):
    """A linear solve came back with a residual above tolerance"""

    def __init__(self, message: str, residual: float = 0.0):
        super().__init__(message)
        self.residual = residual


class QuadratureResolutionWarning(UserWarning):
    """The spectral quadrature is too coarse to reproduce f_0 at the origin"""
