"""Exception hierarchy shared by every module of the package."""


class HeightError(Exception):
    """Base class for all errors raised by petite_hauteur."""


class InvalidPolynomial(HeightError, ValueError):
    pass


class RequiresSquarefree(HeightError, ValueError):
    pass


class ConvergenceFailure(HeightError, ArithmeticError):
    """Root iteration did not converge; ``best`` holds the last iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class InfiniteDistance(HeightError, ValueError):
    pass


class InvalidProjectivePoint(HeightError, ValueError):
    pass


class SingularCurve(HeightError, ValueError):
    pass


class PointNotOnCurve(HeightError, ValueError):
    pass


class UndefinedNaiveHeight(HeightError, ValueError):
    pass


class PrecisionFailure(HeightError, ArithmeticError):
    pass


class InsufficientSampling(HeightError, ValueError):
    pass


class ParseError(HeightError, ValueError):
    """Malformed polynomial, curve or point text."""
