"""Exception hierarchy shared by every module of the package."""


class AekmError(Exception):
    """Base class for all errors raised by this package."""


class PoleError(AekmError, ValueError):
    """Argument lies on (or numerically at) a pole of the gamma function."""


class ContourError(AekmError):
    """No admissible vertical contour separates the two pole families."""


class ConvergenceError(AekmError):
    """A quadrature failed to reach the requested tolerance."""


class CoefficientOverflow(AekmError, OverflowError):
    """Series coefficients left the representable floating-point range."""


class FingerprintMismatch(AekmError, ValueError):
    """Series coefficients were computed for a different channel."""


class NotConverged(AekmError):
    """The truncation selector hit its term limit before reaching tolerance."""


class DomainError(AekmError, ValueError):
    """A closed form is evaluated outside the region where it converges."""


class UnresolvedConstant(AekmError):
    """An asymptotic constant failed its numerical validation."""


class ArgumentResolutionError(AekmError):
    """None of the candidate H-function arguments reproduces the oracle."""


class OracleMismatch(AekmError):
    """A closed form disagrees with its independent oracle."""

    def __init__(self, message, *, exact=None, oracle=None, tolerance=None):
        super().__init__(message)
        self.exact = exact
        self.oracle = oracle
        self.tolerance = tolerance


class RangeViolation(AekmError, ValueError):
    """A probability-valued result left [0, 1] by more than its error estimate."""
