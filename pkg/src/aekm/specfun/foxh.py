"""Univariate Fox H-function by direct Mellin-Barnes contour quadrature."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import special

from ..errors import ContourError
from .contour import Evaluation, ScaledEvaluation, integrate_line
from .gamma import log_gamma_complex

POLE_SEPARATION_TOL = 1e-9
_POLES_CHECKED = 50
# how far past a finite strip edge the saddle search may look
_SADDLE_REACH = 60.0
_SADDLE_NODES = 33
_SADDLE_ROUNDS = 4


@dataclass(frozen=True)
class HFunctionSpec:
    """Orders and coefficient pairs of ``H^{m,n}_{p,q}``.

    ``upper_params`` holds the ``(a_i, A_i)`` pairs and ``lower_params`` the
    ``(b_j, B_j)`` pairs, in the usual order (the first ``n`` upper and first
    ``m`` lower pairs sit in the numerator of the Mellin-Barnes kernel).
    """

    m: int
    n: int
    upper_params: Tuple[Tuple[float, float], ...] = ()
    lower_params: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        up = tuple((float(a), float(A)) for a, A in self.upper_params)
        lo = tuple((float(b), float(B)) for b, B in self.lower_params)
        object.__setattr__(self, "upper_params", up)
        object.__setattr__(self, "lower_params", lo)
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise ValueError(
                f"invalid orders m={self.m}, n={self.n}, p={self.p}, q={self.q}")
        if any(A <= 0 for _, A in up) or any(B <= 0 for _, B in lo):
            raise ValueError("all A_i and B_j must be strictly positive")
        if self.min_pole_distance() <= POLE_SEPARATION_TOL:
            raise ValueError("left and right pole families intersect")

    @property
    def p(self):
        return len(self.upper_params)

    @property
    def q(self):
        return len(self.lower_params)

    def _left_poles(self):
        k = np.arange(_POLES_CHECKED)
        return np.concatenate([-(b + k) / B for b, B in self.lower_params[:self.m]] or [np.empty(0)])

    def _right_poles(self):
        k = np.arange(_POLES_CHECKED)
        return np.concatenate([(1 - a + k) / A for a, A in self.upper_params[:self.n]] or [np.empty(0)])

    def min_pole_distance(self):
        left, right = self._left_poles(), self._right_poles()
        if left.size == 0 or right.size == 0:
            return np.inf
        return float(np.min(np.abs(left[:, None] - right[None, :])))

    def strip(self):
        """Open interval of admissible real contour abscissas."""
        lo = max((-b / B for b, B in self.lower_params[:self.m]), default=-np.inf)
        hi = min(((1 - a) / A for a, A in self.upper_params[:self.n]), default=np.inf)
        return lo, hi

    def abscissa(self):
        lo, hi = self.strip()
        if not lo < hi:
            raise ContourError(
                f"no vertical contour separates the poles (strip [{lo:.6g}, {hi:.6g}])")
        if np.isfinite(lo) and np.isfinite(hi):
            return 0.5 * (lo + hi)
        if np.isfinite(lo):
            return lo + 1.0
        if np.isfinite(hi):
            return hi - 1.0
        return 0.0

    def saddle_abscissa(self, x, margin=0.25, bounds=None):
        """Abscissa minimising the integrand modulus on the real axis.

        The value of the integral is independent of the abscissa, but its
        quadrature is not: far from the saddle the integrand is many orders
        larger than the result and cancellation destroys the digits.  The
        search keeps ``min(margin, width/4)`` away from either pole family.
        ``bounds`` replaces the strip, e.g. for a contour shifted past poles.
        """
        lo, hi = self.strip() if bounds is None else bounds
        if not lo < hi:
            raise ContourError(
                f"no vertical contour separates the poles (strip [{lo:.6g}, {hi:.6g}])")
        width = hi - lo
        m = min(margin, 0.25 * width)
        a = lo + m if np.isfinite(lo) else (hi - m - _SADDLE_REACH if np.isfinite(hi) else -_SADDLE_REACH)
        b = hi - m if np.isfinite(hi) else a + _SADDLE_REACH
        logx = np.log(x)

        # batched grid search, zoomed around the best node each round
        for _ in range(_SADDLE_ROUNDS):
            c = np.linspace(a, b, _SADDLE_NODES)
            g = self.log_kernel(c + 0j).real - c * logx
            k = int(np.nanargmin(g))
            h = c[1] - c[0]
            a, b = max(c[0], c[k] - h), min(c[-1], c[k] + h)
        return float(c[k])

    def decay_rate(self):
        """``sum B (numerator) + sum A (numerator) - the rest``; must be positive."""
        num = sum(B for _, B in self.lower_params[:self.m]) + sum(A for _, A in self.upper_params[:self.n])
        den = sum(B for _, B in self.lower_params[self.m:]) + sum(A for _, A in self.upper_params[self.n:])
        return num - den

    def log_kernel(self, s):
        """Log of the gamma-ratio part of the Mellin-Barnes integrand at ``s``."""
        s = np.asarray(s, dtype=complex)
        out = np.zeros_like(s)
        for j, (b, B) in enumerate(self.lower_params):
            if j < self.m:
                out = out + log_gamma_complex(b + B * s)
            else:
                out = out - log_gamma_complex(1 - b - B * s)
        for i, (a, A) in enumerate(self.upper_params):
            if i < self.n:
                out = out + log_gamma_complex(1 - a - A * s)
            else:
                out = out - log_gamma_complex(a + A * s)
        return out

    def leading_behavior(self):
        """Return ``(Phi, k)`` with ``H[x] ~ Phi * x**k`` as ``x -> 0``.

        ``k`` is the smallest ``b_j / B_j`` among the first ``m`` lower pairs and
        ``Phi`` is the residue of the kernel at the corresponding pole.
        """
        if self.m == 0:
            raise ValueError("H-function with m = 0 has no left poles")
        ratios = [b / B for b, B in self.lower_params[:self.m]]
        jstar = int(np.argmin(ratios))
        k = ratios[jstar]
        s0 = -k
        phi = 1.0 / self.lower_params[jstar][1]
        for j, (b, B) in enumerate(self.lower_params):
            if j == jstar:
                continue
            if j < self.m:
                phi *= special.gamma(b + B * s0)
            else:
                phi *= special.rgamma(1 - b - B * s0)
        for i, (a, A) in enumerate(self.upper_params):
            if i < self.n:
                phi *= special.gamma(1 - a - A * s0)
            else:
                phi *= special.rgamma(a + A * s0)
        if not np.isfinite(phi):
            raise ValueError("leading pole is not simple")
        return float(phi), float(k)


def fox_h_scaled(spec, x, tol=1e-10, rtol=0.0, abscissa=None):
    """Evaluate ``H[x]`` returning a :class:`ScaledEvaluation`.

    Useful when the value over- or underflows: the true value is
    ``value * exp(log_scale)``.
    """
    if not x > 0 or not np.isfinite(x):
        raise ValueError("fox_h requires a finite x > 0")
    if abscissa is None or abscissa == "saddle":
        c = spec.saddle_abscissa(x)
    elif abscissa == "midpoint":
        c = spec.abscissa()
    else:
        c = float(abscissa)
    lo, hi = spec.strip()
    if not lo < c < hi:
        raise ContourError(f"abscissa {c} outside admissible strip ({lo}, {hi})")
    return mellin_barnes_line(spec, x, c, tol, rtol)


def mellin_barnes_line(spec, x, c, tol=1e-10, rtol=0.0):
    """``(1/2 pi i)`` times the integral of the H kernel along ``Re s = c``.

    No strip check is made: with ``c`` outside the strip the result differs
    from ``H[x]`` by the residues of the poles crossed, which the caller adds.
    Returns a :class:`ScaledEvaluation`.
    """
    if not x > 0 or not np.isfinite(x):
        raise ValueError("x must be finite and positive")
    logx = np.log(x)

    def log_f(tau):
        s = c + 1j * np.asarray(tau)
        return spec.log_kernel(s) - s * logx

    log_peak = float(log_f(np.array([0.0]))[0].real)
    return integrate_line(log_f, log_peak, tol, rtol)


def fox_h(spec, x, tol=1e-10, rtol=0.0, abscissa=None):
    """Fox H-function ``H^{m,n}_{p,q}[x]`` for real ``x > 0``.

    The Mellin-Barnes integral is taken along a vertical line inside the
    strip separating the two pole families.

    Parameters
    ----------
    spec : HFunctionSpec
    x : float
        Positive argument.
    tol, rtol : float
        Absolute and relative quadrature tolerances.
    abscissa : None, "saddle", "midpoint" or float
        Contour placement.  The default (``"saddle"``) minimises the
        integrand modulus over the strip; ``"midpoint"`` uses the strip centre.

    Returns
    -------
    Evaluation
        ``(value, error)`` where ``error`` is the absolute quadrature error
        estimate.

    Raises
    ------
    ContourError
        No vertical line separates the poles.
    ConvergenceError
        The integrand does not decay, or refinement stalls above tolerance.
    """
    return fox_h_scaled(spec, x, tol, rtol, abscissa).unscaled()
