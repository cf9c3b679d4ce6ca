"""Double Mellin-Barnes integrals of gamma-function products."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.optimize import linprog

from ..errors import ContourError
from .contour import Evaluation, ScaledEvaluation, integrate_plane
from .gamma import log_gamma_complex

Factor = Tuple[float, float, float]

_CONTOUR_BOX = 50.0
_MARGIN_CAP = 1.0


@dataclass(frozen=True)
class GammaProductIntegrand2D:
    """``constant * prod Gamma(num) / prod Gamma(den) * prod base**(e1 t1 + e2 t2)``.

    Each gamma factor ``(c, d1, d2)`` stands for ``Gamma(c + d1*t1 + d2*t2)``
    and each power term ``(base, e1, e2)`` for ``base**(e1*t1 + e2*t2)``.
    """

    numerator_factors: Tuple[Factor, ...]
    denominator_factors: Tuple[Factor, ...] = ()
    power_terms: Tuple[Factor, ...] = ()
    constant: float = 1.0

    def __post_init__(self):
        def freeze(items):
            return tuple(tuple(float(v) for v in item) for item in items)

        object.__setattr__(self, "numerator_factors", freeze(self.numerator_factors))
        object.__setattr__(self, "denominator_factors", freeze(self.denominator_factors))
        object.__setattr__(self, "power_terms", freeze(self.power_terms))
        if not self.numerator_factors:
            raise ValueError("numerator_factors must be non-empty")
        if any(len(f) != 3 for f in self.numerator_factors + self.denominator_factors + self.power_terms):
            raise ValueError("factors and power terms are (value, coef1, coef2) triples")
        if any(not b > 0 for b, _, _ in self.power_terms):
            raise ValueError("power-term bases must be strictly positive")
        if self.constant == 0 or not np.isfinite(self.constant):
            raise ValueError("constant must be finite and non-zero")
        admissible_contours(self)

    def margins(self, contour1, contour2):
        """Real parts of the numerator gamma arguments on the contour."""
        return np.array([c + d1 * contour1 + d2 * contour2
                         for c, d1, d2 in self.numerator_factors if d1 or d2])

    def log_integrand(self, s1, s2):
        out = np.log(abs(self.constant)) + (1j * np.pi if self.constant < 0 else 0.0)
        out = out + 0j * (s1 + s2)
        for c, d1, d2 in self.numerator_factors:
            out = out + log_gamma_complex(_affine(c, d1, s1, d2, s2), continuous=False)
        for c, d1, d2 in self.denominator_factors:
            out = out - log_gamma_complex(_affine(c, d1, s1, d2, s2), continuous=False)
        for base, e1, e2 in self.power_terms:
            out = out + (e1 * s1 + e2 * s2) * np.log(base)
        return out


def _affine(c, d1, s1, d2, s2):
    # single-variable factors stay on the 1-D axis so broadcasting does the rest
    if d2 == 0:
        return c + d1 * s1
    if d1 == 0:
        return c + d2 * s2
    return c + d1 * s1 + d2 * s2


def admissible_contours(integrand):
    """Contour abscissas deepest inside the pole-placement region.

    Maximises the smallest (normalised) distance from the contour to the
    first pole of every numerator gamma factor, capped at 1; ties are broken
    towards the origin.  Raises :class:`ContourError` if the region is empty.
    """
    rows, rhs, norms = [], [], []
    for c, d1, d2 in integrand.numerator_factors:
        if d1 == 0 and d2 == 0:
            continue
        nrm = np.hypot(d1, d2)
        # c + d.x >= m * |d|  ->  -d.x + |d| m <= c
        rows.append([-d1, -d2, nrm])
        rhs.append(c)
        norms.append(nrm)
    if not rows:
        return 0.0, 0.0
    bounds = [(-_CONTOUR_BOX, _CONTOUR_BOX)] * 2 + [(None, _MARGIN_CAP)]
    res = linprog([0, 0, -1], A_ub=rows, b_ub=rhs, bounds=bounds, method="highs")
    if res.status != 0 or res.x[2] <= 1e-9:
        raise ContourError("no contour placement keeps every numerator gamma pole on its side")
    m_star = res.x[2]
    # Second stage: stay at (nearly) the optimal margin, minimise |x| + |y|.
    a2 = [[r[0], r[1], 0, 0] for r in rows]
    b2 = [b - 0.999 * m_star * n for b, n in zip(rhs, norms)]
    a2 += [[1, 0, -1, 0], [-1, 0, -1, 0], [0, 1, 0, -1], [0, -1, 0, -1]]
    b2 += [0, 0, 0, 0]
    bounds2 = [(-_CONTOUR_BOX, _CONTOUR_BOX)] * 2 + [(0, None)] * 2
    res2 = linprog([0, 0, 1, 1], A_ub=a2, b_ub=b2, bounds=bounds2, method="highs")
    x, y = (res2.x[:2] if res2.status == 0 else res.x[:2])
    return float(x), float(y)


def mellin_barnes_2d_scaled(integrand, contour1=None, contour2=None, tol=1e-8, rtol=0.0):
    if contour1 is None or contour2 is None:
        c1, c2 = admissible_contours(integrand)
        contour1 = c1 if contour1 is None else contour1
        contour2 = c2 if contour2 is None else contour2
    margins = integrand.margins(contour1, contour2)
    if margins.size and margins.min() <= 0:
        raise ContourError(
            f"contours ({contour1}, {contour2}) cross a numerator pole family")

    def log_f(tau1, tau2):
        return integrand.log_integrand(contour1 + 1j * tau1, contour2 + 1j * tau2)

    log_peak = float(log_f(np.zeros((1, 1)), np.zeros((1, 1)))[0, 0].real)
    return integrate_plane(log_f, log_peak, tol, rtol)


def mellin_barnes_2d(integrand, contour1=None, contour2=None, tol=1e-8, rtol=0.0):
    """``(1/(2 pi i))^2`` times the double contour integral of ``integrand``.

    Contours are the vertical lines ``Re t1 = contour1`` and
    ``Re t2 = contour2``; when omitted they are placed by
    :func:`admissible_contours`.

    Returns
    -------
    Evaluation
        ``(value, error)`` with an absolute error estimate.
    """
    return mellin_barnes_2d_scaled(integrand, contour1, contour2, tol, rtol).unscaled()
