"""The alpha-eta-kappa-mu fading channel.

The instantaneous SNR is ``gamma = gamma_bar * W**(2/alpha)`` where ``W`` is
the total received power of ``2*mu`` Gaussian components (``mu_x`` in-phase,
``mu_y`` quadrature) with dominant (line-of-sight) means.  Its density is the
double series

    f(gamma) = sum_{l=0}^{N} sum_{j=0}^{l}
               alpha (-1)^j 2^(j-mu-1) l! c_l
               / (Gamma(mu+j) (l-j)! j! gamma_bar^phi_j)
               * gamma^(phi_j - 1) * exp(-(gamma/gamma_bar)^(alpha/2) / 2),

with ``phi_j = alpha (mu + j) / 2``.  The coefficients ``c_l`` are the Taylor
coefficients, at ``z = 0``, of ``M(s(z)) * (4/(1-z))**mu`` where ``M`` is the
Laplace transform of ``W`` and ``s(z) = (3+z) / (2(1-z))``; they obey a
linear recursion driven by the cumulants of that generating function.
"""

import hashlib
import math
import warnings
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import integrate, special

from .errors import CoefficientOverflow, DomainError, FingerprintMismatch, NotConverged

LOG2 = math.log(2.0)
DEFAULT_N_MAX = 200
# relative rounding charged per unit of kernel-weight magnitude
_ROUNDING = 1e-15
_BLOCK = 2 ** 16


@dataclass(frozen=True)
class FadingParams:
    """Channel parameters; ``gamma_bar`` is the linear SNR scale of the kernel.

    ``eta`` is the ratio of in-phase to quadrature total scattered power,
    ``kappa`` the ratio of total dominant to total scattered power, ``mu``
    half the number of Gaussian components, ``p`` the ratio of in-phase to
    quadrature component counts and ``q`` the ratio of the in-phase
    dominant-to-scattered power ratio to the quadrature one.  ``gamma_bar``
    is not the mean SNR.
    """

    alpha: float
    eta: float
    kappa: float
    mu: float
    p: float = 1.0
    q: float = 1.0
    gamma_bar: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "eta", "kappa", "mu", "p", "q", "gamma_bar"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
            object.__setattr__(self, name, v)

    def phi(self, j):
        return self.alpha * (self.mu + j) / 2.0

    def with_gamma_bar(self, gamma_bar):
        return replace(self, gamma_bar=gamma_bar)

    @property
    def shape_key(self):
        return (self.eta, self.kappa, self.mu, self.p, self.q)

    def fingerprint(self):
        return hashlib.sha256(repr(self.shape_key).encode()).hexdigest()[:16]

    def series_ratio(self):
        """Geometric decay rate ``max 3|rho|`` of the truncation-error series.

        Each branch contributes a singularity at ``z = -1/rho`` with
        ``rho = (1 - v)/(1 + 3v)`` and ``v`` its per-component variance; the
        mass series is evaluated at ``z = -3``, so it converges only if every
        ``v > 1/3``.
        """
        return max(3.0 * abs((1.0 - v) / (1.0 + 3.0 * v)) for _, v, _ in self.branches())

    def branches(self):
        """``((dof, variance, dominant power), ...)`` for in-phase and quadrature.

        Scattered powers are normalised so the average per-component variance
        is one (total scattered power ``2*mu``).
        """
        eta, kappa, mu, p, q = self.shape_key
        dof_x = 2.0 * p * mu / (1.0 + p)
        dof_y = 2.0 * mu / (1.0 + p)
        scat_x = 2.0 * mu * eta / (1.0 + eta)
        scat_y = 2.0 * mu / (1.0 + eta)
        dom = 2.0 * mu * kappa
        dom_x = dom * q * eta / (1.0 + q * eta)
        dom_y = dom / (1.0 + q * eta)
        return ((dof_x, scat_x / dof_x, dom_x), (dof_y, scat_y / dof_y, dom_y))


@dataclass(frozen=True)
class SeriesCoefficients:
    values: Tuple[float, ...]
    params_fingerprint: str

    @property
    def n_terms(self):
        return len(self.values) - 1

    def as_array(self):
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class TruncationReport:
    n_terms: int
    epsilon: float
    tolerance: float
    method: str = "closed_form"


@lru_cache(maxsize=256)
def _coefficients(shape_key, branches, n_terms):
    mu = shape_key[2]
    a = np.zeros(n_terms + 1)
    a[0] = mu * math.log(4.0)
    n = np.arange(1, n_terms + 1)
    for dof, var, dom in branches:
        rho = (1.0 - var) / (1.0 + 3.0 * var)
        scale = 1.0 + 3.0 * var
        a[0] -= 0.5 * dof * math.log(scale) + 1.5 * dom / scale
        if n_terms:
            a[1:] += 0.5 * dof * rho ** n / n
            a[1:] -= dom * (3.0 * rho ** n + rho ** (n - 1)) / (2.0 * scale)
    c = np.empty(n_terms + 1)
    with np.errstate(over="raise", invalid="raise"):
        try:
            c[0] = math.exp(a[0])
            for l in range(1, n_terms + 1):
                k = np.arange(1, l + 1)
                c[l] = np.dot(k * a[1:l + 1], c[l - 1::-1][:l]) / l
        except (FloatingPointError, OverflowError) as exc:
            raise CoefficientOverflow(f"c_l overflow at l={l}") from exc
    if not np.all(np.isfinite(c)):
        raise CoefficientOverflow("non-finite series coefficient")
    return tuple(float(v) for v in c)


def series_coefficients(params, n_terms):
    """Coefficients ``c_0 .. c_{n_terms}`` of the SNR density series."""
    if n_terms < 0 or int(n_terms) != n_terms:
        raise ValueError("n_terms must be a non-negative integer")
    values = _coefficients(params.shape_key, params.branches(), int(n_terms))
    return SeriesCoefficients(values, params.fingerprint())


def _check(params, coeffs):
    if coeffs.params_fingerprint != params.fingerprint():
        raise FingerprintMismatch("coefficients belong to a different channel")


def _log_signed_sum(log_abs, sign):
    """fsum of sign * exp(log_abs) returned as (log|S|, sign(S))."""
    finite = np.isfinite(log_abs) & (sign != 0)
    if not finite.any():
        return -np.inf, 0.0
    ref = log_abs[finite].max()
    s = math.fsum((sign[finite] * np.exp(log_abs[finite] - ref)).tolist())
    if s == 0:
        return -np.inf, 0.0
    return ref + math.log(abs(s)), math.copysign(1.0, s)


def series_terms(params, coeffs):
    """Log-magnitudes and signs of every ``(l, j)`` prefactor of the density.

    Entry ``[l, j]`` is the factor multiplying
    ``gamma^(phi_j-1) exp(-(gamma/gamma_bar)^(alpha/2)/2)``; ``-inf`` for
    ``j > l``.
    """
    _check(params, coeffs)
    c = coeffs.as_array()
    L = len(c) - 1
    l = np.arange(L + 1)[:, None]
    j = np.arange(L + 1)[None, :]
    mu, alpha = params.mu, params.alpha
    valid = j <= l
    with np.errstate(divide="ignore"):
        log_c = np.log(np.abs(c))[:, None]
    lj = np.where(valid, l - j, 0)
    log_abs = (math.log(alpha) + (j - mu - 1) * LOG2 + special.gammaln(l + 1) + log_c
               - special.gammaln(mu + j) - special.gammaln(lj + 1) - special.gammaln(j + 1)
               - params.phi(j) * math.log(params.gamma_bar))
    log_abs = np.where(valid, log_abs, -np.inf)
    sign = np.where(valid, np.sign(c)[:, None] * (-1.0) ** j, 0.0)
    return log_abs, sign


def kernel_weights(params, coeffs):
    """Per-``j`` weights of the unit-mass kernels, ``(log|w_j|, sign w_j)``.

    The density equals ``sum_j w_j h_j(gamma)`` where ``h_j`` is the density of
    ``gamma_bar * G**(2/alpha)`` with ``G ~ Gamma(mu + j, scale 2)``; the
    weights do not depend on ``gamma_bar``.
    """
    _check(params, coeffs)
    return _kernel_weights(coeffs.values)


@lru_cache(maxsize=256)
def _kernel_weights(values):
    c = np.asarray(values)
    L = len(c) - 1
    log_w = np.full(L + 1, -np.inf)
    sign_w = np.zeros(L + 1)
    with np.errstate(divide="ignore"):
        log_c = np.log(np.abs(c))
    for j in range(L + 1):
        l = np.arange(j, L + 1)
        la = log_c[j:] + special.gammaln(l + 1) - special.gammaln(l - j + 1) - special.gammaln(j + 1)
        s, sg = _log_signed_sum(la, np.sign(c[j:]))
        log_w[j] = s + 2 * j * LOG2
        sign_w[j] = sg * (-1.0) ** j
    return log_w, sign_w


def collapsed_prefactors(params, coeffs):
    """``B_j = sum_l K_{l,j}``: the density prefactor of each power of gamma."""
    log_w, sign_w = kernel_weights(params, coeffs)
    j = np.arange(len(log_w))
    log_b = (log_w - math.log(2.0 / params.alpha) - (params.mu + j) * LOG2
             - params.phi(j) * math.log(params.gamma_bar) - special.gammaln(params.mu + j))
    return log_b, sign_w


def _density(params, coeffs, gamma, with_kernel):
    gamma = np.asarray(gamma, dtype=float)
    if np.any(~(gamma > 0)):
        raise ValueError("gamma must be positive")
    log_b, sign_b = collapsed_prefactors(params, coeffs)
    j = np.arange(len(log_b))
    g = np.atleast_1d(gamma)[..., None]
    expo = log_b + (params.phi(j) - 1.0) * np.log(g)
    if with_kernel:
        expo = expo - 0.5 * (g / params.gamma_bar) ** (params.alpha / 2.0)
    out = np.sum(sign_b * np.exp(expo), axis=-1)
    return float(out[0]) if gamma.ndim == 0 else out.reshape(gamma.shape)


def snr_moment(params, coeffs, order):
    """``E[gamma^order]`` under the truncated density, for ``order > -alpha mu / 2``."""
    log_w, sign_w = kernel_weights(params, coeffs)
    s = 2.0 * order / params.alpha
    m = params.mu + np.arange(len(log_w))
    if np.any(m + s <= 0):
        raise ValueError("moment order too negative for this channel")
    log_t = log_w + s * LOG2 + special.gammaln(m + s) - special.gammaln(m)
    ls, sg = _log_signed_sum(log_t, sign_w)
    return sg * math.exp(ls + order * math.log(params.gamma_bar))


def gamma_bar_for_mean_snr(params, mean_snr, n_terms):
    """Kernel scale ``gamma_bar`` that makes the mean SNR equal ``mean_snr``."""
    unit = params.with_gamma_bar(1.0)
    return mean_snr / snr_moment(unit, series_coefficients(unit, n_terms), 1.0)


def pdf_truncated(params, coeffs, gamma):
    """N-term SNR density at ``gamma`` (scalar or array)."""
    return _density(params, coeffs, gamma, True)


def pdf_asymptotic(params, coeffs, gamma):
    """Small-``gamma`` form of the density: the exponential kernel set to one."""
    return _density(params, coeffs, gamma, False)


def cdf_truncated(params, coeffs, gamma):
    """CDF implied by :func:`pdf_truncated`, via regularized incomplete gammas."""
    _check(params, coeffs)
    gamma = np.asarray(gamma, dtype=float)
    log_w, sign_w = kernel_weights(params, coeffs)
    w = sign_w * np.exp(log_w)
    x = 0.5 * (np.maximum(gamma, 0.0) / params.gamma_bar) ** (params.alpha / 2.0)
    out = np.zeros(x.shape)
    for j, wj in enumerate(w):
        if wj:
            out = out + wj * special.gammainc(params.mu + j, x)
    return float(out) if out.ndim == 0 else out


def _term_masses(coeffs):
    """Mass of each row ``l`` of the series: ``sum_j c_l C(l,j) (-4)^j = c_l (-3)^l``."""
    c = np.asarray(coeffs.values)
    return c * (-3.0) ** np.arange(len(c))


def truncation_error(params, coeffs, n_terms=None):
    """``1 - integral of the density truncated after l = n_terms``.

    Every ``(l, j)`` term integrates in closed form to
    ``c_l * C(l, j) * (-4)^j`` independently of ``gamma_bar`` and ``alpha``,
    so row ``l`` carries ``c_l (-3)^l``.
    """
    _check(params, coeffs)
    if n_terms is None:
        n_terms = coeffs.n_terms
    if not 0 <= n_terms <= coeffs.n_terms:
        raise ValueError("n_terms exceeds the available coefficients")
    masses = _term_masses(coeffs)
    return 1.0 - math.fsum(masses[:n_terms + 1].tolist())


def truncation_error_quadrature(params, coeffs, n_terms=None):
    """Same quantity as :func:`truncation_error` by adaptive quadrature."""
    if n_terms is None:
        n_terms = coeffs.n_terms
    sub = SeriesCoefficients(coeffs.values[:n_terms + 1], coeffs.params_fingerprint)
    return 1.0 - integrate_density(params, sub, lambda g: np.ones_like(g))


def integrate_density(params, coeffs, func, epsabs=1e-12, epsrel=1e-12):
    """``integral func(gamma) * pdf_truncated(gamma) d gamma`` by adaptive quadrature.

    Integrates in the power domain ``w = (gamma/gamma_bar)^(alpha/2)`` where the
    density has a fixed scale, splitting at a few multiples of the mean power.
    """
    return integrate_density_with_error(params, coeffs, func, epsabs, epsrel)[0]


def integrate_density_with_error(params, coeffs, func, epsabs=1e-12, epsrel=1e-12):
    """As :func:`integrate_density`, returning ``(value, abs_error_estimate)``."""
    a, gb = params.alpha, params.gamma_bar

    def integrand(w):
        g = gb * w ** (2.0 / a)
        jac = gb * (2.0 / a) * w ** (2.0 / a - 1.0)
        return float(func(np.float64(g)) * pdf_truncated(params, coeffs, g) * jac)

    mean_w = 2.0 * params.mu * (1.0 + params.kappa)
    breaks = [0.0, 0.25 * mean_w, mean_w, 3.0 * mean_w + 20.0, np.inf]
    total, err = 0.0, 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        with warnings.catch_warnings():
            # tiny integrands trip the roundoff detector; the error estimate is kept
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            v, e = integrate.quad(integrand, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=200)
        total += v
        err += e
    return total, err


def choose_n_terms(params, tolerance, n_max=DEFAULT_N_MAX, method="closed_form"):
    """Smallest ``N <= n_max`` whose truncation error is within ``tolerance``."""
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    ratio = params.series_ratio()
    if ratio >= 1.0:
        raise DomainError(
            f"series diverges for this channel (decay ratio {ratio:.3f} >= 1); "
            "every branch needs per-component variance above 1/3")
    coeffs = series_coefficients(params, n_max)
    if method == "closed_form":
        masses = _term_masses(coeffs)
        partial = []
        for n in range(n_max + 1):
            partial.append(masses[n])
            eps = 1.0 - math.fsum(partial)
            if abs(eps) <= tolerance:
                return _conditioned(params, coeffs, TruncationReport(n, eps, tolerance, method))
    elif method == "quadrature":
        for n in range(n_max + 1):
            eps = truncation_error_quadrature(params, coeffs, n)
            if abs(eps) <= tolerance:
                return _conditioned(params, coeffs, TruncationReport(n, eps, tolerance, method))
    else:
        raise ValueError(f"unknown method {method!r}")
    raise NotConverged(f"|epsilon| > {tolerance:g} after {n_max} terms")


def _conditioned(params, coeffs, report):
    # the density sums kernels with alternating weights; rounding scales with sum |w_j|
    sub = SeriesCoefficients(coeffs.values[:report.n_terms + 1], coeffs.params_fingerprint)
    log_w, _ = kernel_weights(params, sub)
    rounding = _ROUNDING * float(np.sum(np.exp(log_w)))
    if rounding > report.tolerance:
        raise NotConverged(
            f"kernel weights sum to {rounding / _ROUNDING:.3g} in magnitude; rounding "
            f"({rounding:.2g}) exceeds the tolerance {report.tolerance:g}")
    return report


def sample_power(params, seed, count, stream=0):
    """Draws of the normalised power ``W = (gamma/gamma_bar)^(alpha/2)``.

    Blocks of ``2**16`` draws use child seeds of ``SeedSequence(seed)`` on a
    Philox generator, so the first ``k`` draws do not depend on ``count``.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    root = np.random.SeedSequence(seed, spawn_key=(stream,))
    n_blocks = -(-count // _BLOCK)
    children = root.spawn(n_blocks)
    (dx, vx, px), (dy, vy, py) = params.branches()
    out = np.empty(count)
    for b, child in enumerate(children):
        # one generator per branch keeps every prefix independent of ``count``
        rx, ry = (np.random.Generator(np.random.Philox(s)) for s in child.spawn(2))
        size = min(_BLOCK, count - b * _BLOCK)
        wx = vx * rx.noncentral_chisquare(dx, px / vx, size)
        wy = vy * ry.noncentral_chisquare(dy, py / vy, size)
        out[b * _BLOCK:b * _BLOCK + size] = wx + wy
    return out


def sample_snr(params, seed, count, stream=0):
    """Monte Carlo draws of the instantaneous SNR, reproducible for a fixed seed."""
    return params.gamma_bar * sample_power(params, seed, count, stream) ** (2.0 / params.alpha)
