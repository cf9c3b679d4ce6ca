"""Effective rate, energy-detection probabilities and average AUC.

Every closed form is written per kernel index ``j`` of the collapsed SNR
density ``f(gamma) = sum_j B_j gamma^(phi_j - 1) exp(-(gamma/gamma_bar)^(alpha/2) / 2)``
(see :func:`aekm.channel.collapsed_prefactors`).  Averages of the exponential
kernel against gamma-type conditional metrics reduce to Fox H-functions of a
single argument, except for the detection probability which needs a double
Mellin-Barnes integral.

Each metric has three routes: the H-function closed form, a small/large-SNR
asymptotic form that replaces one exponential by its leading behaviour, and a
direct adaptive quadrature of the defining integral (the oracle).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .channel import (
    collapsed_prefactors,
    integrate_density_with_error,
    kernel_weights,
    series_coefficients,
)
from .errors import (
    ArgumentResolutionError,
    ConvergenceError,
    DomainError,
    RangeViolation,
    UnresolvedConstant,
)
from .specfun import (
    GammaProductIntegrand2D,
    HFunctionSpec,
    fox_h_scaled,
    marcum_q,
    marcum_q_complement,
    mellin_barnes_2d,
    mellin_barnes_line,
    upper_gamma_regularized,
)

LN2 = math.log(2.0)
METHODS = ("exact_fhf", "asymptotic", "quadrature_oracle")
H_ARGUMENTS = ("derived", "printed", "auto")
# relative agreement that decides between H-argument candidates
ARGUMENT_CHECK_RTOL = 1e-4
# strip width below which the rate kernel's contour is moved past a pole
_NARROW_STRIP = 0.05


@dataclass(frozen=True)
class ErConfig:
    """Delay-exponent/bandwidth product ``A = theta T B / ln 2``."""

    A: float

    def __post_init__(self):
        A = float(self.A)
        if not (math.isfinite(A) and A > 0):
            raise ValueError(f"A must be positive, got {self.A!r}")
        object.__setattr__(self, "A", A)


@dataclass(frozen=True)
class EdConfig:
    """Energy detector with time-bandwidth product ``u`` and threshold ``lambda_``."""

    u: int
    lambda_: float

    def __post_init__(self):
        if int(self.u) != self.u or self.u < 1:
            raise ValueError(f"u must be a positive integer, got {self.u!r}")
        lam = float(self.lambda_)
        if not (math.isfinite(lam) and lam > 0):
            raise ValueError(f"lambda must be positive, got {self.lambda_!r}")
        object.__setattr__(self, "u", int(self.u))
        object.__setattr__(self, "lambda_", lam)

    @classmethod
    def from_pf(cls, u, pf):
        return cls(u, threshold_for_pf(u, pf))


@dataclass(frozen=True)
class MetricResult:
    value: float
    error_estimate: float
    n_terms_used: int
    method: str

    def __post_init__(self):
        if not self.error_estimate >= 0:
            raise ValueError("error_estimate must be non-negative")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")


def _probability(value, err, n_terms, method, lower=0.0):
    if value < lower - err or value > 1.0 + err:
        raise RangeViolation(
            f"{method} value {value!r} outside [{lower}, 1] beyond error {err:.3g}")
    return MetricResult(float(value), float(err), n_terms, method)


def _weights(params, n_terms):
    coeffs = series_coefficients(params, n_terms)
    log_w, sign_w = kernel_weights(params, coeffs)
    log_b, sign_b = collapsed_prefactors(params, coeffs)
    return coeffs, log_w, sign_w, log_b, sign_b


def _fsum_scaled(terms):
    """Sum of ``sign * value * exp(log_scale)`` triples with fsum."""
    return math.fsum(s * v * math.exp(ls) for s, v, ls in terms)


# --------------------------------------------------------------------------
# effective rate

def _er_h_spec(params, er, j):
    phi = params.phi(j)
    half = params.alpha / 2.0
    return HFunctionSpec(2, 1, ((1.0 - phi, half),), ((0.0, 1.0), (er.A - phi, half)))


def _er_argument(params, variant):
    if variant == "derived":
        return 0.5 * params.gamma_bar ** (-params.alpha / 2.0)
    if variant == "printed":
        return 2.0 ** (2.0 / params.alpha)
    raise ValueError(f"unknown H-argument variant {variant!r}")


@lru_cache(maxsize=4096)
def _er_mean(params, er, n_terms, variant):
    """``E[(1+gamma)^-A]`` with its absolute error estimate."""
    _, _, _, log_b, sign_b = _weights(params, n_terms)
    x = _er_argument(params, variant)
    terms, err = [], 0.0
    log_gA = special.gammaln(er.A)
    for j in range(n_terms + 1):
        if sign_b[j] == 0:
            continue
        for value, error, log_scale in _er_h_parts(params, er, j, x):
            scale = log_b[j] + log_scale - log_gA
            terms.append((sign_b[j], value, scale))
            err += error * math.exp(scale)
    return _fsum_scaled(terms), err


def _er_h_parts(params, er, j, x):
    """``H^{2,1}_{1,2}`` of the rate kernel as ``(value, error, log_scale)`` parts.

    For small ``A`` the strip shrinks to width ``A / (alpha/2)`` between the
    poles at ``(phi-A)/(alpha/2)`` and ``phi/(alpha/2)``.  The contour is then
    moved left of the first pole and its residue
    ``Gamma(s0) Gamma(A) x^-s0 / (alpha/2)`` added back.
    """
    spec = _er_h_spec(params, er, j)
    lo, hi = spec.strip()
    half = params.alpha / 2.0
    s0 = (params.phi(j) - er.A) / half
    if hi - lo >= _NARROW_STRIP or s0 <= 0:
        return [fox_h_scaled(spec, x, tol=0.0, rtol=1e-11)]
    bounds = (max(0.0, s0 - 1.0 / half), s0)
    c = spec.saddle_abscissa(x, bounds=bounds)
    ev = mellin_barnes_line(spec, x, c, tol=0.0, rtol=1e-11)
    log_res = special.gammaln(s0) + special.gammaln(er.A) - s0 * math.log(x) - math.log(half)
    return [ev, (1.0, 0.0, log_res)]


def _rate(mean, err, A):
    if not mean > 0:
        raise DomainError(f"E[(1+gamma)^-A] = {mean!r} is not positive")
    value = -math.log(mean) / (A * LN2)
    return value, err / (mean * A * LN2)


def effective_rate_exact(params, er, n_terms, h_argument="derived"):
    """Effective rate ``-(1/A) log2 E[(1+gamma)^-A]`` in bits/s/Hz.

    Parameters
    ----------
    params : FadingParams
    er : ErConfig
    n_terms : int
        Series truncation index ``N``.
    h_argument : {"derived", "printed", "auto"}
        Argument of the H-function.  ``"derived"`` uses
        ``1 / (2 gamma_bar^(alpha/2))``, ``"printed"`` the constant
        ``2^(2/alpha)``.  ``"auto"`` evaluates both and keeps whichever matches
        the quadrature oracle, raising :class:`ArgumentResolutionError` if
        neither does.
    """
    if h_argument not in H_ARGUMENTS:
        raise ValueError(f"unknown H-argument variant {h_argument!r}")
    if h_argument == "auto":
        oracle = er_quadrature_oracle(params, er, n_terms).value
        for variant in ("derived", "printed"):
            try:
                res = effective_rate_exact(params, er, n_terms, variant)
            except (DomainError, ValueError):
                continue
            if abs(res.value - oracle) <= ARGUMENT_CHECK_RTOL * abs(oracle):
                return res
        raise ArgumentResolutionError(
            f"no H-argument candidate reproduces the oracle rate {oracle:.8g}")
    mean, err = _er_mean(params, er, n_terms, h_argument)
    value, verr = _rate(mean, err, er.A)
    return MetricResult(value, verr, n_terms, "exact_fhf")


def _beta_continued(a, b):
    """Euler beta ``Gamma(a) Gamma(b) / Gamma(a+b)`` for ``a > 0``, any non-pole ``b``."""
    if b <= 0 and b == math.floor(b):
        raise DomainError(f"beta function pole at b={b}")
    return (special.gammaln(a) + special.gammaln(b) - special.gammaln(a + b),
            special.gammasgn(b))


def effective_rate_asymptotic(params, er, n_terms):
    """High-SNR effective rate obtained with the exponential kernel set to one.

    Each kernel then integrates to ``B_j B(phi_j, A - phi_j)``.  Convergence of
    the leading term needs ``A > alpha mu / 2``; higher ``j`` use the analytic
    continuation of the beta function.
    """
    phi0 = params.phi(0)
    if er.A <= phi0:
        raise DomainError(f"A={er.A} must exceed alpha*mu/2={phi0}")
    _, _, _, log_b, sign_b = _weights(params, n_terms)
    terms = []
    for j in range(n_terms + 1):
        if sign_b[j] == 0:
            continue
        lb, sb = _beta_continued(params.phi(j), er.A - params.phi(j))
        terms.append((sign_b[j] * sb, 1.0, log_b[j] + lb))
    mean = _fsum_scaled(terms)
    value, verr = _rate(mean, 0.0, er.A)
    return MetricResult(value, verr, n_terms, "asymptotic")


def er_quadrature_oracle(params, er, n_terms):
    coeffs = series_coefficients(params, n_terms)
    mean, err = integrate_density_with_error(
        params, coeffs, lambda g: (1.0 + g) ** (-er.A), epsabs=1e-12, epsrel=1e-12)
    value, verr = _rate(mean, err, er.A)
    return MetricResult(value, verr, n_terms, "quadrature_oracle")


# --------------------------------------------------------------------------
# energy detection

def false_alarm(ed):
    """``Gamma(u, lambda/2) / Gamma(u)``."""
    return float(upper_gamma_regularized(ed.u, ed.lambda_ / 2.0))


def threshold_for_pf(u, pf):
    """Threshold ``lambda`` whose false-alarm probability equals ``pf``."""
    if not 0.0 < pf < 1.0:
        raise ValueError("pf must lie strictly between 0 and 1")
    if int(u) != u or u < 1:
        raise ValueError("u must be a positive integer")
    return 2.0 * float(special.gammainccinv(u, pf))


def adp_integrand(params, ed, j):
    """Double Mellin-Barnes integrand for the ``j``-th kernel missed detection.

    With ``x = lambda/2`` the average of ``1 - Q_u(sqrt(2 gamma), sqrt(lambda))``
    over the unit-mass kernel ``j`` equals the double contour integral of

        x^u / Gamma(mu+j) * Gamma(t1) Gamma(t2) Gamma(u-t1-t2) Gamma(mu+j-2 t2/alpha)
        / (Gamma(u-t2) Gamma(1+u-t1)) * x^(-t1) (2^(2/alpha) gamma_bar)^(-t2).
    """
    u, x = ed.u, ed.lambda_ / 2.0
    m = params.mu + j
    return GammaProductIntegrand2D(
        numerator_factors=((0.0, 1.0, 0.0), (0.0, 0.0, 1.0), (u, -1.0, -1.0),
                           (m, 0.0, -2.0 / params.alpha)),
        denominator_factors=((u, 0.0, -1.0), (1.0 + u, -1.0, 0.0)),
        power_terms=((x, -1.0, 0.0), (2.0 ** (2.0 / params.alpha) * params.gamma_bar, 0.0, -1.0)),
        constant=math.exp(u * math.log(x) - special.gammaln(m)),
    )


@lru_cache(maxsize=4096)
def _adp_exact(params, ed, n_terms):
    _, log_w, sign_w, _, _ = _weights(params, n_terms)
    total, err = [], 0.0
    for j in range(n_terms + 1):
        if sign_w[j] == 0:
            continue
        ev = mellin_barnes_2d(adp_integrand(params, ed, j), tol=1e-8)
        wj = sign_w[j] * math.exp(log_w[j])
        total.append(wj * ev.value)
        err += abs(wj) * ev.error
    return 1.0 - math.fsum(total), err


def adp_exact(params, ed, n_terms):
    """Average detection probability from the double Mellin-Barnes form."""
    value, err = _adp_exact(params, ed, n_terms)
    return _probability(value, err, n_terms, "exact_fhf")


def marcum_constants(u):
    """``(Phi1, k1, Phi2)`` of the small-argument Marcum-Q and kernel H-functions.

    ``Phi1, k1`` come from ``H^{1,0}_{1,3}[. | (1/2, 1); (0, 1), (1-u, 1), (1/2, 1)]``
    and ``Phi2`` from ``H^{1,0}_{0,1}[. | -; (0, 1)]`` (the exponential).
    """
    marcum_h = HFunctionSpec(1, 0, ((0.5, 1.0),), ((0.0, 1.0), (1.0 - u, 1.0), (0.5, 1.0)))
    phi1, k1 = marcum_h.leading_behavior()
    phi2, _ = HFunctionSpec(1, 0, (), ((0.0, 1.0),)).leading_behavior()
    return phi1, k1, phi2


@lru_cache(maxsize=64)
def _validated_constants(u, lambda_):
    """Constants checked against ``1 - Q_u(sqrt(2 gamma), sqrt(lambda))`` at tiny ``gamma``."""
    phi1, k1, phi2 = marcum_constants(u)
    x = lambda_ / 2.0
    spec = HFunctionSpec(1, 1, ((1.0 - u - k1, 1.0),), ((0.0, 1.0), (-u - k1, 1.0)))
    h = fox_h_scaled(spec, x, tol=1e-13, rtol=1e-13).unscaled()
    # small-gamma limit of the missed-detection kernel, as assembled below
    limit = math.pi * lambda_ ** (u + k1) * phi1 * phi2 * 2.0 ** (-u - k1) * h.value
    g = 1e-9
    direct = 1.0 - float(marcum_q(u, math.sqrt(2.0 * g), math.sqrt(lambda_)))
    if k1 != 0 or abs(limit - direct) > 1e-6 * max(direct, 1e-300):
        raise UnresolvedConstant(
            f"Marcum-Q limit {limit!r} does not reproduce {direct!r} (k1={k1})")
    return phi1, k1, phi2, h.value, h.error


def adp_asymptotic(params, ed, n_terms):
    """High-SNR detection probability.

    The Marcum function is replaced by its small-SNR leading form
    ``exp(-gamma) P(u, lambda/2)`` and the fading kernel by one, giving
    ``1 - pi lambda^(u+k1) Phi1 Phi2 sum_j B_j 2^(-u-k1) Gamma(phi_j+k1) H[lambda/2]``.
    """
    u, lam = ed.u, ed.lambda_
    phi1, k1, phi2, h, herr = _validated_constants(u, lam)
    _, _, _, log_b, sign_b = _weights(params, n_terms)
    pref = math.pi * lam ** (u + k1) * phi1 * phi2 * 2.0 ** (-u - k1)
    terms, mag = [], 0.0
    for j in range(n_terms + 1):
        if sign_b[j] == 0:
            continue
        t = math.exp(log_b[j] + special.gammaln(params.phi(j) + k1))
        terms.append(sign_b[j] * t)
        mag += t
    missed = pref * h * math.fsum(terms)
    return MetricResult(1.0 - missed, pref * herr * mag, n_terms, "asymptotic")


def adp_high_snr(params, ed, n_terms, max_terms=2000):
    """High-SNR detection probability with the full Marcum-Q Mellin transform.

    Keeps the fading kernel at one, as :func:`adp_asymptotic` does, but
    integrates ``gamma^(phi-1) (1 - Q_u(sqrt(2 gamma), sqrt(lambda)))`` exactly:

        int_0^inf gamma^(phi-1) (1 - Q_u) d gamma
            = sum_k Gamma(phi+k) / k! * P(u+k, lambda/2).

    :func:`adp_asymptotic` retains only ``k = 0``, which is the small-SNR
    form of the Marcum function and leaves an O(1) relative error in the
    missed detection at high SNR.  This series tends to the exact value.
    """
    x = ed.lambda_ / 2.0
    _, _, _, log_b, sign_b = _weights(params, n_terms)
    terms = []
    for j in range(n_terms + 1):
        if sign_b[j] == 0:
            continue
        phi = params.phi(j)
        parts = []
        for k in range(max_terms):
            t = math.exp(special.gammaln(phi + k) - special.gammaln(k + 1)) * special.gammainc(ed.u + k, x)
            parts.append(t)
            if t < 1e-17 * math.fsum(parts):
                break
        else:
            raise ConvergenceError("Marcum-Q Mellin series did not converge")
        terms.append(sign_b[j] * math.exp(log_b[j]) * math.fsum(parts))
    return MetricResult(1.0 - math.fsum(terms), 0.0, n_terms, "asymptotic")


def adp_quadrature_oracle(params, ed, n_terms):
    coeffs = series_coefficients(params, n_terms)
    b = math.sqrt(ed.lambda_)
    # the lower tail is summed directly so tiny miss probabilities keep their digits
    missed, err = integrate_density_with_error(
        params, coeffs, lambda g: marcum_q_complement(ed.u, math.sqrt(2.0 * g), b),
        epsabs=0.0, epsrel=1e-10)
    return _probability(1.0 - missed, err, n_terms, "quadrature_oracle")


# --------------------------------------------------------------------------
# area under the ROC curve

def _auc_terms(u):
    """``(n, C(r+u-1, r-n) 2^-(r+n+u) / n!)`` for every ``0 <= n <= r < u``."""
    out = []
    for r in range(u):
        for n in range(r + 1):
            out.append((n, math.comb(r + u - 1, r - n) * 2.0 ** (-(r + n + u)) / math.factorial(n)))
    return out


def auc_awgn(u, gamma):
    """AUC of an energy detector in AWGN at instantaneous SNR ``gamma``."""
    if int(u) != u or u < 1:
        raise ValueError("u must be a positive integer")
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise ValueError("gamma must be non-negative")
    s = np.zeros(g.shape)
    for n, coef in _auc_terms(int(u)):
        s = s + coef * g ** n
    out = 1.0 - s * np.exp(-g / 2.0)
    return float(out) if out.ndim == 0 else out


def _check_u(u):
    if int(u) != u or u < 1:
        raise ValueError("u must be a positive integer")
    return int(u)


@lru_cache(maxsize=4096)
def _cauc_exact(params, u, n_terms):
    _, _, _, log_b, sign_b = _weights(params, n_terms)
    x = 2.0 ** (params.alpha / 2.0 - 1.0) * params.gamma_bar ** (-params.alpha / 2.0)
    terms, err = [], 0.0
    for j in range(n_terms + 1):
        if sign_b[j] == 0:
            continue
        phi = params.phi(j)
        for n, coef in _auc_terms(u):
            spec = HFunctionSpec(1, 1, ((1.0 - n - phi, params.alpha / 2.0),), ((0.0, 1.0),))
            ev = fox_h_scaled(spec, x, tol=0.0, rtol=1e-11)
            scale = log_b[j] + (phi + n) * LN2 + math.log(coef) + ev.log_scale
            terms.append((sign_b[j], ev.value, scale))
            err += ev.error * math.exp(scale)
    return _fsum_scaled(terms), err


def avg_auc_exact(params, u, n_terms):
    """Average AUC over the fading distribution via ``H^{1,1}_{1,1}`` terms."""
    cauc, err = _cauc_exact(params, _check_u(u), n_terms)
    return _probability(1.0 - cauc, err, n_terms, "exact_fhf", lower=0.5)


def avg_auc_asymptotic(params, u, n_terms):
    """High-SNR average AUC: the fading kernel's exponential is set to one."""
    u = _check_u(u)
    _, _, _, log_b, sign_b = _weights(params, n_terms)
    terms = []
    for j in range(n_terms + 1):
        if sign_b[j] == 0:
            continue
        phi = params.phi(j)
        for n, coef in _auc_terms(u):
            terms.append(sign_b[j] * math.exp(
                log_b[j] + (phi + n) * LN2 + math.log(coef) + special.gammaln(phi + n)))
    return MetricResult(1.0 - math.fsum(terms), 0.0, n_terms, "asymptotic")


def auc_quadrature_oracle(params, u, n_terms):
    u = _check_u(u)
    coeffs = series_coefficients(params, n_terms)
    # integrate the complement so the oracle keeps the closed form's 1 - sum shape
    cauc, err = integrate_density_with_error(
        params, coeffs, lambda g: 1.0 - auc_awgn(u, g), epsabs=1e-12, epsrel=1e-12)
    return _probability(1.0 - cauc, err, n_terms, "quadrature_oracle", lower=0.5)
