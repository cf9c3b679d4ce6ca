"""Generalized Marcum Q-function and the regularized upper incomplete gamma."""

import numpy as np
from scipy import special

# Chernoff bound below which the tail is treated as exactly 0 or 1.
_SATURATION = 1e-17


def upper_gamma_regularized(u, x):
    """``Gamma(u, x) / Gamma(u)`` for ``u > 0`` and ``x >= 0``."""
    u = np.asarray(u, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(~(u > 0)):
        raise ValueError("u must be positive")
    if np.any(~(x >= 0)):
        raise ValueError("x must be non-negative")
    out = special.gammaincc(u, x)
    return float(out) if out.ndim == 0 else out


def _poisson_mixture(u, lam, x):
    """sum_k Pois(k; lam) * Q(u + k, x), summed outwards from the Poisson mode."""
    k0 = np.floor(lam)
    logp0 = -lam + special.xlogy(k0, lam) - special.gammaln(k0 + 1)
    p0 = np.exp(logp0)
    q0 = special.gammaincc(u + k0, x)
    # increment Q(a+1, x) - Q(a, x) = x^a e^-x / Gamma(a+1) at a = u + k0
    logt0 = -x + special.xlogy(u + k0, x) - special.gammaln(u + k0 + 1)
    steps = int(np.ceil(10.0 * np.sqrt(lam.max(initial=0.0)) + 30))

    total = p0 * q0
    mass = p0.copy()
    # forward: k = k0 + 1, k0 + 2, ...
    p, q, t = p0.copy(), q0.copy(), np.exp(logt0)
    for i in range(1, steps + 1):
        k = k0 + i
        p = p * lam / k
        q = np.minimum(q + t, 1.0)
        t = t * x / (u + k)
        total = total + p * q
        mass = mass + p
    # backward: k = k0 - 1, ..., 0
    p, q = p0.copy(), q0.copy()
    t = np.exp(logt0) * (u + k0) / np.where(x > 0, x, 1.0)  # increment at a = u + k0 - 1
    for i in range(1, steps + 1):
        k = k0 - i
        live = k >= 0
        if not live.any():
            break
        p = np.where(live, p * (k + 1) / np.where(lam > 0, lam, 1.0), 0.0)
        q = np.maximum(q - t, 0.0)
        t = t * (u + k) / np.where(x > 0, x, 1.0)
        total = total + np.where(live, p * q, 0.0)
        mass = mass + p
    # dividing by the summed weights cancels the rounding error of p0
    return total / mass


def marcum_q(u, a, b):
    """Generalized Marcum Q-function ``Q_u(a, b)``.

    Evaluated as the Poisson mixture ``sum_k e^-l l^k / k! * Gamma(u+k, b^2/2) /
    Gamma(u+k)`` with ``l = a^2/2``, i.e. the tail of a noncentral chi-square
    with ``2u`` degrees of freedom.  Arrays are accepted for ``a`` and ``b``;
    points whose Chernoff bound puts them within ``1e-17`` of 0 or 1 are
    saturated without summation.
    """
    if int(u) != u or u < 1:
        raise ValueError("u must be a positive integer")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(~(a >= 0)) or np.any(~(b >= 0)):
        raise ValueError("a and b must be non-negative")
    a, b = np.broadcast_arrays(a, b)
    shape = a.shape
    a = a.ravel()
    b = b.ravel()
    out = np.empty(a.shape)

    zero_b = b == 0
    zero_a = (a == 0) & ~zero_b
    out[zero_b] = 1.0
    out[zero_a] = special.gammaincc(u, 0.5 * b[zero_a] ** 2)

    rest = ~(zero_a | zero_b)
    ar, br = a[rest], b[rest]
    with np.errstate(divide="ignore"):
        bound = u * np.abs(np.log(br / ar)) - 0.5 * (ar - br) ** 2
    hi = (ar > br) & (bound < np.log(_SATURATION))
    lo = (ar < br) & (bound < np.log(_SATURATION))
    mid = ~(hi | lo)
    res = np.empty(ar.shape)
    res[hi] = 1.0
    res[lo] = 0.0
    if mid.any():
        res[mid] = _poisson_mixture(float(u), 0.5 * ar[mid] ** 2, 0.5 * br[mid] ** 2)
    out[rest] = res
    out = np.clip(out, 0.0, 1.0).reshape(shape)
    return float(out) if out.ndim == 0 else out


def _lower_mixture(u, lam, x):
    """log of ``sum_k Pois(k; lam) P(u+k, x)`` for scalar ``lam, x``.

    The summand is log-concave in ``k`` (a Poisson pmf times a Poisson
    survival function), so the sum is taken over a window around its peak,
    located first on a coarse grid.
    """
    kmax = lam + 10.0 * np.sqrt(lam) + 40.0
    coarse = np.unique(np.round(np.linspace(0.0, kmax, 257)))

    def log_terms(k):
        with np.errstate(divide="ignore"):
            return (-lam + special.xlogy(k, lam) - special.gammaln(k + 1)
                    + np.log(special.gammainc(u + k, x)))

    peak = coarse[np.argmax(log_terms(coarse))]
    half = kmax / 256.0 + 10.0 * np.sqrt(peak + 1.0) + 40.0
    k = np.arange(max(0.0, np.floor(peak - half)), np.ceil(peak + half) + 1)
    return special.logsumexp(log_terms(k))


def marcum_q_complement(u, a, b):
    """``1 - Q_u(a, b)``, accurate in relative terms when it is tiny.

    Sums ``Pois(k; a^2/2) * P(u+k, b^2/2)`` with the regularized lower
    incomplete gamma ``P`` directly instead of subtracting ``Q`` from one.
    """
    if int(u) != u or u < 1:
        raise ValueError("u must be a positive integer")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(~(a >= 0)) or np.any(~(b >= 0)):
        raise ValueError("a and b must be non-negative")
    a, b = np.broadcast_arrays(a, b)
    out = np.empty(a.shape)
    for idx in np.ndindex(a.shape):
        lam, x = 0.5 * a[idx] ** 2, 0.5 * b[idx] ** 2
        if x == 0:
            out[idx] = 0.0
        else:
            out[idx] = min(1.0, float(np.exp(_lower_mixture(float(u), lam, x))))
    return float(out) if out.ndim == 0 else out
