"""Trapezoidal quadrature along vertical contours after a sinh change of variable.

An integrand built from gamma products decays exponentially in ``|Im s|``;
substituting ``Im s = sinh(t)`` makes the decay double exponential in ``t``,
after which the plain trapezoidal rule converges geometrically.  The rule is
refined by halving the step until two consecutive levels agree.
"""

from typing import NamedTuple

import numpy as np

from ..errors import ConvergenceError

# Search range for the truncation point in the sinh variable (sinh(9) ~ 4e3).
_T_CANDIDATES = np.arange(1.0, 9.01, 0.25)
_MIN_LEVEL = 3
_MAX_LEVEL_1D = 14
_MAX_LEVEL_2D = 9
# Relative cut-off for the truncated tail, below the requested tolerance.
_TAIL_FACTOR = 1e-3


class Evaluation(NamedTuple):
    """Quadrature value with its absolute error estimate."""

    value: float
    error: float


class ScaledEvaluation(NamedTuple):
    """``value * exp(log_scale)`` with ``error`` in the same scaled units."""

    value: float
    error: float
    log_scale: float

    def unscaled(self):
        s = np.exp(self.log_scale)
        return Evaluation(self.value * s, self.error * s)


def _log_weight(t):
    return np.log(np.cosh(t))


def _truncation_point_1d(log_f, tol_log):
    """Smallest t beyond which log|f(sinh t)| cosh t stays under tol_log."""
    ts = _T_CANDIDATES
    vals = np.maximum(log_f(np.sinh(ts)).real, log_f(-np.sinh(ts)).real)
    vals = vals + _log_weight(ts)
    below = vals < tol_log
    # need every later candidate to be below as well
    ok = np.flip(np.cumprod(np.flip(below))).astype(bool)
    if not ok.any():
        raise ConvergenceError(
            "contour integrand does not decay within |Im s| < %.0f" % np.sinh(ts[-1]))
    idx = int(np.argmax(ok))
    return ts[idx], float(vals[idx:].max())


def integrate_line(log_f, log_peak, tol, rtol=0.0):
    """Integrate ``(1/2pi) * Re exp(log_f(tau))`` over the real line.

    ``log_f`` maps an array of real ``tau`` to complex log-integrand values;
    ``log_peak`` is a real reference log-magnitude (typically the value at
    ``tau = 0``) used for scaling.  The returned value is in units of
    ``exp(log_peak)``.
    """
    def shifted(tau):
        return log_f(tau) - log_peak

    tol_scaled = max(tol * np.exp(-log_peak), 0.0) if np.isfinite(log_peak) else 0.0
    target = max(tol_scaled, 1e-15)
    t_max, tail_log = _truncation_point_1d(shifted, np.log(_TAIL_FACTOR * target))
    tail = np.exp(tail_log) * 2.0

    prev = None
    for level in range(_MIN_LEVEL, _MAX_LEVEL_1D + 1):
        n = 2 ** level
        t = np.linspace(-t_max, t_max, 2 * n + 1)
        h = t[1] - t[0]
        tau = np.sinh(t)
        vals = np.exp(shifted(tau)).real * np.cosh(t)
        cur = h * vals.sum() / (2.0 * np.pi)
        if prev is not None:
            err = abs(cur - prev) + tail
            floor = 1e-15 * h * np.abs(vals).sum()
            if err <= max(tol_scaled, rtol * abs(cur), floor * 4):
                return ScaledEvaluation(cur, max(err, floor), log_peak)
        prev = cur
    raise ConvergenceError(
        "line quadrature did not converge: last difference %.3e" % err)


def integrate_plane(log_f, log_peak, tol, rtol=0.0):
    """Two-dimensional analogue of :func:`integrate_line`.

    ``log_f(tau1, tau2)`` must broadcast over ``tau1[:, None]`` and
    ``tau2[None, :]``.  Returns ``(1/2pi)^2 * Re`` of the integral over the
    plane, in units of ``exp(log_peak)``.
    """
    def shifted(a, b):
        return log_f(a, b) - log_peak

    tol_scaled = tol * np.exp(-log_peak)
    target = max(tol_scaled, 1e-15)
    tol_log = np.log(_TAIL_FACTOR * target)

    # Truncation square: scan the perimeter of growing boxes.
    edge = np.linspace(-1.0, 1.0, 161)
    t_max = None
    tail_log = None
    for T in _T_CANDIDATES:
        s_edge = np.sinh(T * edge)
        s_T = np.sinh(T)
        w_edge = _log_weight(T * edge)
        w_T = _log_weight(T)
        rows = [
            shifted(np.array([s_T, -s_T])[:, None], s_edge[None, :]).real + w_T + w_edge[None, :],
            shifted(s_edge[:, None], np.array([s_T, -s_T])[None, :]).real + w_T + w_edge[:, None],
        ]
        m = max(float(r.max()) for r in rows)
        if m < tol_log:
            t_max, tail_log = T, m
            break
    if t_max is None:
        raise ConvergenceError("double contour integrand does not decay in the scanned box")
    # Perimeter value times the (sinh-space) width is a tail proxy.
    tail = np.exp(tail_log) * 4.0 * t_max

    # Nested grids: each level adds the odd-indexed nodes to the previous sum.
    prev = None
    err = np.inf
    raw = 0.0
    absraw = 0.0
    for level in range(_MIN_LEVEL, _MAX_LEVEL_2D + 1):
        n = 2 ** level
        t = np.linspace(-t_max, t_max, 2 * n + 1)
        h = t[1] - t[0]
        tau = np.sinh(t)
        wt = np.cosh(t)
        if prev is None:
            blocks = [(slice(None), slice(None))]
        else:
            blocks = [(slice(1, None, 2), slice(None)), (slice(0, None, 2), slice(1, None, 2))]
        for rows, cols in blocks:
            v = np.exp(shifted(tau[rows][:, None], tau[cols][None, :])).real
            v = v * wt[rows][:, None] * wt[cols][None, :]
            raw += v.sum()
            absraw += np.abs(v).sum()
        cur = h * h * raw / (2.0 * np.pi) ** 2
        if prev is not None:
            err = abs(cur - prev) + tail
            floor = 1e-15 * h * h * absraw
            if err <= max(tol_scaled, rtol * abs(cur), floor * 4):
                return ScaledEvaluation(cur, max(err, floor), log_peak)
        prev = cur
    raise ConvergenceError(
        "double contour quadrature did not converge: last difference %.3e" % err)
