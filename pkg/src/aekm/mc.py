"""Monte Carlo estimators of the fading-averaged metrics.

Each estimator draws instantaneous SNRs with :func:`aekm.channel.sample_snr`
and averages the conditional metric.  Means use numpy's pairwise summation so
that results are reproducible bit for bit for a fixed seed and sample count.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel import sample_snr
from .metrics import auc_awgn
from .specfun import marcum_q

MIN_SAMPLES = 10_000
LN2 = math.log(2.0)


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int

    def contains(self, value, k=3.0):
        """True if ``value`` lies within ``k`` standard errors of the mean."""
        return abs(value - self.mean) <= k * self.std_error


def _draws(params, seed, n_samples, stream):
    if int(n_samples) != n_samples or n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be an integer >= {MIN_SAMPLES}")
    return sample_snr(params, seed, int(n_samples), stream)


def _mean_se(x):
    n = x.size
    m = float(np.sum(x) / n)
    var = float(np.sum((x - m) ** 2) / (n - 1))
    return m, math.sqrt(var / n)


def _estimate(x, seed):
    m, se = _mean_se(x)
    return McEstimate(m, se, int(x.size), int(seed))


def mc_effective_rate(params, er, seed, n_samples, stream=0):
    """Effective rate from the sample mean of ``(1+gamma)^-A``.

    The standard error is carried through ``-(1/A) log2(.)`` by the delta
    method.
    """
    g = _draws(params, seed, n_samples, stream)
    m, se = _mean_se((1.0 + g) ** (-er.A))
    scale = er.A * LN2
    return McEstimate(-math.log(m) / scale, se / (m * scale), int(g.size), int(seed))


def mc_ergodic_capacity(params, seed, n_samples, stream=0):
    """Sample mean of ``log2(1 + gamma)``."""
    g = _draws(params, seed, n_samples, stream)
    return _estimate(np.log1p(g) / LN2, seed)


def mc_adp(params, ed, seed, n_samples, stream=0):
    """Average of ``Q_u(sqrt(2 gamma), sqrt(lambda))`` over SNR draws."""
    g = _draws(params, seed, n_samples, stream)
    return _estimate(marcum_q(ed.u, np.sqrt(2.0 * g), math.sqrt(ed.lambda_)), seed)


def mc_avg_auc(params, u, seed, n_samples, stream=0):
    """Average of the AWGN detector AUC over SNR draws."""
    g = _draws(params, seed, n_samples, stream)
    return _estimate(auc_awgn(u, g), seed)
