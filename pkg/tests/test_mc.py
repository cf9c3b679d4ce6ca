import math

import numpy as np
import pytest

from aekm.channel import FadingParams, choose_n_terms, integrate_density, series_coefficients
from aekm.mc import (
    MIN_SAMPLES,
    McEstimate,
    mc_adp,
    mc_avg_auc,
    mc_effective_rate,
    mc_ergodic_capacity,
)
from aekm.metrics import EdConfig, ErConfig, avg_auc_exact, effective_rate_exact

P = FadingParams(2, 0.5, 5, 2, gamma_bar=2.0)


def test_minimum_sample_count():
    with pytest.raises(ValueError):
        mc_avg_auc(P, 2, 1, MIN_SAMPLES - 1)
    with pytest.raises(ValueError):
        mc_avg_auc(P, 2, 1, 20000.5)


def test_estimates_are_reproducible():
    a = mc_adp(P, EdConfig.from_pf(2, 0.1), 5, 20_000)
    b = mc_adp(P, EdConfig.from_pf(2, 0.1), 5, 20_000)
    assert a == b and a.seed == 5 and a.n_samples == 20_000
    c = mc_adp(P, EdConfig.from_pf(2, 0.1), 6, 20_000)
    assert c.mean != a.mean


def test_contains():
    e = McEstimate(1.0, 0.1, 10_000, 0)
    assert e.contains(1.29) and not e.contains(1.31) and e.contains(1.05, k=1)


def test_standard_error_shrinks_with_samples():
    small = mc_avg_auc(P, 2, 9, 10_000)
    large = mc_avg_auc(P, 2, 9, 160_000)
    assert large.std_error == pytest.approx(small.std_error / 4, rel=0.15)


def test_effective_rate_and_auc_agree_with_closed_forms():
    n = choose_n_terms(P, 1e-8).n_terms
    er = mc_effective_rate(P, ErConfig(0.75), 21, 200_000)
    assert er.contains(effective_rate_exact(P, ErConfig(0.75), n).value)
    auc = mc_avg_auc(P, 2, 22, 200_000)
    assert auc.contains(avg_auc_exact(P, 2, n).value)


def test_ergodic_capacity():
    n = choose_n_terms(P, 1e-8).n_terms
    ref = integrate_density(P, series_coefficients(P, n), lambda g: math.log2(1 + g))
    assert mc_ergodic_capacity(P, 23, 200_000).contains(ref)
