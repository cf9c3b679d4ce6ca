import math

import numpy as np
import pytest
from scipy import special

import oracle_values as ov
from aekm.channel import FadingParams, choose_n_terms, integrate_density, series_coefficients
from aekm.errors import ArgumentResolutionError, DomainError, RangeViolation
from aekm.metrics import (
    EdConfig,
    ErConfig,
    MetricResult,
    adp_asymptotic,
    adp_exact,
    adp_high_snr,
    adp_quadrature_oracle,
    auc_awgn,
    auc_quadrature_oracle,
    avg_auc_asymptotic,
    avg_auc_exact,
    effective_rate_asymptotic,
    effective_rate_exact,
    er_quadrature_oracle,
    false_alarm,
    marcum_constants,
    threshold_for_pf,
)

RICIAN = FadingParams(2, 1, 1, 1, gamma_bar=10.0)
ED = EdConfig.from_pf(2, 0.1)


@pytest.fixture(scope="module")
def n_rician():
    # tight truncation so the series stands in for the untruncated oracle values
    return choose_n_terms(RICIAN, 1e-12).n_terms


def test_threshold_and_false_alarm():
    assert threshold_for_pf(2, 0.1) == pytest.approx(ov.THRESHOLD_U2_PF01, rel=1e-13)
    for u, pf in [(1, 0.01), (2, 0.1), (5, 0.5)]:
        assert false_alarm(EdConfig.from_pf(u, pf)) == pytest.approx(pf, rel=1e-12)
    with pytest.raises(ValueError):
        threshold_for_pf(2, 1.5)


def test_config_validation():
    with pytest.raises(ValueError):
        ErConfig(0.0)
    with pytest.raises(ValueError):
        EdConfig(0, 1.0)
    with pytest.raises(ValueError):
        EdConfig(2, -1.0)
    with pytest.raises(ValueError):
        MetricResult(1.0, -1.0, 3, "exact_fhf")
    with pytest.raises(ValueError):
        MetricResult(1.0, 0.0, 3, "guess")


def test_rician_effective_rate_against_frozen(n_rician):
    for A, ref in [(0.75, ov.RICIAN_ER_10DB_A075), (1.0, ov.RICIAN_ER_10DB_A1)]:
        res = effective_rate_exact(RICIAN, ErConfig(A), n_rician)
        assert res.method == "exact_fhf" and res.n_terms_used == n_rician
        assert res.value == pytest.approx(ref, rel=1e-9)
        assert res.error_estimate < 1e-8


def test_rician_missed_adp_against_frozen(n_rician):
    res = adp_exact(RICIAN, ED, n_rician)
    assert 1 - res.value == pytest.approx(ov.RICIAN_MISSED_10DB, rel=1e-8)


def test_rician_cauc_against_frozen(n_rician):
    res = avg_auc_exact(RICIAN, 2, n_rician)
    assert 1 - res.value == pytest.approx(ov.RICIAN_CAUC_10DB, rel=1e-9)


def test_adp_single_kernel_against_frozen():
    # eta = 1, kappa -> 0, mu = 1, alpha = 2: exponential SNR with mean 2 gamma_bar
    p = FadingParams(2, 1, 1e-12, 1, gamma_bar=1.0)
    res = adp_exact(p, EdConfig(2, ov.THRESHOLD_U2_PF01), 2)
    assert 1 - res.value == pytest.approx(ov.ADP_KERNEL0_U2_G1, abs=1e-9)


def test_auc_awgn():
    assert auc_awgn(2, 5.0) == pytest.approx(ov.AUC_AWGN_U2_G5, rel=1e-14)
    assert auc_awgn(3, 0.0) == pytest.approx(0.5, abs=1e-15)
    g = np.linspace(0, 50, 101)
    assert np.all(np.diff(auc_awgn(2, g)) > 0)
    with pytest.raises(ValueError):
        auc_awgn(2, -1.0)


def test_h_argument_variants(n_rician):
    er = ErConfig(0.75)
    derived = effective_rate_exact(RICIAN, er, n_rician).value
    printed = effective_rate_exact(RICIAN, er, n_rician, h_argument="printed").value
    assert abs(printed - derived) > 1e-2 * derived
    assert effective_rate_exact(RICIAN, er, n_rician, h_argument="auto").value == derived
    with pytest.raises(ValueError):
        effective_rate_exact(RICIAN, er, n_rician, h_argument="other")


def test_h_argument_variants_coincide_at_quarter_scale():
    # at alpha = 2 both arguments equal 2 when gamma_bar = 1/4
    p = RICIAN.with_gamma_bar(0.25)
    assert effective_rate_exact(p, ErConfig(0.75), 20, "printed").value == pytest.approx(
        effective_rate_exact(p, ErConfig(0.75), 20).value, rel=1e-12)


def test_effective_rate_tends_to_ergodic_capacity():
    p = FadingParams(1.5, 0.5, 2, 1.5, gamma_bar=5.0)
    n = choose_n_terms(p, 1e-9).n_terms
    cap = integrate_density(p, series_coefficients(p, n), lambda g: math.log2(1 + g))
    assert effective_rate_exact(p, ErConfig(1e-3), n).value == pytest.approx(cap, rel=2e-4)


@pytest.mark.parametrize("A", [0.04, 1e-3, 1e-5])
def test_effective_rate_small_delay_exponent(A):
    # narrow contour strip: the shifted-contour path must agree with quadrature
    p = FadingParams(3, 1.5, 1, 2, gamma_bar=0.01)
    n = choose_n_terms(p, 1e-9).n_terms
    exact = effective_rate_exact(p, ErConfig(A), n).value
    assert exact == pytest.approx(er_quadrature_oracle(p, ErConfig(A), n).value, rel=1e-6)


def test_effective_rate_asymptotic_domain():
    with pytest.raises(DomainError):
        effective_rate_asymptotic(RICIAN, ErConfig(0.75), 10)


def test_effective_rate_asymptotic_high_snr():
    p = RICIAN.with_gamma_bar(1e4)
    er = ErConfig(2.5)
    exact = effective_rate_exact(p, er, 20).value
    assert effective_rate_asymptotic(p, er, 20).value == pytest.approx(exact, rel=1e-3)


def test_marcum_constants():
    for u in (1, 2, 4):
        phi1, k1, phi2 = marcum_constants(u)
        assert phi1 == pytest.approx(1 / (math.pi * math.gamma(u)), rel=1e-12)
        assert k1 == 0.0 and phi2 == 1.0


def test_adp_asymptotic_equals_leading_term():
    # the leading form is 1 - P(u, lambda/2) sum_j B_j Gamma(phi_j)
    p = RICIAN.with_gamma_bar(1e3)
    a = adp_asymptotic(p, ED, 20).value
    k0 = 1 - adp_high_snr(p, ED, 20, max_terms=2000).value
    assert 0 < 1 - a < k0


def test_adp_high_snr_tends_to_exact():
    p = RICIAN.with_gamma_bar(1e4)
    exact = 1 - adp_exact(p, ED, 20).value
    assert 1 - adp_high_snr(p, ED, 20).value == pytest.approx(exact, rel=1e-3)


def test_cauc_asymptotic_high_snr():
    p = RICIAN.with_gamma_bar(1e4)
    exact = 1 - avg_auc_exact(p, 2, 20).value
    assert 1 - avg_auc_asymptotic(p, 2, 20).value == pytest.approx(exact, rel=2e-3)


@pytest.mark.parametrize("params", [
    FadingParams(1, 0.5, 5, 0.5, gamma_bar=0.3),
    FadingParams(3, 1.5, 1, 2, gamma_bar=30.0),
])
def test_closed_forms_match_oracles(params):
    n = choose_n_terms(params, 1e-6).n_terms
    er = ErConfig(0.75)
    assert effective_rate_exact(params, er, n).value == pytest.approx(
        er_quadrature_oracle(params, er, n).value, rel=1e-9)
    assert avg_auc_exact(params, 2, n).value == pytest.approx(
        auc_quadrature_oracle(params, 2, n).value, abs=1e-10)
    assert adp_exact(params, ED, n).value == pytest.approx(
        adp_quadrature_oracle(params, ED, n).value, abs=1e-9)


def test_probability_range_violation():
    from aekm.metrics import _probability
    with pytest.raises(RangeViolation):
        _probability(1.2, 1e-6, 3, "exact_fhf")
    assert _probability(1.0 + 1e-9, 1e-6, 3, "exact_fhf").value > 1


def test_avg_auc_validates_u():
    with pytest.raises(ValueError):
        avg_auc_exact(RICIAN, 0, 5)
