"""Performance metrics of alpha-eta-kappa-mu fading channels.

Closed forms built on Fox H-functions and a double Mellin-Barnes integral,
with quadrature and Monte Carlo estimators to check them.
"""

__version__ = "0.1.0"

from .channel import (
    FadingParams,
    SeriesCoefficients,
    TruncationReport,
    cdf_truncated,
    choose_n_terms,
    pdf_asymptotic,
    pdf_truncated,
    sample_snr,
    series_coefficients,
    truncation_error,
)
from .mc import McEstimate, mc_adp, mc_avg_auc, mc_effective_rate
from .metrics import (
    EdConfig,
    ErConfig,
    MetricResult,
    adp_asymptotic,
    adp_exact,
    adp_quadrature_oracle,
    auc_awgn,
    auc_quadrature_oracle,
    avg_auc_asymptotic,
    avg_auc_exact,
    effective_rate_asymptotic,
    effective_rate_exact,
    er_quadrature_oracle,
    false_alarm,
    threshold_for_pf,
)

__all__ = [
    "FadingParams", "SeriesCoefficients", "TruncationReport", "cdf_truncated",
    "choose_n_terms", "pdf_asymptotic", "pdf_truncated", "sample_snr",
    "series_coefficients", "truncation_error", "McEstimate", "mc_adp", "mc_avg_auc",
    "mc_effective_rate", "EdConfig", "ErConfig", "MetricResult", "adp_asymptotic",
    "adp_exact", "adp_quadrature_oracle", "auc_awgn", "auc_quadrature_oracle",
    "avg_auc_asymptotic", "avg_auc_exact", "effective_rate_asymptotic",
    "effective_rate_exact", "er_quadrature_oracle", "false_alarm", "threshold_for_pf",
]
