"""Special functions and the Mellin-Barnes contour-integration engine."""

from .contour import Evaluation, ScaledEvaluation
from .foxh import HFunctionSpec, fox_h, fox_h_scaled, mellin_barnes_line
from .gamma import log_gamma_complex
from .marcum import marcum_q, marcum_q_complement, upper_gamma_regularized
from .mellin2d import (
    GammaProductIntegrand2D,
    admissible_contours,
    mellin_barnes_2d,
    mellin_barnes_2d_scaled,
)

__all__ = [
    "Evaluation",
    "ScaledEvaluation",
    "HFunctionSpec",
    "fox_h",
    "fox_h_scaled",
    "mellin_barnes_line",
    "log_gamma_complex",
    "marcum_q",
    "marcum_q_complement",
    "upper_gamma_regularized",
    "GammaProductIntegrand2D",
    "admissible_contours",
    "mellin_barnes_2d",
    "mellin_barnes_2d_scaled",
]
