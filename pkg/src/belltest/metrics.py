"""J-statistic, its Poisson significance, and observed-vs-predicted ratios."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePredictionError, ValidationError
from .predictor import CELL_KEYS, CountsTable

J_CONVENTION = "J = S(a1) + S(b1) + C(a2,b2) - C(a1,b1) - C(a1,b2) - C(a2,b1); local models give J >= 0"
SIGMA_ESTIMATOR = (
    "sigma = sqrt(sum of the six cells): independent Poisson variance per cell, "
    "correlation between coincidences and singles ignored"
)

# coefficients over (S_A1, S_B1, C11, C12, C21, C22)
J_COEFFS = np.array([1.0, 1.0, -1.0, -1.0, -1.0, 1.0])


@dataclass(frozen=True)
class JResult:
    j: float
    sigma: float
    n_sigma: float
    convention: str = J_CONVENTION


@dataclass(frozen=True)
class AnomalyReport:
    ratios: dict[str, float]
    flagged: tuple[str, ...]
    band: tuple[float, float]


def j_value(counts: CountsTable) -> float:
    c = counts
    return c.s_alpha1 + c.s_beta1 + c.c22 - c.c11 - c.c12 - c.c21


def poisson_sigma(counts: CountsTable) -> float:
    return math.sqrt(float(np.sum(counts.as_array())))


def significance(counts: CountsTable) -> JResult:
    j = j_value(counts)
    sigma = poisson_sigma(counts)
    return JResult(j=j, sigma=sigma, n_sigma=j / sigma if sigma > 0 else 0.0)


def anomaly_report(
    observed: CountsTable, predicted: CountsTable, band: tuple[float, float] = (0.9, 1.1)
) -> AnomalyReport:
    lo, hi = band
    if not lo <= hi:
        raise ValidationError(f"band lower bound {lo} exceeds upper bound {hi}")
    pred = predicted.as_array()
    if np.any(pred <= 0):
        zero = [k for k, v in zip(CELL_KEYS, pred) if v <= 0]
        raise DegeneratePredictionError(f"degenerate prediction: cells {', '.join(zero)} are zero")
    ratios = observed.as_array() / pred
    flagged = tuple(k for k, q in zip(CELL_KEYS, ratios) if not lo <= q <= hi)
    return AnomalyReport(dict(zip(CELL_KEYS, ratios.tolist())), flagged, (lo, hi))
