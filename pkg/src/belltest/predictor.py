"""Expected singles and coincidence counts per setting."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from .errors import ValidationError
from .quantum import (
    EntangledPairState,
    coincidence_probability,
    singles_probability_alice,
    singles_probability_bob,
)

# Table-1 column order; CSV keys follow the same order.
CELL_KEYS = ("S_A1", "S_B1", "C11", "C12", "C21", "C22")


@dataclass(frozen=True)
class ExperimentParams:
    n_pairs_per_setting: float
    eta_a: float
    eta_b: float
    duration_s: Optional[float] = None

    def __post_init__(self):
        if not math.isfinite(self.n_pairs_per_setting) or self.n_pairs_per_setting < 0:
            raise ValidationError("n_pairs_per_setting must be finite and >= 0")
        for name in ("eta_a", "eta_b"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name}={v!r} outside [0, 1]")
        if self.duration_s is not None and not (math.isfinite(self.duration_s) and self.duration_s > 0):
            raise ValidationError("duration_s must be > 0")


@dataclass(frozen=True)
class SettingAngles:
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float

    def __post_init__(self):
        for f in fields(self):
            if not math.isfinite(getattr(self, f.name)):
                raise ValidationError(f"{f.name} must be finite")

    def pairs(self) -> tuple[tuple[float, float], ...]:
        """Angle pairs in cell order (11, 12, 21, 22)."""
        return (
            (self.alpha1, self.beta1),
            (self.alpha1, self.beta2),
            (self.alpha2, self.beta1),
            (self.alpha2, self.beta2),
        )


@dataclass(frozen=True)
class CountsTable:
    s_alpha1: float
    s_beta1: float
    c11: float
    c12: float
    c21: float
    c22: float
    observed: bool = False

    def __post_init__(self):
        vals = self.as_array()
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise ValidationError("counts must be finite and >= 0")
        if self.observed and np.any(vals != np.round(vals)):
            raise ValidationError("observed counts must be integers")

    def as_array(self) -> np.ndarray:
        return np.array([self.s_alpha1, self.s_beta1, self.c11, self.c12, self.c21, self.c22], dtype=float)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(CELL_KEYS, self.as_array().tolist()))

    @classmethod
    def from_array(cls, values, observed: bool = False) -> "CountsTable":
        v = [float(x) for x in values]
        if len(v) != 6:
            raise ValidationError(f"expected 6 cells, got {len(v)}")
        return cls(*v, observed=observed)

    def scaled(self, k: float) -> "CountsTable":
        return CountsTable.from_array(self.as_array() * k, observed=self.observed and float(k).is_integer())


def expected_singles(state: EntangledPairState, params: ExperimentParams, side: str, angle: float) -> float:
    if side == "alice":
        return params.n_pairs_per_setting * params.eta_a * float(singles_probability_alice(state, angle))
    if side == "bob":
        return params.n_pairs_per_setting * params.eta_b * float(singles_probability_bob(state, angle))
    raise ValueError(f"side must be 'alice' or 'bob', got {side!r}")


def expected_coincidences(state: EntangledPairState, params: ExperimentParams, alpha: float, beta: float) -> float:
    p = float(coincidence_probability(state, alpha, beta))
    return params.n_pairs_per_setting * params.eta_a * params.eta_b * p


def predict_table(state: EntangledPairState, params: ExperimentParams, settings: SettingAngles) -> CountsTable:
    """Quantum-mechanical expected counts, unrounded."""
    coinc = [expected_coincidences(state, params, a, b) for a, b in settings.pairs()]
    return CountsTable(
        expected_singles(state, params, "alice", settings.alpha1),
        expected_singles(state, params, "bob", settings.beta1),
        *coinc,
    )
