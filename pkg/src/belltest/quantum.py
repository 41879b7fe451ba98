"""Closed-form photon-counting probabilities for the state |HV> + r|VH>.

Angles are in degrees everywhere; radians only appear inside the trig calls.
All functions accept scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, ValidationError

CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class EntangledPairState:
    """Polarization-entangled pair with amplitude ratio ``r`` between |VH> and |HV>."""

    r: float

    def __post_init__(self):
        if not math.isfinite(self.r) or self.r < 0:
            raise ValidationError(f"r must be finite and >= 0, got {self.r!r}")

    @property
    def norm(self) -> float:
        return 1.0 / (1.0 + self.r * self.r)


@dataclass(frozen=True)
class FourOutcomeDistribution:
    p_both: float
    p_a_only: float
    p_b_only: float
    p_neither: float

    def as_array(self) -> np.ndarray:
        return np.array([self.p_both, self.p_a_only, self.p_b_only, self.p_neither])

    def p_alice(self) -> float:
        return self.p_both + self.p_a_only

    def p_bob(self) -> float:
        return self.p_both + self.p_b_only


def coincidence_probability(state: EntangledPairState, alpha, beta):
    a = np.radians(alpha)
    b = np.radians(beta)
    amp = np.cos(a) * np.sin(b) + state.r * np.sin(a) * np.cos(b)
    return state.norm * amp * amp


def singles_probability_alice(state: EntangledPairState, alpha):
    a = np.radians(alpha)
    r2 = state.r * state.r
    return state.norm * (np.cos(a) ** 2 + r2 * np.sin(a) ** 2)


def singles_probability_bob(state: EntangledPairState, beta):
    b = np.radians(beta)
    r2 = state.r * state.r
    return state.norm * (np.sin(b) ** 2 + r2 * np.cos(b) ** 2)


def _check_efficiency(name: str, eta) -> None:
    eta = np.asarray(eta, dtype=float)
    if not np.all((eta >= 0) & (eta <= 1)):
        raise ValidationError(f"{name} must lie in [0, 1]")


def joint_outcome_components(state: EntangledPairState, eta_a, eta_b, alpha, beta) -> np.ndarray:
    """Vectorized four-outcome probabilities, shape ``(4, ...)``.

    Rows are (both, A only, B only, neither). Each arm detects its photon
    independently with its efficiency. Values within ``CLAMP_TOL`` below zero
    are clamped; anything further out raises ``ConsistencyError``.
    """
    _check_efficiency("eta_a", eta_a)
    _check_efficiency("eta_b", eta_b)
    p_both = eta_a * eta_b * coincidence_probability(state, alpha, beta)
    p_a_only = eta_a * singles_probability_alice(state, alpha) - p_both
    p_b_only = eta_b * singles_probability_bob(state, beta) - p_both
    p_neither = 1.0 - p_both - p_a_only - p_b_only
    out = np.stack(np.broadcast_arrays(p_both, p_a_only, p_b_only, p_neither)).astype(float)
    if np.any(out < -CLAMP_TOL) or np.any(out > 1.0 + CLAMP_TOL):
        raise ConsistencyError(
            "four-outcome probabilities left [0, 1]; coincidence exceeds a singles marginal"
        )
    return np.clip(out, 0.0, 1.0)


def joint_outcome_distribution(
    state: EntangledPairState, eta_a: float, eta_b: float, alpha: float, beta: float
) -> FourOutcomeDistribution:
    comps = joint_outcome_components(state, eta_a, eta_b, alpha, beta)
    return FourOutcomeDistribution(*(float(c) for c in comps))
