"""Local hidden-variable models and the local bound on J.

A model maps a uniform draw ``u`` in [0, 1) to a hidden variable and gives
each side a detection probability that depends only on its own analyzer
angle and that hidden variable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ValidationError
from .predictor import CountsTable, ExperimentParams, SettingAngles

QUAD_NODES = 1 << 16


class LhvModel:
    """Base class. Subclasses override the two response functions.

    ``response_a`` never sees Bob's angle and ``response_b`` never sees
    Alice's, which is what makes the model local.
    """

    name = "lhv"

    def sample_lambda(self, u: np.ndarray) -> np.ndarray:
        return u

    def response_a(self, alpha: float, lam: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def response_b(self, beta: float, lam: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def outcome_distribution(self, alpha: float, beta: float) -> np.ndarray:
        """Per-pair (both, A only, B only, neither) probabilities averaged over lambda.

        Default: midpoint rule over the uniform source.
        """
        u = (np.arange(QUAD_NODES) + 0.5) / QUAD_NODES
        lam = self.sample_lambda(u)
        a = np.broadcast_to(self.response_a(alpha, lam), u.shape)
        b = np.broadcast_to(self.response_b(beta, lam), u.shape)
        return _four_outcome_means(a, b, None)


def _four_outcome_means(a, b, w) -> np.ndarray:
    ab = np.average(a * b, weights=w)
    ea = np.average(a, weights=w)
    eb = np.average(b, weights=w)
    p = np.array([ab, ea - ab, eb - ab, 1.0 - ea - eb + ab])
    return np.clip(p, 0.0, 1.0)


class ConstantModel(LhvModel):
    """Detection probabilities independent of angle and lambda."""

    def __init__(self, a: float, b: float, name: str = "constant"):
        if not (0 <= a <= 1 and 0 <= b <= 1):
            raise ValidationError("constant responses must lie in [0, 1]")
        self.a = float(a)
        self.b = float(b)
        self.name = name

    def response_a(self, alpha, lam):
        return np.full(np.shape(lam), self.a)

    def response_b(self, beta, lam):
        return np.full(np.shape(lam), self.b)

    def outcome_distribution(self, alpha, beta):
        a, b = self.a, self.b
        return np.array([a * b, a * (1 - b), (1 - a) * b, (1 - a) * (1 - b)])


class MalusModel(LhvModel):
    """Shared polarization angle theta, uniform on [0, 180) degrees.

    Alice detects with probability eta_a cos^2(theta - alpha), Bob with
    eta_b sin^2(theta - beta).
    """

    name = "malus"

    def __init__(self, eta_a: float = 1.0, eta_b: float = 1.0):
        if not (0 <= eta_a <= 1 and 0 <= eta_b <= 1):
            raise ValidationError("efficiencies must lie in [0, 1]")
        self.eta_a = float(eta_a)
        self.eta_b = float(eta_b)

    def sample_lambda(self, u):
        return 180.0 * u

    def response_a(self, alpha, lam):
        return self.eta_a * np.cos(np.radians(lam - alpha)) ** 2

    def response_b(self, beta, lam):
        return self.eta_b * np.sin(np.radians(lam - beta)) ** 2


class TableModel(LhvModel):
    """Finitely many hidden states, responses piecewise constant in the angle.

    ``table_a[k, j]`` is Alice's detection probability for hidden state ``k``
    when her angle falls in bin ``j`` of ``[0, 180)`` split into equal bins.
    """

    name = "table"

    def __init__(self, weights, table_a, table_b):
        w = np.asarray(weights, dtype=float)
        ta = np.asarray(table_a, dtype=float)
        tb = np.asarray(table_b, dtype=float)
        if w.ndim != 1 or np.any(w < 0) or w.sum() <= 0:
            raise ValidationError("weights must be a non-negative, non-zero vector")
        if ta.shape != tb.shape or ta.ndim != 2 or ta.shape[0] != w.size:
            raise ValidationError("response tables must both have shape (n_states, n_angle_bins)")
        if np.any((ta < 0) | (ta > 1) | (tb < 0) | (tb > 1)):
            raise ValidationError("response tables must lie in [0, 1]")
        self.weights = w / w.sum()
        self.table_a = ta
        self.table_b = tb
        self._cdf = np.cumsum(self.weights)[:-1]

    @classmethod
    def random(cls, rng: np.random.Generator, n_states: int = 8, n_angle_bins: int = 36) -> "TableModel":
        return cls(
            rng.random(n_states),
            rng.random((n_states, n_angle_bins)),
            rng.random((n_states, n_angle_bins)),
        )

    def _angle_bin(self, angle: float) -> int:
        n = self.table_a.shape[1]
        return min(int((angle % 180.0) / 180.0 * n), n - 1)

    def sample_lambda(self, u):
        return np.searchsorted(self._cdf, u, side="right")

    def response_a(self, alpha, lam):
        return self.table_a[lam, self._angle_bin(alpha)]

    def response_b(self, beta, lam):
        return self.table_b[lam, self._angle_bin(beta)]

    def outcome_distribution(self, alpha, beta):
        a = self.table_a[:, self._angle_bin(alpha)]
        b = self.table_b[:, self._angle_bin(beta)]
        return _four_outcome_means(a, b, self.weights)


BUNDLED_MODELS = ("null", "saturating", "malus")


def bundled_model(name: str, params: ExperimentParams | None = None) -> LhvModel:
    """Look up a bundled model; ``malus`` takes its efficiencies from ``params``."""
    if name == "null":
        return ConstantModel(0.0, 0.0, name="null")
    if name == "saturating":
        return ConstantModel(1.0, 1.0, name="saturating")
    if name == "malus":
        m = MalusModel(params.eta_a, params.eta_b) if params is not None else MalusModel()
        return m
    raise ValidationError(f"unknown LHV model {name!r}; choose from {', '.join(BUNDLED_MODELS)}")


class VertexStrategy(NamedTuple):
    a1: int
    a2: int
    b1: int
    b2: int


def pointwise_j(a1, a2, b1, b2):
    return a1 + b1 + a2 * b2 - a1 * b1 - a1 * b2 - a2 * b1


def vertex_j(v: VertexStrategy) -> int:
    if any(x not in (0, 1) for x in v):
        raise ValidationError(f"vertex responses must be 0 or 1, got {tuple(v)}")
    return int(pointwise_j(v.a1, v.a2, v.b1, v.b2))


@dataclass(frozen=True)
class VertexEnumeration:
    table: tuple[tuple[VertexStrategy, int], ...]
    minimum: int
    maximum: int

    @property
    def n_zero(self) -> int:
        return sum(1 for _, j in self.table if j == 0)


def enumerate_vertices() -> VertexEnumeration:
    table = tuple((v, vertex_j(v)) for v in (VertexStrategy(*bits) for bits in itertools.product((0, 1), repeat=4)))
    values = [j for _, j in table]
    return VertexEnumeration(table, min(values), max(values))


def _responses(model: LhvModel, settings: SettingAngles, lam: np.ndarray):
    shape = np.shape(lam)
    return (
        np.broadcast_to(model.response_a(settings.alpha1, lam), shape),
        np.broadcast_to(model.response_a(settings.alpha2, lam), shape),
        np.broadcast_to(model.response_b(settings.beta1, lam), shape),
        np.broadcast_to(model.response_b(settings.beta2, lam), shape),
    )


def lhv_expected_counts(
    model: LhvModel, params: ExperimentParams, settings: SettingAngles, n_lambda: int, seed: int
) -> CountsTable:
    """Monte Carlo expected counts: N E[a], N E[b] and N E[a b] over sampled lambda."""
    if n_lambda < 1:
        raise ValidationError("n_lambda must be >= 1")
    lam = model.sample_lambda(np.random.default_rng(seed).random(n_lambda))
    a1, a2, b1, b2 = _responses(model, settings, lam)
    n = params.n_pairs_per_setting
    means = [a1.mean(), b1.mean(), (a1 * b1).mean(), (a1 * b2).mean(), (a2 * b1).mean(), (a2 * b2).mean()]
    return CountsTable(*(n * float(m) for m in means))


@dataclass(frozen=True)
class NonnegativityReport:
    model: str
    n_lambda: int
    mean_j: float
    std_error: float
    counts: CountsTable
    passed: bool


def verify_nonnegativity(
    model: LhvModel, params: ExperimentParams, settings: SettingAngles, n_lambda: int, seed: int
) -> NonnegativityReport:
    """Estimate E[J] for the model; passes when it is no lower than -5 standard errors."""
    if n_lambda < 1000:
        raise ValidationError("n_lambda must be >= 1000")
    lam = model.sample_lambda(np.random.default_rng(seed).random(n_lambda))
    a1, a2, b1, b2 = _responses(model, settings, lam)
    n = params.n_pairs_per_setting
    j = n * pointwise_j(a1, a2, b1, b2)
    mean = float(j.mean())
    se = float(j.std(ddof=1) / np.sqrt(n_lambda))
    counts = lhv_expected_counts(model, params, settings, n_lambda, seed)
    return NonnegativityReport(model.name, n_lambda, mean, se, counts, mean >= -5.0 * se)
