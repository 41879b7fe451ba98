"""Monte Carlo rerun of the four-setting experiment.

Random streams are keyed by (seed, purpose, setting, chunk) through
``numpy.random.SeedSequence`` spawn keys, so a run is reproducible bit for
bit no matter how many worker threads process the chunks.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Union

import numpy as np

from . import kernels
from .errors import ValidationError
from .lhv import LhvModel
from .metrics import j_value
from .predictor import CountsTable, ExperimentParams, SettingAngles
from .quantum import EntangledPairState, joint_outcome_components

# spawn-key purposes
_STREAM_PAIRS = 0
_STREAM_AGGREGATE = 1
_STREAM_PER_PAIR = 2


@dataclass(frozen=True)
class SimulationConfig:
    mode: Literal["aggregate", "per_pair"] = "aggregate"
    pair_number_model: Literal["fixed", "poisson"] = "fixed"
    seed: int = 0
    chunk_size: int = 1 << 20
    n_workers: int = 1
    n_pairs_override: Optional[tuple[float, float, float, float]] = None

    def __post_init__(self):
        if self.mode not in ("aggregate", "per_pair"):
            raise ValidationError(f"unknown mode {self.mode!r}")
        if self.pair_number_model not in ("fixed", "poisson"):
            raise ValidationError(f"unknown pair_number_model {self.pair_number_model!r}")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if self.chunk_size < 1:
            raise ValidationError("chunk_size must be >= 1")
        if self.n_workers < 1:
            raise ValidationError("n_workers must be >= 1")
        if self.n_pairs_override is not None:
            if len(self.n_pairs_override) != 4 or any(n < 0 for n in self.n_pairs_override):
                raise ValidationError("n_pairs_override needs four non-negative values")


@dataclass(frozen=True)
class SimulatedCounts:
    table: CountsTable
    # rows: settings 11, 12, 21, 22; columns: both, A only, B only, neither
    tallies: np.ndarray
    pairs_drawn: np.ndarray
    seed: int

    def __eq__(self, other):
        if not isinstance(other, SimulatedCounts):
            return NotImplemented
        return (
            self.table == other.table
            and np.array_equal(self.tallies, other.tallies)
            and np.array_equal(self.pairs_drawn, other.pairs_drawn)
            and self.seed == other.seed
        )


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def multinomial_conditional(rng: np.random.Generator, n: int, probs) -> np.ndarray:
    """Multinomial draw as a chain of binomials on the remaining mass."""
    probs = np.asarray(probs, dtype=float)
    out = np.zeros(probs.size, dtype=np.int64)
    remaining = int(n)
    mass = 1.0
    for i, p in enumerate(probs[:-1]):
        if remaining == 0:
            break
        q = min(max(p / mass, 0.0), 1.0) if mass > 0 else 0.0
        k = int(rng.binomial(remaining, q))
        out[i] = k
        remaining -= k
        mass -= p
    out[-1] = remaining
    return out


def _pair_counts(params: ExperimentParams, config: SimulationConfig) -> np.ndarray:
    means = config.n_pairs_override or (params.n_pairs_per_setting,) * 4
    if config.pair_number_model == "fixed":
        return np.array([int(round(m)) for m in means], dtype=np.int64)
    return np.array([_rng(config.seed, _STREAM_PAIRS, s).poisson(m) for s, m in enumerate(means)], dtype=np.int64)


def _chunks(m: int, chunk_size: int) -> list[tuple[int, int]]:
    return [(k, min(chunk_size, m - start)) for k, start in enumerate(range(0, m, chunk_size))]


def _run_chunks(task: Callable[[int, int], np.ndarray], m: int, config: SimulationConfig) -> np.ndarray:
    chunks = _chunks(m, config.chunk_size)
    if config.n_workers == 1 or len(chunks) <= 1:
        parts = [task(k, n) for k, n in chunks]
    else:
        with ThreadPoolExecutor(max_workers=config.n_workers) as pool:
            parts = list(pool.map(lambda kn: task(*kn), chunks))
    total = np.zeros(4, dtype=np.int64)
    for p in parts:
        total += p
    return total


def _assemble(tallies: np.ndarray, pairs: np.ndarray, seed: int) -> SimulatedCounts:
    both = tallies[:, 0]
    # singles come from the (a1, b1) setting, where both are registered
    table = CountsTable(
        float(tallies[0, 0] + tallies[0, 1]),
        float(tallies[0, 0] + tallies[0, 2]),
        *(float(x) for x in both),
        observed=True,
    )
    return SimulatedCounts(table, tallies, pairs, seed)


def _simulate(probs: np.ndarray, per_pair_task, params, config) -> SimulatedCounts:
    pairs = _pair_counts(params, config)
    tallies = np.zeros((4, 4), dtype=np.int64)
    for s in range(4):
        if config.mode == "aggregate":
            tallies[s] = multinomial_conditional(_rng(config.seed, _STREAM_AGGREGATE, s), pairs[s], probs[s])
        else:
            tallies[s] = _run_chunks(lambda k, n, s=s: per_pair_task(s, k, n), int(pairs[s]), config)
    return _assemble(tallies, pairs, config.seed)


def simulate_quantum(
    state: EntangledPairState, params: ExperimentParams, settings: SettingAngles, config: SimulationConfig
) -> SimulatedCounts:
    probs = np.array(
        [joint_outcome_components(state, params.eta_a, params.eta_b, a, b) for a, b in settings.pairs()]
    )
    cdfs = np.cumsum(probs[:, :3], axis=1)

    def task(s: int, k: int, n: int) -> np.ndarray:
        u = _rng(config.seed, _STREAM_PER_PAIR, s, k).random(n)
        return kernels.tally_categorical(u, cdfs[s])

    return _simulate(probs, task, params, config)


def simulate_lhv(
    model: LhvModel, params: ExperimentParams, settings: SettingAngles, config: SimulationConfig
) -> SimulatedCounts:
    """Per-pair mode samples lambda for every pair and draws two independent detections.

    Aggregate mode draws one multinomial per setting from the lambda-averaged
    outcome probabilities, which is the exact law of the per-pair tallies.
    """
    pairs_angles = settings.pairs()
    probs = None
    if config.mode == "aggregate":
        probs = np.array([model.outcome_distribution(a, b) for a, b in pairs_angles])

    def task(s: int, k: int, n: int) -> np.ndarray:
        rng = _rng(config.seed, _STREAM_PER_PAIR, s, k)
        alpha, beta = pairs_angles[s]
        lam = model.sample_lambda(rng.random(n))
        ua = rng.random(n)
        ub = rng.random(n)
        pa = np.ascontiguousarray(np.broadcast_to(model.response_a(alpha, lam), (n,)), dtype=float)
        pb = np.ascontiguousarray(np.broadcast_to(model.response_b(beta, lam), (n,)), dtype=float)
        return kernels.tally_bernoulli(pa, pb, ua, ub)

    return _simulate(probs, task, params, config)


@dataclass(frozen=True)
class SimulationSpec:
    """Everything except the seed; ``run(seed)`` performs one simulation."""

    params: ExperimentParams
    settings: SettingAngles
    source: Union[EntangledPairState, LhvModel]
    config: SimulationConfig = field(default_factory=SimulationConfig)

    def run(self, seed: int) -> SimulatedCounts:
        cfg = SimulationConfig(
            mode=self.config.mode,
            pair_number_model=self.config.pair_number_model,
            seed=seed,
            chunk_size=self.config.chunk_size,
            n_workers=self.config.n_workers,
            n_pairs_override=self.config.n_pairs_override,
        )
        if isinstance(self.source, EntangledPairState):
            return simulate_quantum(self.source, self.params, self.settings, cfg)
        return simulate_lhv(self.source, self.params, self.settings, cfg)


@dataclass(frozen=True)
class SeedSweep:
    seeds: np.ndarray
    cells: np.ndarray  # (n_seeds, 6)
    j: np.ndarray

    @property
    def cell_mean(self) -> np.ndarray:
        return self.cells.mean(axis=0)

    @property
    def cell_std(self) -> np.ndarray:
        return self.cells.std(axis=0, ddof=1)

    @property
    def cell_stderr(self) -> np.ndarray:
        return self.cell_std / np.sqrt(len(self.seeds))

    @property
    def j_mean(self) -> float:
        return float(self.j.mean())

    @property
    def j_stderr(self) -> float:
        return float(self.j.std(ddof=1) / np.sqrt(len(self.j)))


def derive_seeds(master_seed: int, n_seeds: int) -> np.ndarray:
    seeds = np.random.SeedSequence(master_seed).generate_state(n_seeds, dtype=np.uint64)
    if np.unique(seeds).size != n_seeds:  # pragma: no cover - 2**-64 scale event
        raise ValidationError("derived seeds collided; pick another master seed")
    return seeds


def sweep_seeds(spec: SimulationSpec, n_seeds: int, master_seed: int = 0) -> SeedSweep:
    if n_seeds < 2:
        raise ValidationError("n_seeds must be >= 2")
    seeds = derive_seeds(master_seed, n_seeds)
    results = [spec.run(int(s)) for s in seeds]
    cells = np.array([r.table.as_array() for r in results])
    j = np.array([j_value(r.table) for r in results])
    return SeedSweep(seeds, cells, j)
