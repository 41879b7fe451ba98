"""Compare the numba and pure-numpy tally kernels, and full per-pair runs.

    python benchmarks/bench_kernels.py [--pairs 24200000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from belltest import EntangledPairState, ExperimentParams, MalusModel, SettingAngles, SimulationConfig
from belltest import kernels, simulate_lhv, simulate_quantum


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pairs", type=float, default=24.2e6)
    ap.add_argument("--kernel-size", type=int, default=1 << 22)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    n = args.kernel_size
    u = rng.random(n)
    cdf = np.cumsum([0.05, 0.2, 0.2])
    pa, pb, ub = rng.random((3, n))
    kernels.tally_categorical_numba(u[:10], cdf)
    kernels.tally_bernoulli_numba(pa[:10], pb[:10], u[:10], ub[:10])

    print(f"kernels on {n} elements (best of {args.repeat})")
    for name, nb, npy, call_args in [
        ("tally_categorical", kernels.tally_categorical_numba, kernels.tally_categorical_numpy, (u, cdf)),
        ("tally_bernoulli", kernels.tally_bernoulli_numba, kernels.tally_bernoulli_numpy, (pa, pb, u, ub)),
    ]:
        t_nb = best_of(lambda: nb(*call_args), args.repeat)
        t_np = best_of(lambda: npy(*call_args), args.repeat)
        print(f"  {name:<18} numba {n / t_nb / 1e6:8.1f} M/s   numpy {n / t_np / 1e6:8.1f} M/s   "
              f"speedup {t_np / t_nb:5.2f}x")

    state = EntangledPairState(0.297)
    params = ExperimentParams(args.pairs, 0.7377, 0.7859)
    settings = SettingAngles(85.6, 118.0, -5.4, 25.9)
    cfg = SimulationConfig(mode="per_pair", seed=1, n_workers=args.threads)
    total = 4 * int(round(args.pairs))
    print(f"per-pair runs, {total} pairs, {args.threads} thread(s)")
    for label, run in [
        ("quantum", lambda: simulate_quantum(state, params, settings, cfg)),
        ("lhv:malus", lambda: simulate_lhv(MalusModel(0.7377, 0.7859), params, settings, cfg)),
    ]:
        row = []
        for flag in (True, False):
            kernels.USE_NUMBA = flag
            row.append(best_of(run, 1))
        print(f"  {label:<10} numba {row[0]:6.2f} s ({total / row[0] / 1e6:5.1f} M pairs/s)   "
              f"numpy {row[1]:6.2f} s ({total / row[1] / 1e6:5.1f} M pairs/s)")
    t0 = time.perf_counter()
    simulate_quantum(state, params, settings, SimulationConfig(seed=1))
    print(f"aggregate quantum run: {(time.perf_counter() - t0) * 1e3:.2f} ms")


if __name__ == "__main__":
    main()
