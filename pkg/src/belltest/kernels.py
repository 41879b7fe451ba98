"""Per-pair tally kernels.

Each kernel has a numba implementation and a pure-numpy one with identical
integer output for identical inputs. Setting ``BELLTEST_NO_NUMBA=1`` in the
environment (or running without numba installed) selects the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get("BELLTEST_NO_NUMBA", "").lower() not in ("1", "true", "yes")


def tally_categorical_numpy(u: np.ndarray, cdf: np.ndarray) -> np.ndarray:
    # category = number of thresholds <= u
    idx = np.searchsorted(cdf, u, side="right")
    return np.bincount(idx, minlength=4).astype(np.int64)


def tally_bernoulli_numpy(pa: np.ndarray, pb: np.ndarray, ua: np.ndarray, ub: np.ndarray) -> np.ndarray:
    da = ua < pa
    db = ub < pb
    both = int(np.count_nonzero(da & db))
    n_a = int(np.count_nonzero(da))
    n_b = int(np.count_nonzero(db))
    return np.array([both, n_a - both, n_b - both, ua.shape[0] - n_a - n_b + both], dtype=np.int64)


def _tally_categorical_py(u, cdf):
    # branchless counts of u below each threshold; cdf is non-decreasing
    c0 = cdf[0]
    c1 = cdf[1]
    c2 = cdf[2]
    k0 = 0
    k1 = 0
    k2 = 0
    for i in range(u.shape[0]):
        x = u[i]
        k0 += x < c0
        k1 += x < c1
        k2 += x < c2
    out = np.empty(4, dtype=np.int64)
    out[0] = k0
    out[1] = k1 - k0
    out[2] = k2 - k1
    out[3] = u.shape[0] - k2
    return out


def _tally_bernoulli_py(pa, pb, ua, ub):
    n_a = 0
    n_b = 0
    both = 0
    for i in range(ua.shape[0]):
        da = ua[i] < pa[i]
        db = ub[i] < pb[i]
        n_a += da
        n_b += db
        both += da & db
    out = np.empty(4, dtype=np.int64)
    out[0] = both
    out[1] = n_a - both
    out[2] = n_b - both
    out[3] = ua.shape[0] - n_a - n_b + both
    return out


if numba is not None:
    tally_categorical_numba = numba.njit(nogil=True, cache=True)(_tally_categorical_py)
    tally_bernoulli_numba = numba.njit(nogil=True, cache=True)(_tally_bernoulli_py)
else:  # pragma: no cover
    tally_categorical_numba = _tally_categorical_py
    tally_bernoulli_numba = _tally_bernoulli_py


def tally_categorical(u: np.ndarray, cdf: np.ndarray) -> np.ndarray:
    """Count uniforms ``u`` falling into the four cells cut at ``cdf[0..2]``."""
    if USE_NUMBA:
        return tally_categorical_numba(u, cdf)
    return tally_categorical_numpy(u, cdf)


def tally_bernoulli(pa: np.ndarray, pb: np.ndarray, ua: np.ndarray, ub: np.ndarray) -> np.ndarray:
    """Four-outcome tally of independent detections ``ua < pa`` and ``ub < pb``."""
    if USE_NUMBA:
        return tally_bernoulli_numba(pa, pb, ua, ub)
    return tally_bernoulli_numpy(pa, pb, ua, ub)
