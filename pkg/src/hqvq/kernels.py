"""Hot numeric kernels: distances from a query to a whole codebook.

Every distance the package computes goes through one of these functions, so
index decisions (argmin, threshold tests) are bit-consistent across the
encoder, the full-search baseline and the statistics code.

Two implementations are provided: plain numpy and numba ``@njit``.  The JIT
path is active by default; set ``HQVQ_NO_NUMBA=1`` to force the numpy
fallback (the package also falls back automatically when numba is missing).
``benchmarks/kernel_bench.py`` compares both.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("HQVQ_NO_NUMBA", "").strip().lower()
NUMBA_DISABLED = _FLAG in ("1", "true", "yes", "on")


def _dist_to_all_loop(x, vectors):
    n, k = vectors.shape
    out = np.empty(n)
    for i in range(n):
        s = 0.0
        for d in range(k):
            diff = vectors[i, d] - x[d]
            s += diff * diff
        out[i] = np.sqrt(s)
    return out


def _min_pairwise_loop(vectors):
    n, k = vectors.shape
    best = np.inf
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for d in range(k):
                diff = vectors[i, d] - vectors[j, d]
                s += diff * diff
            if s < best:
                best = s
    return np.sqrt(best)


def _nearest_many_loop(queries, vectors):
    m = queries.shape[0]
    n, k = vectors.shape
    idx = np.empty(m, dtype=np.int64)
    dist = np.empty(m)
    for q in range(m):
        best = np.inf
        arg = 0
        for i in range(n):
            s = 0.0
            for d in range(k):
                diff = vectors[i, d] - queries[q, d]
                s += diff * diff
            if s < best:
                best = s
                arg = i
        idx[q] = arg
        dist[q] = np.sqrt(best)
    return idx, dist


def dist_to_all_numpy(x: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Euclidean distance from ``x`` (k,) to every row of ``vectors`` (n, k)."""
    diff = vectors - x
    return np.sqrt((diff * diff).sum(axis=1))


def min_pairwise_numpy(vectors: np.ndarray) -> float:
    """Minimum Euclidean distance over all distinct row pairs (n >= 2)."""
    best = np.inf
    for i in range(vectors.shape[0] - 1):
        diff = vectors[i + 1 :] - vectors[i]
        d2 = (diff * diff).sum(axis=1).min()
        if d2 < best:
            best = d2
    return float(np.sqrt(best))


def nearest_many_numpy(queries: np.ndarray, vectors: np.ndarray):
    """Nearest row of ``vectors`` for each row of ``queries``.

    Returns (indices, distances); ties resolve to the smallest index.
    """
    m = queries.shape[0]
    idx = np.empty(m, dtype=np.int64)
    dist = np.empty(m)
    for q in range(m):
        d = dist_to_all_numpy(queries[q], vectors)
        a = int(np.argmin(d))
        idx[q] = a
        dist[q] = d[a]
    return idx, dist


HAVE_NUMBA = False
if not NUMBA_DISABLED:
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:
        HAVE_NUMBA = False

if HAVE_NUMBA:
    dist_to_all_jit = njit(cache=True)(_dist_to_all_loop)
    min_pairwise_jit = njit(cache=True)(_min_pairwise_loop)
    nearest_many_jit = njit(cache=True)(_nearest_many_loop)

    dist_to_all = dist_to_all_jit
    min_pairwise = min_pairwise_jit
    nearest_many = nearest_many_jit
    ACTIVE_IMPL = "numba"
else:
    dist_to_all_jit = None
    min_pairwise_jit = None
    nearest_many_jit = None

    dist_to_all = dist_to_all_numpy
    min_pairwise = min_pairwise_numpy
    nearest_many = nearest_many_numpy
    ACTIVE_IMPL = "numpy"


def warmup() -> None:
    """Trigger JIT compilation so first real calls are not skewed."""
    if not HAVE_NUMBA:
        return
    v = np.array([[0.0, 0.0], [1.0, 1.0]])
    q = np.array([[0.5, 0.5]])
    dist_to_all_jit(q[0], v)
    min_pairwise_jit(v)
    nearest_many_jit(q, v)
