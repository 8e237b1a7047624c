"""Benchmark the hot distance kernels: numba JIT vs pure-numpy fallback.

Usage: python benchmarks/kernel_bench.py [--repeats 5]

The same functions run in production: the JIT path is the default, the numpy
path is what HQVQ_NO_NUMBA=1 selects.
"""

import argparse
import time

import numpy as np

from hqvq import kernels


def time_call(fn, *args, repeats):
    fn(*args)  # warm (JIT compile / cache touch)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_case(name, np_fn, jit_fn, args, repeats):
    t_np = time_call(np_fn, *args, repeats=repeats)
    if jit_fn is not None:
        t_jit = time_call(jit_fn, *args, repeats=repeats)
        speedup = t_np / t_jit
        print(
            f"{name:<28} numpy {t_np * 1e6:10.1f} us   numba {t_jit * 1e6:10.1f} us   "
            f"speedup x{speedup:5.2f}"
        )
    else:
        print(f"{name:<28} numpy {t_np * 1e6:10.1f} us   numba       (unavailable)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"active implementation: {kernels.ACTIVE_IMPL}")
    rng = np.random.default_rng(0)

    for n, k in ((256, 2), (1024, 4), (4096, 16)):
        vectors = rng.uniform(0, 255, size=(n, k))
        x = rng.uniform(0, 255, size=k)
        bench_case(
            f"dist_to_all  N={n} k={k}",
            kernels.dist_to_all_numpy,
            kernels.dist_to_all_jit,
            (x, vectors),
            args.repeats,
        )

    for n, k in ((256, 2), (1024, 4)):
        vectors = rng.uniform(0, 255, size=(n, k))
        bench_case(
            f"min_pairwise N={n} k={k}",
            kernels.min_pairwise_numpy,
            kernels.min_pairwise_jit,
            (vectors,),
            args.repeats,
        )

    for m, n, k in ((2000, 256, 2), (2000, 1024, 4)):
        queries = rng.uniform(0, 255, size=(m, k))
        vectors = rng.uniform(0, 255, size=(n, k))
        bench_case(
            f"nearest_many M={m} N={n}",
            kernels.nearest_many_numpy,
            kernels.nearest_many_jit,
            (queries, vectors),
            args.repeats,
        )


if __name__ == "__main__":
    main()
