"""Time the numba and numpy paths of each kernel on the largest spaces the
acceptance checks touch (q = 3, N = 3, dims (3, 1): 3^9 points).

    python benchmarks/bench_kernels.py [--repeat 5] [--q 3] [--N 3]

The first numba call compiles (or loads the on-disk cache); it is timed
separately as "warmup" and excluded from the per-call figures.
"""

import argparse
import time
import timeit

import numpy as np

from hallsym import hall, kernels
from hallsym.hall import Q, enumerate_points, stacked_at_i


def _split_inputs(N, q):
    dims = hall.Weight(3, 1)
    X = enumerate_points(Q(N), dims, q)
    Ri, Rj = hall.subspace_candidates(dims, (1, 1), q)[0]
    S, A, B = hall._subspace_maps(Q(N), dims, Ri, Rj, q)
    return (X, S, A, B, q)


def _rank_inputs(N, q):
    dims = (3, 1)
    X = enumerate_points(Q(N), dims, q)
    return (stacked_at_i(Q(N), dims, X), q)


def _kernel_inputs(N, q):
    # the shape omega_i meets at m' = 2: N x 2 stacked maps out of i
    rng = np.random.default_rng(0)
    return (rng.integers(0, q, size=(q ** 9, N, 2)), q)


CASES = {
    "stable_split": (kernels.stable_split, _split_inputs),
    "batch_rank": (kernels.batch_rank, _rank_inputs),
    "left_kernel": (kernels.left_kernel, _kernel_inputs),
}


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def bench(repeat, q, N):
    rows = []
    for name, (fn, make) in CASES.items():
        args = make(N, q)
        results = {}
        timings = {}
        for backend in ("numpy", "numba"):
            if backend == "numba" and not kernels.NUMBA_AVAILABLE:
                continue
            t0 = time.perf_counter()
            results[backend] = fn(*args, backend_name=backend)
            warm = time.perf_counter() - t0
            per = min(timeit.repeat(lambda: fn(*args, backend_name=backend),
                                    number=1, repeat=repeat))
            timings[backend] = (warm, per)
        agree = len(results) < 2 or _same(results["numpy"], results["numba"])
        rows.append((name, len(args[0]), timings, agree))

    # end to end: one Hall product at the same size
    rng = np.random.default_rng(0)
    f1 = hall.random_invariant_function(Q(N), (2, 1), q, hall.DEFAULT_CONVENTION, rng)
    f2 = hall.random_invariant_function(Q(N), (1, 0), q, hall.DEFAULT_CONVENTION, rng)
    timings = {}
    for backend in ("numpy", "numba") if kernels.NUMBA_AVAILABLE else ("numpy",):
        t0 = time.perf_counter()
        hall.hall_product(f1, f2, backend)
        warm = time.perf_counter() - t0
        per = min(timeit.repeat(lambda: hall.hall_product(f1, f2, backend),
                                number=1, repeat=repeat))
        timings[backend] = (warm, per)
    agree = (not kernels.NUMBA_AVAILABLE
             or hall.hall_product(f1, f2, "numpy") == hall.hall_product(f1, f2, "numba"))
    rows.append(("hall_product", q ** (3 * N), timings, agree))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--N", type=int, default=3)
    args = ap.parse_args()
    rows = bench(args.repeat, args.q, args.N)
    print(f"{'kernel':<14}{'points':>8}{'numpy ms':>11}{'numba ms':>11}"
          f"{'warmup ms':>11}{'speedup':>9}  agree")
    for name, n, t, agree in rows:
        npy = t["numpy"][1] * 1e3
        if "numba" in t:
            nb = t["numba"][1] * 1e3
            warm = t["numba"][0] * 1e3
            print(f"{name:<14}{n:>8}{npy:>11.2f}{nb:>11.2f}{warm:>11.1f}{npy / nb:>8.1f}x  {agree}")
        else:
            print(f"{name:<14}{n:>8}{npy:>11.2f}{'-':>11}{'-':>11}{'-':>9}  {agree}")


if __name__ == "__main__":
    main()
