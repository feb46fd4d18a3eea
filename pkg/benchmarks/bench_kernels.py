"""Compare the numba and pure-numpy kernel paths.

    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call per signature is excluded (compilation / cache load).
"""

import argparse
import time

import numpy as np

from rover_fuse import kernels
from rover_fuse._accel import HAVE_NUMBA


def _timeit(fn, args_list, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        for args in args_list:
            fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def edit_cases(rng, count=2000):
    return [
        (rng.integers(0, 36, size=rng.integers(4, 16)), rng.integers(0, 36, size=rng.integers(4, 16)), 1.0, 1.0, 1.0)
        for _ in range(count)
    ]


def align_cases(rng, count=2000, k=36):
    cases = []
    for _ in range(count):
        P = rng.dirichlet(np.full(k + 1, 0.2), size=int(rng.integers(6, 14)))
        m = int(rng.integers(6, 14))
        X = np.hstack([rng.dirichlet(np.full(k, 0.2), size=m), np.zeros((m, 1))])
        cases.append((P, X))
    return cases


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)

    rows = []
    for name, cases, np_fn, nb_fn in [
        ("edit_distance", edit_cases(rng), kernels.edit_distance_numpy, kernels.edit_distance_numba),
        ("align", align_cases(rng), kernels.align_numpy, kernels.align_numba),
    ]:
        t_np = _timeit(np_fn, cases, args.repeat)
        if HAVE_NUMBA:
            nb_fn(*cases[0])
            t_nb = _timeit(nb_fn, cases, args.repeat)
        else:
            t_nb = float("nan")
        rows.append((name, len(cases), t_np, t_nb))

    print(f"{'kernel':<15}{'calls':>7}{'numpy [ms]':>13}{'numba [ms]':>13}{'speedup':>9}")
    for name, n, t_np, t_nb in rows:
        print(f"{name:<15}{n:>7}{1e3 * t_np:>13.1f}{1e3 * t_nb:>13.1f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
