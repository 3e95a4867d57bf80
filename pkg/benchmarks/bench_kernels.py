"""Timing comparison of the numba and pure-numpy kernel implementations.

Runs the row-matching and min-separation kernels on synthetic point sets of
increasing size, plus one end-to-end polytope realization, and prints both
timings with the speedup.  Usage:

    python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from wythoff import _kernels
from wythoff.diagram import parse
from wythoff.geometry import realize


def best_of(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    if not _kernels.HAS_NUMBA:
        print("numba is not importable; only the numpy path exists here.")
        return

    _kernels.warmup()
    rng = np.random.default_rng(42)
    rows = []

    for size, dim in [(2000, 4), (8000, 4), (20000, 8)]:
        ref = rng.normal(size=(size, dim))
        probe = ref[rng.permutation(size)] + rng.normal(scale=1e-9, size=(size, dim))
        t_nb = best_of(
            _kernels._match_rows_numba,
            np.ascontiguousarray(probe),
            np.ascontiguousarray(ref),
            1e-7,
            repeats=args.repeats,
        )
        t_np = best_of(_kernels._match_rows_numpy, probe, ref, 1e-7, repeats=args.repeats)
        rows.append((f"match_rows {size}x{dim}", t_nb, t_np))

    for size, dim in [(3000, 4), (10000, 4)]:
        pts = rng.normal(size=(size, dim))
        t_nb = best_of(_kernels._min_pairwise_numba, pts, repeats=args.repeats)
        t_np = best_of(_kernels._min_pairwise_numpy, pts, repeats=args.repeats)
        rows.append((f"min_pairwise {size}x{dim}", t_nb, t_np))

    t0 = time.perf_counter()
    realize(parse("x5x3x3x"))
    rows.append(("realize x5x3x3x (active path)", time.perf_counter() - t0, None))

    print(f"{'kernel':34s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, t_nb, t_np in rows:
        if t_np is None:
            print(f"{name:34s} {t_nb:9.4f}s {'-':>10s} {'-':>8s}")
        else:
            print(f"{name:34s} {t_nb:9.4f}s {t_np:9.4f}s {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
