"""Numeric hot kernels: tolerance row matching and min-separation scans.

Two implementations live side by side: numba @njit loops and pure-numpy
blocked versions.  The env var WYTHOFF_KERNELS selects one ("numba" or
"numpy"); default is numba when importable, numpy otherwise.  Both paths
are exercised by the test suite and timed by benchmarks/bench_kernels.py.
"""

import os

import numpy as np

_choice = os.environ.get("WYTHOFF_KERNELS", "").strip().lower()

if _choice not in ("", "numba", "numpy"):
    raise ValueError("WYTHOFF_KERNELS must be 'numba' or 'numpy', got %r" % _choice)

HAS_NUMBA = False
if _choice in ("", "numba"):
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:
        if _choice == "numba":
            raise

ACTIVE = "numba" if HAS_NUMBA else "numpy"


def _match_rows_numpy(points, ref, tol):
    # blocked so the (p, r) distance matrix never exceeds ~8MB
    points = np.ascontiguousarray(points, dtype=np.float64)
    ref = np.ascontiguousarray(ref, dtype=np.float64)
    out = np.full(len(points), -1, dtype=np.int64)
    if len(ref) == 0:
        return out
    block = max(1, int(1_000_000 // max(1, len(ref))))
    tol2 = tol * tol
    for lo in range(0, len(points), block):
        chunk = points[lo : lo + block]
        d2 = ((chunk[:, None, :] - ref[None, :, :]) ** 2).sum(axis=2)
        j = np.argmin(d2, axis=1)
        hit = d2[np.arange(len(chunk)), j] <= tol2
        out[lo : lo + len(chunk)][hit] = j[hit]
    return out


def _min_pairwise_numpy(points):
    points = np.ascontiguousarray(points, dtype=np.float64)
    m = len(points)
    if m < 2:
        return np.inf
    best = np.inf
    block = max(1, int(2_000_000 // m))
    for lo in range(0, m, block):
        chunk = points[lo : lo + block]
        d2 = ((chunk[:, None, :] - points[None, :, :]) ** 2).sum(axis=2)
        rows = np.arange(len(chunk))
        d2[rows, lo + rows] = np.inf
        best = min(best, float(d2.min()))
    return float(np.sqrt(best))


if HAS_NUMBA:

    @njit(cache=True)
    def _match_rows_numba(points, ref, tol):  # pragma: no cover - jitted
        p, d = points.shape
        r = ref.shape[0]
        out = np.full(p, -1, dtype=np.int64)
        tol2 = tol * tol
        for i in range(p):
            for j in range(r):
                s = 0.0
                for k in range(d):
                    t = points[i, k] - ref[j, k]
                    s += t * t
                    if s > tol2:
                        break
                if s <= tol2:
                    out[i] = j
                    break
        return out

    @njit(cache=True)
    def _min_pairwise_numba(points):  # pragma: no cover - jitted
        m, d = points.shape
        best = np.inf
        for i in range(m):
            for j in range(i + 1, m):
                s = 0.0
                for k in range(d):
                    t = points[i, k] - points[j, k]
                    s += t * t
                    if s >= best:
                        break
                if s < best:
                    best = s
        return np.sqrt(best)


def match_rows(points, ref, tol):
    """Index of the row of ref within tol of each row of points, else -1.

    Matching is by Euclidean distance; callers are responsible for keeping
    tol well below the minimum separation of ref (see min_pairwise_distance).
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    ref = np.ascontiguousarray(ref, dtype=np.float64)
    if HAS_NUMBA and len(points) * max(1, len(ref)) > 4096:
        return _match_rows_numba(points, ref, float(tol))
    return _match_rows_numpy(points, ref, float(tol))


def min_pairwise_distance(points):
    """Smallest Euclidean distance between two distinct rows (inf if < 2)."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    if len(points) < 2:
        return np.inf
    if HAS_NUMBA and len(points) > 256:
        return float(_min_pairwise_numba(points))
    return _min_pairwise_numpy(points)


def warmup():
    """Trigger jit compilation so timed sections do not pay for it."""
    pts = np.eye(3)
    if HAS_NUMBA:
        _match_rows_numba(pts, pts, 1e-9)
        _min_pairwise_numba(pts)
    match_rows(pts, pts, 1e-9)
    min_pairwise_distance(pts)
