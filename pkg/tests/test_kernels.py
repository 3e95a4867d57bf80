import os
import subprocess
import sys

import numpy as np
import pytest

from wythoff import _kernels
from wythoff._kernels import match_rows, min_pairwise_distance


def test_match_rows_recovers_permutation():
    rng = np.random.default_rng(7)
    ref = rng.normal(size=(50, 4))
    perm = rng.permutation(50)
    idx = match_rows(ref[perm], ref, 1e-9)
    assert np.array_equal(idx, perm)


def test_match_rows_reports_misses():
    ref = np.eye(3)
    probe = np.array([[1.0, 0.0, 0.0], [0.5, 0.5, 0.5]])
    idx = match_rows(probe, ref, 1e-6)
    assert idx[0] == 0 and idx[1] == -1


def test_match_rows_tolerance_boundary():
    ref = np.array([[0.0, 0.0]])
    near = np.array([[1e-8, 0.0]])
    far = np.array([[1e-4, 0.0]])
    assert match_rows(near, ref, 1e-7)[0] == 0
    assert match_rows(far, ref, 1e-7)[0] == -1


def test_match_rows_empty_reference():
    idx = match_rows(np.ones((2, 3)), np.empty((0, 3)), 1e-6)
    assert np.array_equal(idx, [-1, -1])


def test_min_pairwise_small_cases():
    assert min_pairwise_distance(np.zeros((1, 3))) == np.inf
    pts = np.array([[0.0, 0.0], [3.0, 4.0], [0.0, 1.0]])
    assert min_pairwise_distance(pts) == pytest.approx(1.0)


def _brute_min(pts):
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    np.fill_diagonal(d, np.inf)
    return d.min()


def test_min_pairwise_matches_brute_force():
    rng = np.random.default_rng(11)
    pts = rng.normal(size=(300, 5))  # above the numba dispatch threshold
    assert min_pairwise_distance(pts) == pytest.approx(_brute_min(pts), rel=1e-12)


def test_numpy_and_numba_paths_agree():
    rng = np.random.default_rng(3)
    ref = rng.normal(size=(200, 4))
    probe = np.vstack([ref[::3] + 1e-9, rng.normal(size=(40, 4)) * 10 + 50])
    got_np = _kernels._match_rows_numpy(probe, ref, 1e-7)
    assert min_pairwise_distance(probe) > 0
    if _kernels.HAS_NUMBA:
        got_nb = _kernels._match_rows_numba(
            np.ascontiguousarray(probe), np.ascontiguousarray(ref), 1e-7
        )
        assert np.array_equal(got_np, got_nb)
        pts = rng.normal(size=(400, 3))
        assert _kernels._min_pairwise_numba(pts) == pytest.approx(
            _kernels._min_pairwise_numpy(pts), rel=1e-12
        )


def _run_with_env(value):
    env = dict(os.environ, WYTHOFF_KERNELS=value)
    return subprocess.run(
        [sys.executable, "-c", "from wythoff._kernels import ACTIVE; print(ACTIVE)"],
        capture_output=True,
        text=True,
        env=env,
    )


def test_env_flag_selects_numpy():
    proc = _run_with_env("numpy")
    assert proc.returncode == 0
    assert proc.stdout.strip() == "numpy"


def test_env_flag_selects_numba():
    proc = _run_with_env("numba")
    assert proc.returncode == 0
    assert proc.stdout.strip() == "numba"


def test_env_flag_rejects_unknown_value():
    proc = _run_with_env("fortran")
    assert proc.returncode != 0
    assert "WYTHOFF_KERNELS" in proc.stderr
