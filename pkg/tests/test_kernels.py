import subprocess
import sys

import numpy as np
import pytest

from greenpod import kernels


def _random_case(rng, n_alt, n_crit):
    values = rng.uniform(0.0, 100.0, size=(n_alt, n_crit))
    weights = rng.uniform(0.1, 1.0, size=n_crit)
    weights /= weights.sum()
    benefit = rng.uniform(size=n_crit) < 0.5
    return values, weights, benefit


@pytest.mark.skipif(kernels.active_backend() != "numba", reason="numba unavailable")
def test_backends_agree_on_random_matrices():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n_alt = rng.integers(1, 8)
        n_crit = rng.integers(1, 8)
        values, weights, benefit = _random_case(rng, n_alt, n_crit)
        nb = kernels._closeness_numba(values, weights, benefit)
        npy = kernels._closeness_numpy(values, weights, benefit)
        for a, b in zip(nb, npy):
            assert np.allclose(a, b, atol=1e-12, rtol=0.0)


def test_zero_column_handled_by_both_paths():
    values = np.array([[0.0, 1.0], [0.0, 2.0]])
    weights = np.array([0.5, 0.5])
    benefit = np.array([True, True])
    for fn in (kernels._closeness_numpy, kernels._closeness_loops):
        weighted, d_plus, d_minus, closeness = fn(values, weights, benefit)
        assert np.all(weighted[:, 0] == 0.0)
        assert np.all(np.isfinite(closeness))


def test_degenerate_identical_rows_closeness_one():
    values = np.array([[3.0, 4.0], [3.0, 4.0]])
    weights = np.array([0.5, 0.5])
    benefit = np.array([True, False])
    for fn in (kernels._closeness_numpy, kernels._closeness_loops):
        _, _, _, closeness = fn(values, weights, benefit)
        assert np.all(closeness == 1.0)


def test_set_backend_roundtrip():
    prev = kernels.set_backend("numpy")
    try:
        assert kernels.active_backend() == "numpy"
        values = np.array([[1.0, 2.0], [3.0, 4.0]])
        out = kernels.topsis_closeness(values, np.array([0.5, 0.5]), np.array([True, True]))
        assert len(out) == 4
    finally:
        kernels.set_backend(prev)
    assert kernels.active_backend() == prev


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.set_backend("gpu")


def test_pure_numpy_env_flag_disables_numba():
    code = (
        "import greenpod.kernels as k; "
        "assert k.active_backend() == 'numpy', k.active_backend(); "
        "import pytest; "
        "print('ok')"
    )
    proc = subprocess.run(
        [sys.executable, "-c", code],
        env={"GREENPOD_PURE_NUMPY": "1", "PATH": "/usr/bin:/bin"},
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "ok" in proc.stdout


def test_vector_normalize_matches_manual():
    values = np.array([[3.0, 1.0], [4.0, 1.0]])
    out = kernels.vector_normalize(values)
    assert np.allclose(out[:, 0], [0.6, 0.8])
    assert np.allclose(out[:, 1], [1.0 / np.sqrt(2.0)] * 2)
