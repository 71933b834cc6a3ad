"""numba and numpy kernels must agree."""
import numpy as np
import pytest

from robustmax import kernels

PAIRS = [
    ("truncated_column_sums", kernels.truncated_column_sums_numpy, kernels.truncated_column_sums_numba),
    ("centered_scores", kernels.centered_scores_numpy, kernels.centered_scores_numba),
]


@pytest.fixture
def problem(rng):
    n, p = 60, 7
    X = rng.standard_t(3, size=(n, p)) * np.arange(1, p + 1) ** -0.5
    centers = rng.normal(scale=0.1, size=p)
    trunc = rng.uniform(0.2, 3.0, size=p)
    return X, centers, trunc


@pytest.mark.parametrize("name,fnp,fnb", PAIRS, ids=[p[0] for p in PAIRS])
def test_elementwise_kernels_agree(problem, name, fnp, fnb):
    np.testing.assert_allclose(fnp(*problem), fnb(*problem), rtol=1e-12, atol=1e-12)


def test_bootstrap_extremes_agree(problem, rng):
    X, c, t = problem
    Z = kernels.centered_scores_numpy(X, c, t)
    xi = rng.standard_normal((40, X.shape[0]))
    w = rng.uniform(0.5, 2.0, X.shape[1])
    for a, b in zip(kernels.bootstrap_extremes_numpy(xi, Z, w), kernels.bootstrap_extremes_numba(xi, Z, w)):
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("q", [(-1.0, 1.0), (-0.3, 2.5), (-50.0, 50.0), (5.0, 5.0), (-1e6, -1e5)])
def test_invert_columns_agree(problem, q):
    X, _, t = problem
    scale = np.full(X.shape[1], 1 / np.sqrt(X.shape[0]))
    lo_a, hi_a = kernels.invert_columns_numpy(X, t, scale, *q)
    lo_b, hi_b = kernels.invert_columns_numba(X, t, scale, *q)
    np.testing.assert_allclose(lo_a, lo_b, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(hi_a, hi_b, rtol=1e-12, atol=1e-12)


def test_jacobi_agree(rng):
    A = rng.standard_normal((12, 12))
    A = A @ A.T
    la, va, _ = kernels.jacobi_eigh_numpy(A)
    lb, vb, _ = kernels.jacobi_eigh_numba(A)
    np.testing.assert_allclose(np.sort(la), np.sort(lb), rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(np.sort(la), np.linalg.eigvalsh(A), rtol=1e-10, atol=1e-10)
    for lam, V in ((la, va), (lb, vb)):
        np.testing.assert_allclose((V * lam) @ V.T, A, atol=1e-10)
        np.testing.assert_allclose(V.T @ V, np.eye(12), atol=1e-12)


@pytest.mark.parametrize("impl", [kernels.jacobi_eigh_numpy, kernels.jacobi_eigh_numba])
def test_jacobi_converges_at_moderate_size(rng, impl):
    # the stopping norm must reach ~1e-12 relative; a total-minus-diagonal
    # formula stalls near 1e-8
    A = rng.standard_normal((60, 60))
    lam, _, sweeps = impl(A @ A.T)
    assert sweeps < 20
    np.testing.assert_allclose(np.sort(lam), np.linalg.eigvalsh(A @ A.T), rtol=1e-9, atol=1e-9)


def test_jacobi_zero_matrix():
    lam, V, sweeps = kernels.jacobi_eigh(np.zeros((3, 3)))
    assert np.all(lam == 0) and sweeps == 0


def test_backend_flag_selects_numpy(monkeypatch):
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "import robustmax; print(robustmax.BACKEND)"],
        env={**__import__("os").environ, "ROBUSTMAX_DISABLE_NUMBA": "1"},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "numpy"
