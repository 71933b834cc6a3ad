import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robustmax.core import BlockScheme, DataMatrix, fit_estimates
from robustmax.functional import (
    CurveBatch,
    CurveSample,
    GbmSpec,
    as_batch,
    calibrate_gbm,
    coefficient_matrix,
    cosine_basis,
    functional_zero_test,
    project_curve,
    projection_matrix,
    sample_gbm,
    sample_gbm_paths,
    trapezoid_weights,
)
from robustmax.streams import RngStream


def test_basis_values():
    assert cosine_basis(1, 0.37) == 1.0
    assert cosine_basis(2, 0.0) == pytest.approx(math.sqrt(2))
    assert cosine_basis(3, 0.5) == pytest.approx(-math.sqrt(2))
    with pytest.raises(ValueError):
        cosine_basis(0, 0.1)


def test_basis_orthogonal_fine_grid():
    t = np.linspace(0, 1, 10_000)
    w = trapezoid_weights(t)
    assert abs(w @ (cosine_basis(2, t) * cosine_basis(3, t))) < 1e-6
    assert w @ cosine_basis(4, t) ** 2 == pytest.approx(1.0, abs=1e-6)


def test_gram_matrix_near_identity():
    t = np.linspace(0, 1, 1001)
    P = projection_matrix(t, range(1, 11))
    G = P.T @ cosine_basis(np.arange(1, 11)[None, :], t[:, None])
    np.testing.assert_allclose(G, np.eye(10), atol=1e-4)


def test_trapezoid_weights_sum():
    w = trapezoid_weights(np.linspace(0, 1, 7))
    assert w.sum() == pytest.approx(1.0)
    assert w[0] == pytest.approx(w[1] / 2)


def test_projections():
    t = np.linspace(0, 1, 101)
    np.testing.assert_array_equal(project_curve(CurveSample(t, np.zeros_like(t)), range(1, 6)), 0.0)
    c = project_curve(CurveSample(t, np.full_like(t, 2.5)), range(1, 6))
    np.testing.assert_allclose(c, [2.5, 0, 0, 0, 0], atol=1e-3)
    fine = np.linspace(0, 1, 1001)
    c3 = project_curve(CurveSample(fine, cosine_basis(3, fine)), range(1, 6))
    np.testing.assert_allclose(c3, [0, 0, 1, 0, 0], atol=1e-4)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3), st.integers(2, 40))
def test_projection_is_linear(coefs, K):
    t = np.linspace(0, 1, K + 1)
    a, b, c = coefs
    f = a + b * np.cos(math.pi * t)
    g = c * t**2
    P = projection_matrix(t, range(1, 5))
    np.testing.assert_allclose((f + g) @ P, f @ P + g @ P, atol=1e-9)


def test_grid_validation():
    with pytest.raises(ValueError):
        CurveSample(np.array([0.0, 0.5, 0.6]), np.zeros(3))
    with pytest.raises(ValueError):
        CurveSample(np.linspace(0, 1, 4), np.zeros(3))
    with pytest.raises(ValueError):
        CurveSample(np.linspace(0, 1, 3), np.array([0.0, np.nan, 1.0]))
    with pytest.raises(ValueError):
        as_batch([CurveSample(np.linspace(0, 1, 3), np.zeros(3)), CurveSample(np.linspace(0, 2, 3), np.zeros(3))])


def test_coefficient_matrix_consistency(rng):
    t = np.linspace(0, 1, 51)
    batch = CurveBatch(t, rng.standard_normal((20, 51)))
    X = coefficient_matrix(batch, 7, start_index=2)
    assert X.shape == (20, 7)
    np.testing.assert_allclose(X[4], project_curve(batch[4], range(2, 9)))
    dm = coefficient_matrix(list(batch), 7, 2, m_n=10)
    assert isinstance(dm, DataMatrix) and dm.n == 10
    np.testing.assert_allclose(dm.values, X)


# -- GBM ------------------------------------------------------------------------


def test_gbm_degenerate_is_one():
    path = sample_gbm(RngStream(0), GbmSpec(0.0, 1.0, 0.0, K=20))
    np.testing.assert_array_equal(path.values, 1.0)


def test_gbm_moments():
    K = 50
    spec = GbmSpec(1.0, 1.0, 0.2, K=K)
    paths = sample_gbm_paths(RngStream(1), spec, 10_000)
    assert np.all(paths.values > 0)
    np.testing.assert_array_equal(paths.values[:, 0], 1.0)
    s1 = paths.values[:, -1]
    se = s1.std() / math.sqrt(s1.size)
    assert abs(s1.mean() - math.e) < 3 * se
    inc = np.diff(np.log(paths.values), axis=1)
    assert inc.var() == pytest.approx(0.2**2 / K, rel=0.1)


def test_gbm_deterministic_and_validated():
    spec = GbmSpec(0.05, np.linspace(0, 1, 11), 0.2, K=10)
    a = sample_gbm_paths(RngStream(3), spec, 4).values
    assert np.array_equal(a, sample_gbm_paths(RngStream(3), spec, 4).values)
    with pytest.raises(ValueError):
        GbmSpec(-0.1, 1.0, 0.2)
    with pytest.raises(ValueError):
        GbmSpec(0.1, np.ones(5), 0.2, K=10)


def test_calibration_recovers_parameters():
    N = 10_000
    spec = GbmSpec(1.0, 0.5, 0.3, K=50)
    paths = sample_gbm_paths(RngStream(4), spec, N)
    logs = CurveBatch(paths.grid, np.log(paths.values))
    mu, vs = calibrate_gbm(logs)
    assert vs == pytest.approx(0.3, rel=0.05)
    assert mu[0] == mu[1]
    # mu_hat(t) - mu = (Rbar(t) - E R(t)) / t + (vs^2 - 0.09) / 2; the first
    # term has standard error 0.3 / sqrt(N t)
    for k in (10, 25, 40):
        t = paths.grid[k]
        se = 0.3 / math.sqrt(N * t)
        assert abs(mu[k] - 0.5 - (vs**2 - 0.09) / 2) < 3 * se


def test_calibration_constant_curves():
    t = np.linspace(0, 1, 11)
    mu, vs = calibrate_gbm(CurveBatch(t, np.tile(0.3 * t, (5, 1))))
    assert vs == 0.0
    np.testing.assert_allclose(mu, 0.3)


def test_coefficient_sd_decay():
    spec = GbmSpec(0.0, 1.0, 0.2, K=100)
    paths = sample_gbm_paths(RngStream(5), spec, 300)
    data = coefficient_matrix(CurveBatch(paths.grid, paths.values - 1), 100, 1, m_n=30)
    sig = np.sort(fit_estimates(data, BlockScheme.for_holdout(30, 6), 0.9).sigmas)[::-1]
    assert sig[49] / sig[0] < 0.5


def test_functional_zero_test_behaviour():
    scheme = BlockScheme.for_holdout(30, 6)

    def centred(h, seed):
        paths = sample_gbm_paths(RngStream(seed), GbmSpec(h, 1.0, 0.2, K=100), 300)
        return CurveBatch(paths.grid, paths.values - 1)

    c = centred(0.3, 6)
    a = functional_zero_test(c, 40, 1, 0.05, 200, 9, scheme)
    b = functional_zero_test(c, 40, 1, 0.05, 200, 9, scheme)
    assert a == b
    assert a.reject and a.p_value <= 0.05
    # shifting every curve by a constant moves only the first coefficient,
    # so the constancy test (start_index=2) is unchanged
    s = CurveBatch(c.grid, c.values + 0.7)
    np.testing.assert_allclose(
        functional_zero_test(s, 40, 2, 0.05, 200, 9, scheme).p_value,
        functional_zero_test(c, 40, 2, 0.05, 200, 9, scheme).p_value,
    )


@pytest.mark.slow
def test_large_drift_is_detected():
    from robustmax.harness.config import PowerConfig
    from robustmax.harness.experiments import run_power_curve

    cfg = PowerConfig(trials=100, B=200, h_grid=[0.3], seed=2)
    (_, rate, _, failures), = run_power_curve(cfg)
    assert failures == 0
    assert rate >= 0.8
