import numpy as np
import pytest
from scipy import integrate, stats

from robustmax.datagen import (
    PARETO_MEAN,
    PARETO_VAR,
    CorrelationSpec,
    CovarianceModel,
    NonSymmetricError,
    gen_correlation,
    matrix_sqrt,
    sample_elliptical_t6,
    sample_eta_t6,
    sample_gaussian_vector,
    sample_pareto_std,
    sample_separable_pareto6,
)
from robustmax.streams import RngStream

# -- streams -------------------------------------------------------------------


def test_streams_reproducible_and_distinct():
    a = sample_gaussian_vector(RngStream(5), 8)
    b = sample_gaussian_vector(RngStream(5), 8)
    assert np.array_equal(a, b)
    c1 = RngStream(5).child(1).normal(8)
    c2 = RngStream(5).child(2).normal(8)
    cs = RngStream(5).child("data").normal(8)
    assert not np.array_equal(c1, c2) and not np.array_equal(c1, cs)
    assert np.array_equal(c1, RngStream(5).child(1).normal(8))
    with pytest.raises(ValueError):
        RngStream(-1)
    with pytest.raises(ValueError):
        RngStream(1).child(-3)


def test_gaussian_moments():
    z = sample_gaussian_vector(RngStream(1), 100_000)
    assert abs(z.mean()) < 0.02
    assert abs(z.var() - 1) < 0.03


# -- correlation and square roots -----------------------------------------------


def test_correlation_entries():
    R = gen_correlation(CorrelationSpec("ar", 5, 0.5))
    assert R[0, 1] == 0.5 and R[0, 2] == 0.25
    A = gen_correlation(CorrelationSpec("algebraic", 5))
    assert A[0, 2] == pytest.approx(1 / 16)
    assert A[3, 4] == pytest.approx(1 / 4)
    for kind in ("ar", "algebraic", "identity"):
        M = gen_correlation(CorrelationSpec(kind, 6))
        np.testing.assert_array_equal(np.diag(M), 1.0)
        np.testing.assert_array_equal(M, M.T)


def test_correlation_validation():
    with pytest.raises(ValueError):
        CorrelationSpec("ar", 4, r=1.0)
    with pytest.raises(ValueError):
        CorrelationSpec("banded", 4)
    with pytest.raises(ValueError):
        CorrelationSpec("explicit", 3, matrix=np.eye(2))
    M = np.array([[1.0, 0.3], [0.3, 1.0]])
    np.testing.assert_array_equal(gen_correlation(CorrelationSpec("explicit", 2, matrix=M)), M)


@pytest.mark.parametrize("p", [10, 200])
def test_ar_positive_definite(p):
    lam = np.linalg.eigvalsh(gen_correlation(CorrelationSpec("ar", p, 0.5)))
    assert lam.min() > 0


def test_matrix_sqrt_simple_cases():
    np.testing.assert_allclose(matrix_sqrt(np.eye(4)), np.eye(4), atol=1e-14)
    np.testing.assert_allclose(matrix_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)


@pytest.mark.parametrize("p", [3, 25, 60])
def test_matrix_sqrt_residual(rng, p):
    A = rng.standard_normal((p, p))
    sigma = A @ A.T
    S = matrix_sqrt(sigma)
    assert np.linalg.norm(S @ S - sigma) / np.linalg.norm(sigma) <= 1e-8
    np.testing.assert_array_equal(S, S.T)
    assert np.linalg.eigvalsh(S).min() >= -1e-9


def test_matrix_sqrt_semidefinite_and_errors(rng):
    v = rng.standard_normal((5, 2))
    low_rank = v @ v.T
    S = matrix_sqrt(low_rank)
    assert np.linalg.norm(S @ S - low_rank) / np.linalg.norm(low_rank) <= 1e-8
    with pytest.raises(NonSymmetricError):
        matrix_sqrt(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        matrix_sqrt(np.diag([1.0, -1.0]))


def test_covariance_model_default_scales():
    cov = CovarianceModel.decaying(CorrelationSpec("ar", 6))
    np.testing.assert_allclose(np.diag(cov.sigma), 1 / np.arange(1, 7))
    S = cov.sqrt_sigma
    assert np.linalg.norm(S @ S - cov.sigma) / np.linalg.norm(cov.sigma) <= 1e-8


# -- Pareto ---------------------------------------------------------------------


def test_pareto_closed_form_moments_by_quadrature():
    density = lambda x: 6 * x**-7.0  # noqa: E731
    mean = integrate.quad(lambda x: x * density(x), 1, np.inf)[0]
    second = integrate.quad(lambda x: x * x * density(x), 1, np.inf)[0]
    assert PARETO_MEAN == pytest.approx(mean, rel=1e-10) and PARETO_MEAN == pytest.approx(1.2)
    assert PARETO_VAR == pytest.approx(second - mean**2, rel=1e-8) and PARETO_VAR == pytest.approx(0.06)


def test_pareto_standardised_draws():
    z = sample_pareto_std(RngStream(2), 100_000)
    assert abs(z.mean()) < 0.02
    assert abs(z.var() - 1) < 0.1
    assert z.min() >= -PARETO_MEAN / np.sqrt(PARETO_VAR) - 1e-12


# -- elliptical t6 ---------------------------------------------------------------


def test_eta_properties():
    assert sample_eta_t6(RngStream(3), 50) == sample_eta_t6(RngStream(3), 50)
    eta = sample_eta_t6(RngStream(3), 50, 10_000)
    assert np.all(eta >= 0)
    # F(p, 6) has mean 6/4, so E eta^2 = (2p/3)(3/2) = p
    f_mean = stats.f(50, 6).mean()
    assert f_mean == pytest.approx(1.5)
    assert abs((eta**2 / 50).mean() - 1) < 0.15


def test_eta_law_matches_f_distribution():
    p = 20
    eta = sample_eta_t6(RngStream(4), p, 20_000)
    f = 3 * eta**2 / (2 * p)
    assert stats.kstest(f, stats.f(p, 6).cdf).pvalue > 0.001


@pytest.fixture(scope="module")
def cov5():
    return CovarianceModel.decaying(CorrelationSpec("ar", 5))


def test_elliptical_covariance(cov5):
    X = sample_elliptical_t6(RngStream(6), 100_000, cov5)
    emp = X.T @ X / X.shape[0]
    assert np.abs(emp - cov5.sigma).max() <= 0.05 * np.abs(cov5.sigma).max()


def test_elliptical_marginal_kurtosis(cov5):
    X = sample_elliptical_t6(RngStream(7), 100_000, cov5)
    assert abs(stats.kurtosis(X[:, 0]) - 3.0) <= 1.0


def test_elliptical_direction_unit_norm():
    s = RngStream(8)
    cov = CovarianceModel(np.ones(4), CorrelationSpec("identity", 4))
    X = sample_elliptical_t6(s, 5, cov)
    # with Sigma = I each row is eta * U, so the row norm is eta
    s2 = RngStream(8)
    z = s2.normal((5, 4))
    eta = sample_eta_t6(s2, 4, 5)
    np.testing.assert_allclose(np.linalg.norm(X, axis=1), eta, rtol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(z / np.linalg.norm(z, axis=1, keepdims=True), axis=1), 1.0)


# -- separable Pareto --------------------------------------------------------------


def test_separable_identity_is_raw_pareto():
    cov = CovarianceModel(np.ones(3), CorrelationSpec("identity", 3))
    X = sample_separable_pareto6(RngStream(9), 4, cov)
    np.testing.assert_allclose(X, sample_pareto_std(RngStream(9), (4, 3)), atol=1e-14)


def test_separable_covariance_and_skew(cov5):
    X = sample_separable_pareto6(RngStream(10), 100_000, cov5)
    emp = X.T @ X / X.shape[0]
    assert np.abs(emp - cov5.sigma).max() <= 0.05 * np.abs(cov5.sigma).max()
    assert np.abs(X.mean(axis=0)).max() < 0.02
    assert stats.skew(X[:, 0]) > 0.5


def test_samplers_deterministic(cov5):
    a = sample_separable_pareto6(RngStream(11), 10, cov5)
    b = sample_separable_pareto6(RngStream(11), 10, cov5)
    assert np.array_equal(a, b)
    c = sample_elliptical_t6(RngStream(11), 10, cov5)
    d = sample_elliptical_t6(RngStream(11), 10, cov5)
    assert np.array_equal(c, d)
