"""Correlation/covariance construction and heavy-tailed samplers.

Two data-generating families are provided, both with mean zero and
covariance ``Sigma = D^{1/2} R D^{1/2}``:

* elliptical: ``eta * Sigma^{1/2} U`` with ``U`` uniform on the sphere and
  ``3 eta^2 / (2p) ~ F(p, 6)`` (multivariate t on 6 degrees of freedom);
* separable: ``Sigma^{1/2} zeta`` with i.i.d. standardised Pareto(6) entries.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .streams import RngStream

PARETO_SHAPE = 6.0
PARETO_MEAN = PARETO_SHAPE / (PARETO_SHAPE - 1.0)  # 6/5
PARETO_VAR = PARETO_SHAPE / ((PARETO_SHAPE - 1.0) ** 2 * (PARETO_SHAPE - 2.0))  # 0.06
T_DOF = 6

CORRELATION_KINDS = ("ar", "algebraic", "identity", "explicit")


class NonSymmetricError(ValueError):
    pass


@dataclass(frozen=True)
class CorrelationSpec:
    kind: str
    p: int
    r: float = 0.5
    matrix: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in CORRELATION_KINDS:
            raise ValueError(f"unknown correlation kind {self.kind!r}")
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if self.kind == "ar" and not 0.0 < self.r < 1.0:
            raise ValueError(f"autoregressive r must lie in (0, 1), got {self.r}")
        if self.kind == "explicit":
            if self.matrix is None or np.shape(self.matrix) != (self.p, self.p):
                raise ValueError("explicit correlation needs a p x p matrix")


def gen_correlation(spec: CorrelationSpec) -> np.ndarray:
    p = spec.p
    lag = np.abs(np.subtract.outer(np.arange(p), np.arange(p)))
    if spec.kind == "ar":
        return spec.r ** lag.astype(float)
    if spec.kind == "algebraic":
        with np.errstate(divide="ignore"):
            R = 1.0 / (4.0 * lag.astype(float) ** 2)
        np.fill_diagonal(R, 1.0)
        return R
    if spec.kind == "identity":
        return np.eye(p)
    R = np.array(spec.matrix, dtype=float)
    if not np.allclose(R, R.T, atol=1e-12) or not np.allclose(np.diag(R), 1.0):
        raise ValueError("explicit correlation must be symmetric with unit diagonal")
    return R


def matrix_sqrt(sigma, tol: float = 1e-12, neg_tol: float = 1e-10) -> np.ndarray:
    """Symmetric PSD square root via cyclic Jacobi eigendecomposition.

    Eigenvalues in ``[-neg_tol, 0)`` are treated as zero; anything more
    negative means the input is not PSD and raises ``ValueError``.
    """
    A = np.asarray(sigma, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expected a square matrix")
    amax = np.abs(A).max() if A.size else 0.0
    if np.abs(A - A.T).max(initial=0.0) > 1e-12 * max(amax, 1.0):
        raise NonSymmetricError("matrix is not symmetric")
    lam, V, _ = kernels.jacobi_eigh(0.5 * (A + A.T), tol=tol)
    if lam.min(initial=0.0) < -neg_tol:
        raise ValueError(f"matrix is not positive semidefinite (eigenvalue {lam.min():.3g})")
    root = np.sqrt(np.clip(lam, 0.0, None))
    S = (V * root) @ V.T
    return 0.5 * (S + S.T)


@dataclass(frozen=True)
class CovarianceModel:
    std_devs: np.ndarray
    corr: CorrelationSpec

    @classmethod
    def decaying(cls, corr: CorrelationSpec) -> CovarianceModel:
        """Standard deviations ``j**-0.5``, j = 1..p."""
        return cls(np.arange(1, corr.p + 1) ** -0.5, corr)

    @property
    def p(self) -> int:
        return self.corr.p

    @cached_property
    def sigma(self) -> np.ndarray:
        d = np.asarray(self.std_devs, dtype=float)
        return d[:, None] * gen_correlation(self.corr) * d[None, :]

    @cached_property
    def sqrt_sigma(self) -> np.ndarray:
        return matrix_sqrt(self.sigma)


def sample_gaussian_vector(stream: RngStream, p: int) -> np.ndarray:
    if p < 1:
        raise ValueError("p must be >= 1")
    return stream.normal(p)


def sample_pareto_std(stream: RngStream, size=None):
    """Pareto(6) draws on ``[1, inf)``, centred and scaled to unit variance."""
    u = stream.uniform(size)
    omega = (1.0 - u) ** (-1.0 / PARETO_SHAPE)
    return (omega - PARETO_MEAN) / np.sqrt(PARETO_VAR)


def _chi2(stream: RngStream, dof: int, size: int) -> np.ndarray:
    z = stream.normal((size, dof))
    return (z * z).sum(axis=1)


def sample_eta_t6(stream: RngStream, p: int, size=None):
    """Radial part ``eta = sqrt(2p/3 * F)`` with ``F ~ F(p, 6)``; ``E eta^2 = p``."""
    m = 1 if size is None else int(size)
    num = _chi2(stream, p, m) / p
    den = _chi2(stream, T_DOF, m) / T_DOF
    while np.any(den == 0.0):  # probability zero, but never divide by it
        zero = den == 0.0
        den[zero] = _chi2(stream, T_DOF, int(zero.sum())) / T_DOF
    eta = np.sqrt(2.0 * p / 3.0 * num / den)
    return float(eta[0]) if size is None else eta


def sample_elliptical_t6(stream: RngStream, n: int, cov: CovarianceModel) -> np.ndarray:
    z = stream.normal((n, cov.p))
    u = z / np.linalg.norm(z, axis=1, keepdims=True)
    eta = sample_eta_t6(stream, cov.p, n)
    # rows are (S u)^T = u^T S since S is symmetric
    return (eta[:, None] * u) @ cov.sqrt_sigma


def sample_separable_pareto6(stream: RngStream, n: int, cov: CovarianceModel) -> np.ndarray:
    zeta = sample_pareto_std(stream, (n, cov.p))
    return zeta @ cov.sqrt_sigma


SAMPLERS = {
    "elliptical_t6": sample_elliptical_t6,
    "separable_pareto6": sample_separable_pareto6,
}
