"""Cosine-basis projections, geometric Brownian motion, and functional tests.

Basis convention: ``phi_1(t) = 1`` and ``phi_j(t) = sqrt(2) cos((j - 1) pi t)``
for ``j >= 2``, orthonormal on ``L^2[0, 1]``. Inner products are computed by
the composite trapezoid rule on each curve's own grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bootstrap import run_bootstrap
from .core import BlockScheme, DataMatrix, fit_estimates
from .inference import TestOutcome, zero_exclusion_test
from .streams import RngStream, as_stream


def _check_grid(grid: np.ndarray) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("grid needs at least two points")
    step = np.diff(grid)
    if np.any(step <= 0):
        raise ValueError("grid must be strictly increasing")
    if np.abs(step - step.mean()).max() > 1e-12:
        raise ValueError("grid must be equispaced")
    return grid


@dataclass(frozen=True)
class CurveSample:
    """One function observed on an equispaced grid."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = _check_grid(self.grid)
        values = np.asarray(self.values, dtype=float)
        if values.shape != grid.shape:
            raise ValueError("values and grid differ in length")
        if not np.isfinite(values).all():
            raise ValueError("curve values must be finite")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class CurveBatch:
    """Many curves on a common grid, one per row of ``values``."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = _check_grid(self.grid)
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[1] != grid.shape[0]:
            raise ValueError("values must be (curves, grid points)")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.shape[0]

    def __getitem__(self, i) -> CurveSample:
        return CurveSample(self.grid, self.values[i])

    def __iter__(self):
        return (self[i] for i in range(len(self)))


def as_batch(curves) -> CurveBatch:
    if isinstance(curves, CurveBatch):
        return curves
    if isinstance(curves, CurveSample):
        return CurveBatch(curves.grid, curves.values[None, :])
    curves = list(curves)
    if not curves:
        raise ValueError("no curves given")
    grid = curves[0].grid
    for c in curves[1:]:
        if c.grid.shape != grid.shape or np.abs(c.grid - grid).max() > 1e-12:
            raise ValueError("curves are not on a common grid")
    return CurveBatch(grid, np.stack([c.values for c in curves]))


def cosine_basis(j, t):
    j = np.asarray(j)
    if np.any(j < 1):
        raise ValueError("basis index must be >= 1")
    t = np.asarray(t, dtype=float)
    out = np.where(j == 1, 1.0, math.sqrt(2.0) * np.cos((j - 1) * math.pi * t))
    return float(out) if out.ndim == 0 else out


def trapezoid_weights(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    h = np.diff(grid)
    w = np.zeros_like(grid)
    w[:-1] += h / 2
    w[1:] += h / 2
    return w


def projection_matrix(grid, indices) -> np.ndarray:
    """``(grid points, len(indices))`` matrix; curve values @ it = coefficients."""
    grid = np.asarray(grid, dtype=float)
    idx = np.asarray(list(indices))
    return trapezoid_weights(grid)[:, None] * cosine_basis(idx[None, :], grid[:, None])


def project_curve(curve: CurveSample, indices) -> np.ndarray:
    return curve.values @ projection_matrix(curve.grid, indices)


def coefficient_matrix(curves, p: int, start_index: int = 1, m_n: int | None = None):
    """Cosine coefficients ``start_index .. start_index + p - 1`` of each curve.

    Returns a plain ``(curves, p)`` array, or a :class:`DataMatrix` whose last
    ``m_n`` rows are the hold-out when ``m_n`` is given.
    """
    if p < 1 or start_index < 1:
        raise ValueError("need p >= 1 and start_index >= 1")
    batch = as_batch(curves)
    X = batch.values @ projection_matrix(batch.grid, range(start_index, start_index + p))
    return X if m_n is None else DataMatrix.split(X, m_n)


@dataclass(frozen=True)
class GbmSpec:
    """``S(t) = exp((h mu(t) - varsigma0^2 / 2) t + varsigma0 W(t))`` on ``K`` steps."""

    h: float
    mu_curve: np.ndarray
    varsigma0: float
    K: int = 100

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if self.varsigma0 < 0 or self.h < 0:
            raise ValueError("h and varsigma0 must be non-negative")
        mu = np.broadcast_to(np.asarray(self.mu_curve, dtype=float), (self.K + 1,)).copy()
        object.__setattr__(self, "mu_curve", mu)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.K + 1)

    def with_h(self, h: float) -> GbmSpec:
        return GbmSpec(h, self.mu_curve, self.varsigma0, self.K)


def sample_gbm_paths(stream: RngStream, spec: GbmSpec, count: int) -> CurveBatch:
    t = spec.grid
    dW = stream.normal((count, spec.K)) * math.sqrt(1.0 / spec.K)
    W = np.concatenate((np.zeros((count, 1)), np.cumsum(dW, axis=1)), axis=1)
    drift = (spec.h * spec.mu_curve - 0.5 * spec.varsigma0**2) * t
    return CurveBatch(t, np.exp(drift + spec.varsigma0 * W))


def sample_gbm(stream: RngStream, spec: GbmSpec) -> CurveSample:
    return sample_gbm_paths(stream, spec, 1)[0]


def calibrate_gbm(log_return_curves) -> tuple[np.ndarray, float]:
    """``(mu_curve, varsigma0)`` from cumulative log-return curves, at ``h = 1``.

    ``varsigma0^2 / 2`` matches the time average of the pointwise variance and
    ``(mu(t) - varsigma0^2 / 2) t`` matches the pointwise mean curve. At
    ``t = 0`` both sides vanish, so ``mu(0)`` copies the first interior value.
    """
    batch = as_batch(log_return_curves)
    if len(batch) < 2:
        raise ValueError("calibration needs at least two curves")
    t = batch.grid
    s2 = batch.values.var(axis=0, ddof=1)
    varsigma0 = math.sqrt(max(0.0, 2.0 * float(trapezoid_weights(t) @ s2)))
    rbar = batch.values.mean(axis=0)
    mu = np.empty_like(t)
    pos = t > 0
    mu[pos] = rbar[pos] / t[pos] + 0.5 * varsigma0**2
    first = np.flatnonzero(pos)[0]
    mu[~pos] = mu[first]
    return mu, varsigma0


def functional_zero_test(
    curves,
    p: int,
    start_index: int,
    alpha: float,
    B: int,
    seed,
    scheme: BlockScheme,
    tau: float = 0.9,
) -> TestOutcome:
    """Test that coefficients ``start_index .. start_index+p-1`` all vanish.

    With ``start_index=1`` on ``S - 1`` this tests zero drift; with
    ``start_index=2`` it tests that the mean function is constant.
    """
    data = coefficient_matrix(curves, p, start_index, m_n=scheme.m_n)
    est = fit_estimates(data, scheme, tau)
    boot = run_bootstrap(data, est, B, as_stream(seed))
    return zero_exclusion_test(data, est, boot, alpha)
