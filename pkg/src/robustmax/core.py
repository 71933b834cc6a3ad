"""Hold-out splitting, median-of-means estimates and the robust max statistic.

Notation used throughout the package: the data matrix has ``n + m_n`` rows;
the first ``n`` are the main sample and the last ``m_n`` are the hold-out
set, which is cut into ``b_n`` contiguous blocks of even length ``ell_n``.
For coordinate ``j`` the hold-out gives a median-of-means centre and
variance, a truncation level ``t_j = sqrt(n) * sigma_j`` and a weight
``w_j = 1 / (sigma_j**tau * sqrt(n))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels


class DegenerateVarianceError(ValueError):
    """A hold-out column has zero median-of-means variance."""

    def __init__(self, coords):
        self.coords = tuple(int(j) for j in np.atleast_1d(coords))
        super().__init__(
            f"zero median-of-means variance in coordinate(s) {list(self.coords)[:10]}"
        )


@dataclass(frozen=True)
class BlockScheme:
    ell_n: int
    b_n: int

    def __post_init__(self):
        if self.ell_n < 2 or self.ell_n % 2:
            raise ValueError(f"ell_n must be even and >= 2, got {self.ell_n}")
        if self.b_n < 1:
            raise ValueError(f"b_n must be >= 1, got {self.b_n}")

    @classmethod
    def for_holdout(cls, m_n: int, ell_n: int) -> BlockScheme:
        if ell_n < 2 or ell_n % 2:
            raise ValueError(f"ell_n must be even and >= 2, got {ell_n}")
        if m_n % ell_n:
            raise ValueError(f"ell_n={ell_n} does not divide m_n={m_n}")
        return cls(ell_n, m_n // ell_n)

    @property
    def m_n(self) -> int:
        return self.ell_n * self.b_n

    def blocks(self, x: np.ndarray) -> np.ndarray:
        """Reshape hold-out rows into ``(b_n, ell_n, ...)`` blocks."""
        x = np.asarray(x, dtype=float)
        if x.shape[0] != self.m_n:
            raise ValueError(f"expected {self.m_n} hold-out rows, got {x.shape[0]}")
        return x.reshape((self.b_n, self.ell_n) + x.shape[1:])


@dataclass(frozen=True)
class DataMatrix:
    """Observations in rows; the last ``m_n`` rows are the hold-out set."""

    values: np.ndarray
    n: int
    m_n: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2:
            raise ValueError("values must be a 2-d array")
        object.__setattr__(self, "values", v)
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.m_n < 2 or self.m_n % 2:
            raise ValueError(f"m_n must be even and >= 2, got {self.m_n}")
        if v.shape[0] != self.n + self.m_n:
            raise ValueError(
                f"{v.shape[0]} rows do not match n + m_n = {self.n + self.m_n}"
            )
        if not np.isfinite(v).all():
            raise ValueError("data contain non-finite entries")

    @classmethod
    def split(cls, values, m_n: int) -> DataMatrix:
        values = np.asarray(values, dtype=float)
        return cls(values, values.shape[0] - m_n, m_n)

    @property
    def p(self) -> int:
        return self.values.shape[1]

    @property
    def main(self) -> np.ndarray:
        return self.values[: self.n]

    @property
    def holdout(self) -> np.ndarray:
        return self.values[self.n :]

    def shifted(self, shift) -> DataMatrix:
        return DataMatrix(self.values + np.asarray(shift, dtype=float), self.n, self.m_n)


@dataclass(frozen=True)
class MomEstimates:
    means: np.ndarray
    variances: np.ndarray
    trunc_levels: np.ndarray
    tau: float
    weights: np.ndarray
    n: int

    @property
    def p(self) -> int:
        return self.means.shape[0]

    @property
    def sigmas(self) -> np.ndarray:
        return np.sqrt(self.variances)


def truncate(x, t):
    """Clamp ``x`` to ``[-t, t]``, i.e. ``sgn(x) * min(|x|, t)``."""
    if np.any(np.asarray(t) < 0):
        raise ValueError("truncation level must be non-negative")
    out = np.clip(x, -np.asarray(t), t)
    return float(out) if np.ndim(out) == 0 else out


def block_means(holdout_column, scheme: BlockScheme) -> np.ndarray:
    return scheme.blocks(holdout_column).mean(axis=1)


def block_variances(holdout_column, scheme: BlockScheme) -> np.ndarray:
    # pairs (i, i + ell/2) inside each block; half the squared difference
    # is unbiased for the variance
    blk = scheme.blocks(holdout_column)
    half = scheme.ell_n // 2
    d = blk[:, :half] - blk[:, half:]
    return (0.5 * d * d).mean(axis=1)


def mom_mean(holdout_column, scheme: BlockScheme):
    """Median of the block means (midpoint of the middle pair when ``b_n`` is even)."""
    return np.median(block_means(holdout_column, scheme), axis=0)


def mom_variance(holdout_column, scheme: BlockScheme):
    return np.median(block_variances(holdout_column, scheme), axis=0)


def fit_estimates(data: DataMatrix, scheme: BlockScheme, tau: float) -> MomEstimates:
    """Median-of-means centres and variances from the hold-out rows.

    Raises
    ------
    DegenerateVarianceError
        If any coordinate has a zero variance estimate; truncation at zero and
        division by ``sigma**tau`` would both be meaningless.
    """
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    if scheme.m_n != data.m_n:
        raise ValueError(f"block scheme covers {scheme.m_n} rows, hold-out has {data.m_n}")
    hold = data.holdout
    means = np.atleast_1d(mom_mean(hold, scheme))
    variances = np.atleast_1d(mom_variance(hold, scheme))
    bad = np.flatnonzero(variances <= 0.0)
    if bad.size:
        raise DegenerateVarianceError(bad)
    sigmas = np.sqrt(variances)
    root_n = math.sqrt(data.n)
    return MomEstimates(
        means=means,
        variances=variances,
        trunc_levels=root_n * sigmas,
        tau=float(tau),
        weights=1.0 / (sigmas**tau * root_n),
        n=data.n,
    )


def coordinate_stat(main_column, center, t_hat, sigma_hat, tau):
    """Partially standardised truncated sum ``g(center)`` for one coordinate."""
    if sigma_hat <= 0:
        raise ValueError("sigma_hat must be positive")
    x = np.asarray(main_column, dtype=float)
    s = np.clip(x - center, -t_hat, t_hat).sum()
    return float(s / (math.sqrt(x.shape[0]) * sigma_hat**tau))


def coordinate_stats(data: DataMatrix, centers, est: MomEstimates) -> np.ndarray:
    """``g_j(centers[j])`` for every coordinate, evaluated on the main rows."""
    centers = np.broadcast_to(np.asarray(centers, dtype=float), (data.p,))
    if est.p != data.p:
        raise ValueError(f"estimates have p={est.p}, data have p={data.p}")
    sums = kernels.truncated_column_sums(data.main, centers, est.trunc_levels)
    return sums * est.weights


def max_min_statistic(data: DataMatrix, mu, est: MomEstimates) -> tuple[float, float]:
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (data.p,):
        raise ValueError(f"mu must have shape ({data.p},), got {mu.shape}")
    g = coordinate_stats(data, mu, est)
    return float(g.max()), float(g.min())
