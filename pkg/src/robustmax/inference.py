"""Simultaneous confidence intervals and zero-exclusion tests."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bootstrap import BootstrapDistribution
from .core import DataMatrix, MomEstimates, coordinate_stats


@dataclass(frozen=True)
class Interval:
    """Closed interval; endpoints may be infinite. ``lo > hi`` means empty."""

    lo: float
    hi: float

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    @property
    def width(self) -> float:
        return 0.0 if self.is_empty else self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


EMPTY = Interval(math.inf, -math.inf)


@dataclass(frozen=True)
class ConfidenceBand:
    lo: np.ndarray
    hi: np.ndarray
    alpha: float
    q_minus: float
    q_plus: float

    def __len__(self):
        return self.lo.shape[0]

    def __getitem__(self, j) -> Interval:
        if self.lo[j] > self.hi[j]:
            return EMPTY
        return Interval(float(self.lo[j]), float(self.hi[j]))

    @property
    def intervals(self) -> list[Interval]:
        return [self[j] for j in range(len(self))]

    @property
    def empty(self) -> np.ndarray:
        return self.lo > self.hi

    @property
    def widths(self) -> np.ndarray:
        return np.where(self.empty, 0.0, self.hi - self.lo)

    def contains(self, x) -> np.ndarray:
        """Coordinate-wise membership of the vector ``x``."""
        x = np.asarray(x, dtype=float)
        return (self.lo <= x) & (x <= self.hi)


@dataclass(frozen=True)
class TestOutcome:
    reject: bool
    p_value: float
    t_max: float
    t_min: float
    offenders: tuple
    alpha: float

    __test__ = False  # not a pytest class


def invert_interval(main_column, t_hat, sigma_hat, tau, q_minus, q_plus) -> Interval:
    """Exact ``{x : q_minus <= g(x) <= q_plus}`` for one coordinate."""
    if q_minus > q_plus:
        raise ValueError(f"q_minus={q_minus} exceeds q_plus={q_plus}")
    if sigma_hat <= 0:
        raise ValueError("sigma_hat must be positive")
    x = np.asarray(main_column, dtype=float)
    scale = 1.0 / (math.sqrt(x.shape[0]) * sigma_hat**tau)
    lo, hi = kernels.invert_columns(x[:, None], [t_hat], [scale], q_minus, q_plus)
    if lo[0] > hi[0]:
        return EMPTY
    return Interval(float(lo[0]), float(hi[0]))


def band_from_quantiles(
    data: DataMatrix, est: MomEstimates, q_minus: float, q_plus: float, alpha: float = math.nan
) -> ConfidenceBand:
    if q_minus > q_plus:
        raise ValueError(f"q_minus={q_minus} exceeds q_plus={q_plus}")
    lo, hi = kernels.invert_columns(data.main, est.trunc_levels, est.weights, q_minus, q_plus)
    return ConfidenceBand(lo, hi, alpha, q_minus, q_plus)


def simultaneous_cis(
    data: DataMatrix, est: MomEstimates, boot: BootstrapDistribution, alpha: float
) -> ConfidenceBand:
    q_minus, q_plus = boot.quantiles(alpha)
    return band_from_quantiles(data, est, q_minus, q_plus, alpha)


def p_value(t_max: float, t_min: float, boot: BootstrapDistribution) -> float:
    """Equal-tailed two-sided bootstrap p-value with the add-one convention."""
    B = boot.B
    if B == 0:
        raise ValueError("empty bootstrap distribution")
    n_hi = B - np.searchsorted(boot.sorted_max, t_max, side="left")
    n_lo = np.searchsorted(boot.sorted_min, t_min, side="right")
    p_plus = (1 + n_hi) / (B + 1)
    p_minus = (1 + n_lo) / (B + 1)
    return float(min(1.0, 2.0 * min(p_plus, p_minus)))


def zero_exclusion_test(
    data: DataMatrix,
    est: MomEstimates,
    boot: BootstrapDistribution,
    alpha: float,
    coords=None,
) -> TestOutcome:
    """Reject when some interval in ``coords`` (default: all) excludes 0.

    Checked through ``g_j(0)`` against the quantile sandwich, which is
    equivalent to inverting every interval.
    """
    coords = np.arange(data.p) if coords is None else np.asarray(coords, dtype=int)
    if coords.size == 0:
        raise ValueError("coords must be non-empty")
    q_minus, q_plus = boot.quantiles(alpha)
    g0 = coordinate_stats(data, 0.0, est)[coords]
    bad = (g0 > q_plus) | (g0 < q_minus)
    t_max, t_min = float(g0.max()), float(g0.min())
    return TestOutcome(
        reject=bool(bad.any()),
        p_value=p_value(t_max, t_min, boot),
        t_max=t_max,
        t_min=t_min,
        offenders=tuple(int(j) for j in coords[bad]),
        alpha=float(alpha),
    )
