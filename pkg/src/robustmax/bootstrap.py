"""Gaussian multiplier bootstrap of the robust max and min statistics."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import DataMatrix, MomEstimates
from .streams import RngStream, as_stream


@dataclass(frozen=True)
class BootstrapDistribution:
    sorted_max: np.ndarray
    sorted_min: np.ndarray
    seed: int

    @property
    def B(self) -> int:
        return self.sorted_max.shape[0]

    def quantiles(self, alpha: float) -> tuple[float, float]:
        """``(q_minus, q_plus)`` at levels ``alpha/2`` and ``1 - alpha/2``."""
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        return (
            empirical_quantile(self.sorted_min, alpha / 2),
            empirical_quantile(self.sorted_max, 1 - alpha / 2),
        )


def _scores(data: DataMatrix, est: MomEstimates) -> np.ndarray:
    if est.p != data.p:
        raise ValueError(f"estimates have p={est.p}, data have p={data.p}")
    return kernels.centered_scores(data.main, est.means, est.trunc_levels)


def bootstrap_draw(data: DataMatrix, est: MomEstimates, multipliers) -> tuple[float, float]:
    """One bootstrap replicate of (max, min) for the given multipliers."""
    xi = np.asarray(multipliers, dtype=float)
    if xi.shape != (data.n,):
        raise ValueError(f"need {data.n} multipliers, got shape {xi.shape}")
    hi, lo = kernels.bootstrap_extremes(xi[None, :], _scores(data, est), est.weights)
    return float(hi[0]), float(lo[0])


def multiplier_matrix(stream: RngStream, n: int, draws: range, threads: int = 1) -> np.ndarray:
    """Rows of i.i.d. N(0, 1) multipliers; row ``b`` comes from ``stream.child(b)``."""

    def row(b):
        return stream.child(b).normal(n)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(row, draws))
    else:
        rows = [row(b) for b in draws]
    return np.array(rows).reshape(len(draws), n)


def run_bootstrap(
    data: DataMatrix,
    est: MomEstimates,
    B: int,
    seed,
    threads: int = 1,
    chunk: int = 1000,
) -> BootstrapDistribution:
    """``B`` multiplier-bootstrap replicates of the max and min statistics.

    ``seed`` is an integer or an :class:`RngStream`. Draw ``b`` always uses
    the child stream labelled ``b``, so the result is bit-identical for any
    ``threads``. Multipliers are reduced ``chunk`` rows at a time through one
    matrix product; a different ``chunk`` can change the last bits (BLAS
    blocking), never more.
    """
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    stream = as_stream(seed)
    Z = _scores(data, est)
    hi = np.empty(B)
    lo = np.empty(B)
    for start in range(0, B, chunk):
        draws = range(start, min(B, start + chunk))
        xi = multiplier_matrix(stream, data.n, draws, threads)
        hi[draws.start : draws.stop], lo[draws.start : draws.stop] = kernels.bootstrap_extremes(
            xi, Z, est.weights
        )
    return BootstrapDistribution(np.sort(hi), np.sort(lo), stream.seed)


def empirical_quantile(sorted_values, gamma: float) -> float:
    """The ``ceil(gamma * B)``-th order statistic (1-indexed) of sorted values."""
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    v = np.asarray(sorted_values)
    if v.size == 0:
        raise ValueError("empty bootstrap sample")
    # guard against gamma * B landing a hair above an integer (0.95 * 500)
    k = math.ceil(gamma * v.size - 1e-9)
    return float(v[max(k, 1) - 1])
