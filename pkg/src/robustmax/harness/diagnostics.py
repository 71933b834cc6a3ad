"""Variance-decay profile and two-sample Kolmogorov distance."""
from __future__ import annotations

import numpy as np

from ..core import MomEstimates


def variance_decay_diagnostic(est: MomEstimates) -> tuple[np.ndarray, float]:
    """Sorted standard deviations and the fitted decay exponent.

    The exponent is the least-squares slope of ``-log sigma_(j)`` on
    ``log j``, so ``sigma_(j) = j**-beta`` gives back ``beta``.
    """
    sig = np.sort(est.sigmas)[::-1]
    if sig.size < 2:
        raise ValueError("need at least two coordinates")
    if np.any(sig <= 0):
        raise ValueError("all standard deviations must be positive")
    x = np.log(np.arange(1, sig.size + 1))
    y = -np.log(sig)
    beta = np.polyfit(x, y, 1)[0]
    return sig, float(beta)


def kolmogorov_distance(samples_a, samples_b) -> float:
    """``sup_s |F_a(s) - F_b(s)|`` for the two empirical CDFs."""
    a = np.sort(np.asarray(samples_a, dtype=float).ravel())
    b = np.sort(np.asarray(samples_b, dtype=float).ravel())
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    pts = np.concatenate((a, b))
    fa = np.searchsorted(a, pts, side="right") / a.size
    fb = np.searchsorted(b, pts, side="right") / b.size
    return float(np.abs(fa - fb).max())
