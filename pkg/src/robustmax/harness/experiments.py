"""Monte Carlo drivers: coverage table, drift power curve, bootstrap KS probe.

Trial ``i`` draws everything from ``RngStream(seed).child(<experiment>, i)``
and results are aggregated in trial order, so output is identical for any
thread count.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..bootstrap import run_bootstrap
from ..core import BlockScheme, DataMatrix, DegenerateVarianceError, fit_estimates, max_min_statistic
from ..datagen import SAMPLERS, CorrelationSpec, CovarianceModel
from ..functional import GbmSpec, functional_zero_test, sample_gbm_paths
from ..inference import simultaneous_cis
from ..streams import RngStream
from .config import ExperimentConfig, PowerConfig
from .diagnostics import kolmogorov_distance

log = logging.getLogger(__name__)


def parallel_map(fn, items, threads: int = 1):
    items = list(items)
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(fn, items))


def covariance_for(cfg: ExperimentConfig) -> CovarianceModel:
    return CovarianceModel.decaying(CorrelationSpec(cfg.correlation, cfg.p))


@dataclass
class CoverageRow:
    alpha: float
    coverage: float
    mean_median_width: float
    trials: int
    failures: int
    infinite_intervals: int

    HEADER = (
        "alpha",
        "coverage",
        "mean_median_width",
        "trials",
        "failures",
        "infinite_intervals",
    )

    def as_row(self):
        return (
            self.alpha,
            self.coverage,
            self.mean_median_width,
            self.trials,
            self.failures,
            self.infinite_intervals,
        )


def _coverage_trial(cfg: ExperimentConfig, cov: CovarianceModel, i: int):
    stream = RngStream(cfg.seed).child("coverage", i)
    X = SAMPLERS[cfg.distribution](stream.child("data"), cfg.n_total, cov)
    data = DataMatrix.split(X, cfg.m_n)
    try:
        est = fit_estimates(data, BlockScheme.for_holdout(cfg.m_n, cfg.ell_n), cfg.tau)
    except DegenerateVarianceError:
        return None
    boot = run_bootstrap(data, est, cfg.B, stream.child("bootstrap"))
    out = []
    for alpha in cfg.alphas:
        band = simultaneous_cis(data, est, boot, alpha)
        w = band.widths
        finite = np.isfinite(w)
        med = float(np.median(w[finite])) if finite.any() else np.nan
        out.append((bool(band.contains(np.zeros(cfg.p)).all()), med, int((~finite).sum())))
    return out


def run_coverage_experiment(cfg: ExperimentConfig, threads: int = 1) -> list[CoverageRow]:
    """Simultaneous coverage of the true mean (zero) and average median width.

    Trials whose hold-out variance estimate degenerates count as failures and
    as non-covering. Infinite-width intervals are excluded from the median
    width and counted in ``infinite_intervals``.
    """
    cfg.validate()
    cov = covariance_for(cfg)
    cov.sqrt_sigma  # noqa: B018 - factor once, before threads share it
    results = parallel_map(lambda i: _coverage_trial(cfg, cov, i), range(cfg.trials), threads)
    failures = sum(r is None for r in results)
    rows = []
    for k, alpha in enumerate(cfg.alphas):
        ok = [r[k] for r in results if r is not None]
        covered = sum(c for c, _, _ in ok)
        widths = [m for _, m, _ in ok if np.isfinite(m)]
        rows.append(
            CoverageRow(
                alpha=float(alpha),
                coverage=covered / cfg.trials,
                mean_median_width=float(np.mean(widths)) if widths else float("nan"),
                trials=cfg.trials,
                failures=failures,
                infinite_intervals=sum(n for _, _, n in ok),
            )
        )
    return rows


def _power_trial(cfg: PowerConfig, spec: GbmSpec, hk: int, i: int):
    stream = RngStream(cfg.seed).child("power", hk, i)
    paths = sample_gbm_paths(stream.child("paths"), spec, cfg.n_total)
    centred = type(paths)(paths.grid, paths.values - 1.0)
    try:
        outcome = functional_zero_test(
            centred,
            cfg.p,
            1,
            cfg.alpha,
            cfg.B,
            stream.child("bootstrap"),
            BlockScheme.for_holdout(cfg.m_n, cfg.ell_n),
            cfg.tau,
        )
    except DegenerateVarianceError:
        return None
    return outcome.reject


def run_power_curve(cfg: PowerConfig, threads: int = 1, mu_curve=None, varsigma0=None):
    """Rejection rate of the zero-drift test at each ``h`` in the grid.

    Returns a list of ``(h, rejection_rate, rejections, failures)``; a trial
    with a degenerate variance estimate counts as a non-rejection failure.
    """
    cfg.validate()
    mu = cfg.mu if mu_curve is None else mu_curve
    vs = cfg.varsigma0 if varsigma0 is None else varsigma0
    base = GbmSpec(0.0, mu, vs, cfg.K)
    out = []
    for hk, h in enumerate(cfg.h_grid):
        spec = base.with_h(h)
        res = parallel_map(lambda i: _power_trial(cfg, spec, hk, i), range(cfg.trials), threads)
        rejections = sum(bool(r) for r in res)
        failures = sum(r is None for r in res)
        out.append((float(h), rejections / cfg.trials, rejections, failures))
        log.info("h=%g rejection rate %.3f", h, rejections / cfg.trials)
    return out


def max_statistic_draws(cfg: ExperimentConfig, n_main: int, draws: int, threads: int = 1):
    """Monte Carlo draws of the max statistic at the true mean (zero)."""
    cov = covariance_for(cfg)
    cov.sqrt_sigma  # noqa: B018
    scheme = BlockScheme.for_holdout(cfg.m_n, cfg.ell_n)

    def one(i):
        stream = RngStream(cfg.seed).child("ks-mc", i)
        X = SAMPLERS[cfg.distribution](stream, n_main + cfg.m_n, cov)
        data = DataMatrix(X, n_main, cfg.m_n)
        est = fit_estimates(data, scheme, cfg.tau)
        return max_min_statistic(data, np.zeros(cfg.p), est)[0]

    return np.array(parallel_map(one, range(draws), threads))


def run_ks_probe(
    cfg: ExperimentConfig, n_main: int = 500, mc_draws: int = 2000, boot_draws: int = 2000, threads: int = 1
) -> dict:
    """Kolmogorov distance between the max statistic and one bootstrap law."""
    cfg.validate()
    mc = max_statistic_draws(cfg, n_main, mc_draws, threads)
    stream = RngStream(cfg.seed).child("ks-boot")
    X = SAMPLERS[cfg.distribution](stream.child("data"), n_main + cfg.m_n, covariance_for(cfg))
    data = DataMatrix(X, n_main, cfg.m_n)
    est = fit_estimates(data, BlockScheme.for_holdout(cfg.m_n, cfg.ell_n), cfg.tau)
    boot = run_bootstrap(data, est, boot_draws, stream.child("bootstrap"), threads=threads)
    return {
        "ks": kolmogorov_distance(mc, boot.sorted_max),
        "mc_draws": mc,
        "boot_draws": boot.sorted_max,
    }
