"""Robust max-statistic bootstrap inference for heavy-tailed, high-dimensional data."""
from ._accel import BACKEND
from .bootstrap import BootstrapDistribution, bootstrap_draw, empirical_quantile, run_bootstrap
from .core import (
    BlockScheme,
    DataMatrix,
    DegenerateVarianceError,
    MomEstimates,
    block_means,
    coordinate_stat,
    coordinate_stats,
    fit_estimates,
    max_min_statistic,
    mom_mean,
    mom_variance,
    truncate,
)
from .inference import (
    EMPTY,
    ConfidenceBand,
    Interval,
    TestOutcome,
    invert_interval,
    p_value,
    simultaneous_cis,
    zero_exclusion_test,
)
from .streams import RngStream

__version__ = "0.1.0"
