"""Integrated covariance estimation from noisy, asynchronously observed prices.

The library pairs two tick series on a joint grid (:func:`synchronize`) and
offers the Hayashi-Yoshida, subsample and multi-scale estimators on it, a
Monte Carlo harness for Poisson-sampled correlated Brownian motions, and the
Fisher-information computations for the synchronous Gaussian model.
"""

from .errors import (
    ConfigError,
    DegenerateConfig,
    EmptySeries,
    GridMismatch,
    HfcovError,
    IndexOutOfRange,
    NegativeVariance,
    NonMonotoneTimes,
    ParameterOutOfRange,
    ParseError,
    TuningOutOfRange,
    UnequalNoise,
)
from .estimators import (
    EstimateReport,
    EstimatorKind,
    TuningPolicy,
    WeightVector,
    estimate_pair,
    hy_estimate,
    multiscale_estimate,
    multiscale_weights,
    optimal_k,
    optimal_m,
    plugin_noise_variance,
    run_estimators,
    subsample_estimate,
)
from .io import ingest_ticks, write_ticks
from .lan import (
    LanProfile,
    convergence_table,
    covariance_matrix,
    eigenvalues_equal_noise,
    eigenvalues_general,
    fisher_info_bounds,
    fisher_info_equal,
    gamma_coefficients,
    gamma_sum,
)
from .simulation import (
    McResult,
    SimConfig,
    expected_sync_count,
    poisson_times,
    run_experiment,
    simulate_on_grids,
    simulate_pair,
)
from .sync import SyncGrid, TickSeries, grid_increments, synchronize

__version__ = "0.1.0"
