"""Synthetic asynchronous tick data and Monte Carlo experiments.

Observation times of the two assets are independent Poisson processes
started at 0. The efficient log-prices are correlated Brownian motions with
constant volatilities, simulated exactly on the union of both time grids,
and each series is observed with i.i.d. Gaussian noise at its own times.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigError, DegenerateConfig
from .estimators import EstimatorKind, TuningPolicy, run_estimators
from .sync import TickSeries, synchronize

__all__ = [
    "SimConfig",
    "EstimatorSummary",
    "McResult",
    "poisson_times",
    "simulate_on_grids",
    "simulate_pair",
    "expected_sync_count",
    "replication_rng",
    "run_experiment",
]

DESK_THETA = 1.0 / 3000.0
FULL_THETA = 1.0 / 30000.0


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one Monte Carlo experiment.

    Defaults are the desk-scale setting: about 3000 ticks per asset on a
    unit horizon, roughly 2000 synchronized points, 200 replications.
    """

    horizon: float = 1.0
    theta_x: float = DESK_THETA
    theta_y: float = DESK_THETA
    rho: float = 0.5
    sigma_x: float = 1.0
    sigma_y: float = 1.0
    eta_x2: float = 0.01
    eta_y2: float = 0.01
    seed: int = 0
    replications: int = 200

    def __post_init__(self):
        if not self.horizon > 0:
            raise ConfigError(f"horizon must be > 0, got {self.horizon}")
        if not (self.theta_x > 0 and self.theta_y > 0):
            raise ConfigError("mean inter-arrival times must be > 0")
        if not abs(self.rho) <= 1:
            raise ConfigError(f"rho must lie in [-1, 1], got {self.rho}")
        for name in ("sigma_x", "sigma_y", "eta_x2", "eta_y2"):
            if not getattr(self, name) >= 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        if int(self.replications) != self.replications or self.replications < 1:
            raise ConfigError(f"replications must be a positive integer, got {self.replications}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    @classmethod
    def full_scale(cls, **overrides) -> "SimConfig":
        """Full-size setting: ~30000 ticks per asset, 1000 replications, high noise."""
        base = dict(
            theta_x=FULL_THETA,
            theta_y=FULL_THETA,
            rho=0.5,
            eta_x2=math.sqrt(0.1),
            eta_y2=math.sqrt(0.1),
            replications=1000,
        )
        base.update(overrides)
        return cls(**base)

    @property
    def true_cov(self) -> float:
        return self.rho * self.sigma_x * self.sigma_y * self.horizon


def poisson_times(theta: float, horizon: float, rng: np.random.Generator) -> np.ndarray:
    """Arrival times on ``[0, horizon]`` with Exp(mean ``theta``) gaps, starting at 0."""
    if not theta > 0:
        raise ConfigError(f"theta must be > 0, got {theta}")
    if theta >= 10.0 * horizon:
        raise DegenerateConfig(
            f"theta={theta} is at least 10x the horizon {horizon}; check the time unit"
        )
    mean = horizon / theta
    chunk = int(mean + 6.0 * math.sqrt(mean)) + 16
    times = np.cumsum(rng.exponential(theta, chunk))
    while times[-1] <= horizon:
        more = times[-1] + np.cumsum(rng.exponential(theta, chunk))
        times = np.concatenate([times, more])
    return np.concatenate([[0.0], times[times <= horizon]])


def simulate_on_grids(times_x, times_y, cfg: SimConfig, rng: np.random.Generator):
    """Noisy observations of one correlated Brownian path at the given times.

    Both efficient prices are driven on the union grid, ``dY`` being
    ``rho * dB_X + sqrt(1 - rho^2) * dB`` scaled by ``sigma_y``, and read off
    at each asset's own times before the noise is added.
    """
    times_x = np.asarray(times_x, dtype=float)
    times_y = np.asarray(times_y, dtype=float)
    union = np.union1d(times_x, times_y)
    root_dt = np.sqrt(np.diff(union))
    z = rng.standard_normal((2, root_dt.size))
    db_x = root_dt * z[0]
    db_y = cfg.rho * db_x + math.sqrt(max(1.0 - cfg.rho**2, 0.0)) * root_dt * z[1]
    path_x = np.concatenate([[0.0], np.cumsum(cfg.sigma_x * db_x)])
    path_y = np.concatenate([[0.0], np.cumsum(cfg.sigma_y * db_y)])

    obs_x = path_x[np.searchsorted(union, times_x)]
    obs_y = path_y[np.searchsorted(union, times_y)]
    obs_x = obs_x + math.sqrt(cfg.eta_x2) * rng.standard_normal(obs_x.size)
    obs_y = obs_y + math.sqrt(cfg.eta_y2) * rng.standard_normal(obs_y.size)
    return TickSeries(times_x, obs_x), TickSeries(times_y, obs_y)


def simulate_pair(cfg: SimConfig, rng: np.random.Generator):
    """Draw both Poisson grids and noisy prices.

    Returns
    -------
    x, y : TickSeries
    true_cov : float
        Integrated covariance ``rho * sigma_x * sigma_y * horizon``.
    """
    tx = poisson_times(cfg.theta_x, cfg.horizon, rng)
    ty = poisson_times(cfg.theta_y, cfg.horizon, rng)
    x, y = simulate_on_grids(tx, ty, cfg, rng)
    return x, y, cfg.true_cov


def expected_sync_count(theta_x: float, theta_y: float, horizon: float = 1.0) -> float:
    """Mean length of the joint grid for two independent Poisson samplings.

    Each synchronized step waits for the later of the two next arrivals, whose
    mean is ``theta_x + theta_y - theta_x theta_y / (theta_x + theta_y)``.
    """
    if not (theta_x > 0 and theta_y > 0):
        raise ConfigError("mean inter-arrival times must be > 0")
    step = theta_x + theta_y - theta_x * theta_y / (theta_x + theta_y)
    return horizon / step


def replication_rng(seed: int, rep: int) -> np.random.Generator:
    """Independent stream for replication ``rep``, identical in serial and parallel runs."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(rep),)))


@dataclass(frozen=True)
class EstimatorSummary:
    estimator: str
    mean: float
    bias: float
    variance: float
    mean_tuning: float | None
    mean_nsync: float

    @property
    def rmse(self) -> float:
        return math.sqrt(self.bias**2 + self.variance)

    def as_row(self) -> dict:
        return {
            "estimator": self.estimator,
            "mean": self.mean,
            "bias": self.bias,
            "variance": self.variance,
            "rmse": self.rmse,
            "mean_tuning": self.mean_tuning,
            "mean_nsync": self.mean_nsync,
        }


@dataclass(frozen=True, eq=False)
class McResult:
    """Replication-level records of a Monte Carlo run.

    ``estimates`` and ``tuning`` have one column per estimator; the tuning
    column of the HY estimator is NaN. Summary statistics use the population
    variance so that ``rmse**2 == bias**2 + variance``.
    """

    config: SimConfig
    estimators: tuple[str, ...]
    estimates: np.ndarray
    tuning: np.ndarray
    n_sync: np.ndarray
    policy: TuningPolicy = field(default_factory=TuningPolicy)

    @property
    def true_cov(self) -> float:
        return self.config.true_cov

    def column(self, estimator: str) -> int:
        key = EstimatorKind.parse(estimator).value
        try:
            return self.estimators.index(key)
        except ValueError:
            raise KeyError(f"estimator {key!r} not in this result") from None

    def summary(self, estimator: str) -> EstimatorSummary:
        j = self.column(estimator)
        est = self.estimates[:, j]
        mean = math.fsum(est) / est.size
        dev = est - mean
        tun = self.tuning[:, j]
        return EstimatorSummary(
            estimator=self.estimators[j],
            mean=mean,
            bias=mean - self.true_cov,
            variance=math.fsum(dev * dev) / est.size,
            mean_tuning=None if np.isnan(tun).all() else math.fsum(tun) / tun.size,
            mean_nsync=math.fsum(self.n_sync) / self.n_sync.size,
        )

    def summaries(self) -> list[EstimatorSummary]:
        return [self.summary(e) for e in self.estimators]

    def rmse(self, estimator: str) -> float:
        return self.summary(estimator).rmse

    def records(self):
        """Yield one flat dict per replication and estimator."""
        for r in range(self.estimates.shape[0]):
            for j, name in enumerate(self.estimators):
                t = self.tuning[r, j]
                yield {
                    "replication": r,
                    "estimator": name,
                    "estimate": float(self.estimates[r, j]),
                    "n_sync": int(self.n_sync[r]),
                    "tuning": None if np.isnan(t) else int(t),
                }

    def config_dict(self) -> dict:
        return asdict(self.config)


def _one_replication(args):
    cfg, kinds, policy, rep = args
    rng = replication_rng(cfg.seed, rep)
    x, y, _ = simulate_pair(cfg, rng)
    grid = synchronize(x, y)
    reports = run_estimators(grid, x, y, kinds, policy, eta2=(cfg.eta_x2, cfg.eta_y2))
    est = [r.estimate for r in reports]
    tun = [np.nan if r.tuning is None else r.tuning for r in reports]
    return est, tun, grid.n_sync


def run_experiment(
    cfg: SimConfig,
    estimators=("hy", "sub", "multi"),
    policy: TuningPolicy = TuningPolicy("oracle"),
    workers: int | None = None,
) -> McResult:
    """Run ``cfg.replications`` independent simulate-synchronize-estimate rounds.

    Parameters
    ----------
    cfg : SimConfig
    estimators : sequence of str
        Any of ``"hy"``, ``"sub"``, ``"multi"``.
    policy : TuningPolicy
        ``oracle`` feeds the true noise variances into the tuning rules.
    workers : int, optional
        Process count; results do not depend on it.
    """
    kinds = tuple(EstimatorKind.parse(e).value for e in estimators)
    if not kinds:
        raise ConfigError("select at least one estimator")
    jobs = [(cfg, kinds, policy, r) for r in range(cfg.replications)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_one_replication, jobs, chunksize=8))
    else:
        out = [_one_replication(j) for j in jobs]

    estimates = np.array([o[0] for o in out], dtype=float)
    tuning = np.array([o[1] for o in out], dtype=float)
    n_sync = np.array([o[2] for o in out], dtype=np.int64)
    for a in (estimates, tuning, n_sync):
        a.setflags(write=False)
    return McResult(cfg, kinds, estimates, tuning, n_sync, policy)
