"""Covariance estimators on a joint grid.

All three estimators are built from the lagged grid products

    P_j(k) = (x[g[j]] - x[l[j-k]]) * (y[gamma[j]] - y[lam[j-k]]),  j = k..N,

with the Hayashi-Yoshida sum using the set-wise products (lag 0), the
subsample estimator averaging lag-K products, and the multi-scale estimator
combining lags 1..M with weights that cancel the leading noise term.
Sums are accumulated with ``math.fsum`` so results are independent of
summation order and reproducible bit-for-bit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    EmptySeries,
    GridMismatch,
    NegativeVariance,
    TuningOutOfRange,
)
from .sync import SyncGrid, TickSeries, synchronize

__all__ = [
    "EstimatorKind",
    "WeightVector",
    "EstimateReport",
    "TuningPolicy",
    "hy_estimate",
    "subsample_estimate",
    "multiscale_weights",
    "multiscale_estimate",
    "optimal_k",
    "optimal_m",
    "plugin_noise_variance",
    "run_estimators",
    "estimate_pair",
]

# (36 * 35 / 52) in the multi-scale tuning constant
_MULTI_CONST = 36.0 * 35.0 / 52.0


class EstimatorKind(str, enum.Enum):
    HY = "hy"
    SUBSAMPLE = "sub"
    MULTISCALE = "multi"

    @classmethod
    def parse(cls, name: str) -> "EstimatorKind":
        aliases = {
            "hy": cls.HY,
            "sub": cls.SUBSAMPLE,
            "subsample": cls.SUBSAMPLE,
            "multi": cls.MULTISCALE,
            "multiscale": cls.MULTISCALE,
        }
        try:
            return aliases[name.strip().lower()]
        except KeyError:
            raise ConfigError(f"unknown estimator {name!r}") from None


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Multi-scale weights ``alpha_1..alpha_M``."""

    m_scales: int
    alpha: np.ndarray

    @property
    def total(self) -> float:
        return math.fsum(self.alpha)

    @property
    def harmonic_total(self) -> float:
        """Sum of ``alpha_i / i``; zero for noise-cancelling weights."""
        return math.fsum(self.alpha / np.arange(1, self.m_scales + 1))


@dataclass(frozen=True)
class EstimateReport:
    estimator_kind: EstimatorKind
    estimate: float
    n_sync: int
    tuning: int | None = None
    noise_variances_used: tuple[float, float] | None = None

    def __post_init__(self):
        kind = EstimatorKind(self.estimator_kind)
        object.__setattr__(self, "estimator_kind", kind)
        if kind is EstimatorKind.HY:
            if self.tuning is not None:
                raise ValueError("HY estimate carries no tuning parameter")
        else:
            lo = 2 if kind is EstimatorKind.MULTISCALE else 1
            if self.tuning is None or self.tuning < lo:
                raise ValueError(f"{kind.value} estimate needs tuning >= {lo}")

    def as_row(self) -> dict:
        eta = self.noise_variances_used
        return {
            "estimator": self.estimator_kind.value,
            "estimate": self.estimate,
            "n_sync": self.n_sync,
            "tuning": self.tuning,
            "eta2_x": None if eta is None else eta[0],
            "eta2_y": None if eta is None else eta[1],
        }


def _endpoint_values(grid: SyncGrid, x: TickSeries, y: TickSeries):
    if grid.g.max() > x.n or grid.l.max() > x.n:
        raise GridMismatch(f"grid references X index beyond {x.n}")
    if grid.gamma.max() > y.n or grid.lam.max() > y.n:
        raise GridMismatch(f"grid references Y index beyond {y.n}")
    xv, yv = x.values, y.values
    return xv[grid.g], xv[grid.l], yv[grid.gamma], yv[grid.lam]


def _lag_products(ends, lag: int) -> np.ndarray:
    xg, xl, yg, yl = ends
    if lag == 0:
        return (xg - xl) * (yg - yl)
    return (xg[lag:] - xl[:-lag]) * (yg[lag:] - yl[:-lag])


def hy_estimate(grid: SyncGrid, x: TickSeries, y: TickSeries) -> float:
    """Hayashi-Yoshida estimate as the realized covariance on the joint grid."""
    ends = _endpoint_values(grid, x, y)
    return math.fsum(_lag_products(ends, 0))


def _check_k(k, grid, name="K", lo=1):
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise TuningOutOfRange(f"{name} must be an integer, got {k!r}")
    if k < lo or k > grid.n_sync:
        raise TuningOutOfRange(
            f"{name}={k} outside [{lo}, n_sync={grid.n_sync}]"
        )


def subsample_estimate(grid: SyncGrid, x: TickSeries, y: TickSeries, K: int) -> float:
    """Subsample estimator averaging the lag-``K`` grid products.

    No boundary weights are applied: the sum runs over ``j = K..N`` and is
    divided by ``K``.
    """
    _check_k(K, grid)
    ends = _endpoint_values(grid, x, y)
    return math.fsum(_lag_products(ends, int(K))) / K


def multiscale_weights(M: int) -> WeightVector:
    """Noise-optimal weights ``12 i^2/(M^3 - M) - 6 i/((M - 1) M)``.

    These are the exact finite-``M`` solution, so ``sum(alpha) = 1`` and
    ``sum(alpha_i / i) = 0`` hold to rounding error for every ``M >= 2``.
    """
    if not isinstance(M, (int, np.integer)) or isinstance(M, bool) or M < 2:
        raise TuningOutOfRange(f"M must be an integer >= 2, got {M!r}")
    M = int(M)
    i = np.arange(1, M + 1, dtype=float)
    alpha = 12.0 * i * i / (M**3 - M) - 6.0 * i / ((M - 1) * M)
    alpha.setflags(write=False)
    return WeightVector(M, alpha)


def multiscale_estimate(grid: SyncGrid, x: TickSeries, y: TickSeries, M: int) -> float:
    """Multi-scale estimator ``sum_i alpha_i * subsample_estimate(K=i)``, i = 1..M."""
    _check_k(M, grid, name="M", lo=2)
    alpha = multiscale_weights(M).alpha
    ends = _endpoint_values(grid, x, y)
    lag_sums = [math.fsum(_lag_products(ends, i)) for i in range(1, int(M) + 1)]
    return math.fsum(a / i * s for i, (a, s) in enumerate(zip(alpha, lag_sums), start=1))


def _check_noise(eta_x2, eta_y2):
    if eta_x2 < 0 or eta_y2 < 0:
        raise NegativeVariance(f"noise variances must be >= 0, got ({eta_x2}, {eta_y2})")


def _round_half_away(v: float) -> int:
    return int(math.floor(v + 0.5)) if v >= 0 else -int(math.floor(-v + 0.5))


def optimal_k(n_sync: int, eta_x2: float, eta_y2: float) -> int:
    """Subsample count ``K = (3 eta_x^2 eta_y^2)^(1/3) N^(2/3)``, rounded, clamped to ``[1, N]``."""
    _check_noise(eta_x2, eta_y2)
    if n_sync < 1:
        raise TuningOutOfRange(f"n_sync must be >= 1, got {n_sync}")
    c = (3.0 * eta_x2 * eta_y2) ** (1.0 / 3.0)
    return min(max(_round_half_away(c * n_sync ** (2.0 / 3.0)), 1), n_sync)


def optimal_m(n_sync: int, eta_x2: float, eta_y2: float) -> int:
    """Scale count ``M = (36*35/52 eta_x^2 eta_y^2)^(1/4) N^(1/2)``, rounded, clamped to ``[2, N]``."""
    _check_noise(eta_x2, eta_y2)
    if n_sync < 2:
        raise TuningOutOfRange(f"multi-scale estimation needs n_sync >= 2, got {n_sync}")
    c = (_MULTI_CONST * eta_x2 * eta_y2) ** 0.25
    return min(max(_round_half_away(c * math.sqrt(n_sync)), 2), n_sync)


def plugin_noise_variance(series: TickSeries) -> float:
    """Noise variance guess ``sum(diff(values)^2) / (2 n)``.

    Consistent for the noise variance when microstructure noise dominates
    the efficient-price increments.
    """
    if len(series) < 2:
        raise EmptySeries("need at least 2 observations")
    d = np.diff(series.values)
    return math.fsum(d * d) / (2.0 * series.n)


@dataclass(frozen=True)
class TuningPolicy:
    """How K and M are chosen.

    ``oracle`` plugs known noise variances into :func:`optimal_k` /
    :func:`optimal_m`, ``plugin`` uses :func:`plugin_noise_variance` on each
    series, ``manual`` takes ``k`` and ``m`` as given.
    """

    kind: str = "oracle"
    k: int | None = None
    m: int | None = None

    def __post_init__(self):
        if self.kind not in ("oracle", "plugin", "manual"):
            raise ConfigError(f"unknown tuning policy {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "TuningPolicy":
        text = text.strip()
        if text.lower() in ("oracle", "plugin"):
            return cls(text.lower())
        k = m = None
        for part in text.split(","):
            key, sep, val = part.partition("=")
            key = key.strip().upper()
            if not sep or key not in ("K", "M"):
                raise ConfigError(
                    f"tuning must be oracle, plugin, K=<int> or M=<int>; got {text!r}"
                )
            try:
                v = int(val)
            except ValueError:
                raise ConfigError(f"{key} must be an integer, got {val.strip()!r}") from None
            if key == "K":
                k = v
            else:
                m = v
        return cls("manual", k=k, m=m)


def run_estimators(
    grid: SyncGrid,
    x: TickSeries,
    y: TickSeries,
    kinds,
    policy: TuningPolicy = TuningPolicy(),
    eta2: tuple[float, float] | None = None,
) -> list[EstimateReport]:
    """Evaluate the selected estimators on one grid under a tuning policy.

    ``eta2`` holds the true noise variances and is required for the
    ``oracle`` policy.
    """
    kinds = [EstimatorKind.parse(k) if isinstance(k, str) else EstimatorKind(k) for k in kinds]
    if policy.kind == "oracle":
        if eta2 is None:
            raise ConfigError("oracle tuning needs the true noise variances")
        noise = (float(eta2[0]), float(eta2[1]))
    elif policy.kind == "plugin":
        noise = (plugin_noise_variance(x), plugin_noise_variance(y))
    else:
        noise = None

    reports = []
    for kind in kinds:
        if kind is EstimatorKind.HY:
            reports.append(EstimateReport(kind, hy_estimate(grid, x, y), grid.n_sync))
            continue
        if kind is EstimatorKind.SUBSAMPLE:
            if noise is None:
                if policy.k is None:
                    raise ConfigError("manual tuning for the subsample estimator needs K=<int>")
                k = policy.k
            else:
                k = optimal_k(grid.n_sync, *noise)
            value = subsample_estimate(grid, x, y, k)
        else:
            if noise is None:
                if policy.m is None:
                    raise ConfigError("manual tuning for the multi-scale estimator needs M=<int>")
                k = policy.m
            else:
                k = optimal_m(grid.n_sync, *noise)
            value = multiscale_estimate(grid, x, y, k)
        reports.append(EstimateReport(kind, value, grid.n_sync, k, noise))
    return reports


def estimate_pair(x, y, kinds=("hy", "sub", "multi"), policy=TuningPolicy("plugin"), eta2=None):
    """Synchronize two series and run :func:`run_estimators`."""
    return run_estimators(synchronize(x, y), x, y, kinds, policy, eta2)
