"""Tick series and the joint grid of two asynchronously observed series.

The joint grid pairs the observations of X and Y into consecutive sets
``H^i`` (X-side) and ``G^i`` (Y-side), i = 0..N, such that the product of the
X-increment accumulated over ``H^i`` and the Y-increment accumulated over
``G^i`` picks up exactly the overlapping interval pairs of the two series.
Sets are stored through four index arrays:

* ``g[i]`` -- greatest X index in ``H^i``
* ``l[i]`` -- X index preceding the least element of ``H^i`` (``l[0] = 0``)
* ``gamma[i]``, ``lam[i]`` -- the same for ``G^i`` on the Y side

so the increment over ``H^i`` telescopes to ``x[g[i]] - x[l[i]]``.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySeries, IndexOutOfRange, NonMonotoneTimes

__all__ = ["TickSeries", "SyncGrid", "synchronize", "grid_increments"]


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TickSeries:
    """Observation times and noisy log-prices of one asset.

    Parameters
    ----------
    times : array_like
        Strictly increasing, finite observation times.
    values : array_like
        Log-prices, same length as ``times``.
    horizon : float, optional
        If given, every time must lie in ``[0, horizon]``.
    """

    times: np.ndarray
    values: np.ndarray
    horizon: float | None = None

    def __post_init__(self):
        times = _frozen(self.times, float)
        values = _frozen(self.values, float)
        if times.ndim != 1 or values.ndim != 1:
            raise ValueError("times and values must be one-dimensional")
        if times.shape != values.shape:
            raise ValueError(
                f"times and values differ in length ({times.size} vs {values.size})"
            )
        if times.size < 2:
            raise EmptySeries(f"need at least 2 observations, got {times.size}")
        if not np.all(np.isfinite(times)):
            raise ValueError("times must be finite")
        bad = np.flatnonzero(np.diff(times) <= 0)
        if bad.size:
            k = int(bad[0]) + 1
            raise NonMonotoneTimes(
                f"times not strictly increasing at index {k} "
                f"({times[k - 1]!r} -> {times[k]!r})"
            )
        if self.horizon is not None and (times[0] < 0 or times[-1] > self.horizon):
            raise ValueError(f"times fall outside [0, {self.horizon}]")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.times.size

    @property
    def n(self) -> int:
        """Index of the last observation."""
        return self.times.size - 1


@dataclass(frozen=True, eq=False)
class SyncGrid:
    g: np.ndarray
    l: np.ndarray
    gamma: np.ndarray
    lam: np.ndarray
    n_sync: int = field(init=False)

    def __post_init__(self):
        arrays = [_frozen(a, np.int64) for a in (self.g, self.l, self.gamma, self.lam)]
        if len({a.size for a in arrays}) != 1:
            raise ValueError("index arrays must have equal length")
        for name, a in zip(("g", "l", "gamma", "lam"), arrays):
            object.__setattr__(self, name, a)
        object.__setattr__(self, "n_sync", arrays[0].size - 1)

    def x_set(self, i: int) -> range:
        """X observation indices of ``H^i`` (empty for a trailing boundary set)."""
        return range(0 if i == 0 else int(self.l[i]) + 1, int(self.g[i]) + 1)

    def y_set(self, i: int) -> range:
        return range(0 if i == 0 else int(self.lam[i]) + 1, int(self.gamma[i]) + 1)

    def __eq__(self, other):
        if not isinstance(other, SyncGrid):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, k), getattr(other, k))
            for k in ("g", "l", "gamma", "lam")
        )

    __hash__ = None


def synchronize(x: TickSeries, y: TickSeries) -> SyncGrid:
    """Build the joint grid of two tick series.

    Each step starts from the first unconsumed observations ``t_q`` and
    ``tau_r``. If ``t_q < tau_r`` the X-set runs from ``t_q`` up to the first
    X time at or after ``tau_r`` and the Y-set is ``{tau_r}``; equal times
    form a singleton pair; the third case mirrors the first. When the
    bracketing observation coincides with the boundary it is consumed,
    otherwise it is reused as the first element of the next set.

    Observations left over once one series is exhausted do not overlap any
    interval of the other series. They are gathered into one trailing set
    paired with an empty set (zero increment), mirroring the ``l[0] = 0``
    convention at the start, so that every observation is covered and the
    Hayashi-Yoshida sum is reproduced exactly.
    """
    if not isinstance(x, TickSeries) or not isinstance(y, TickSeries):
        raise TypeError("synchronize expects two TickSeries")
    t = x.times.tolist()
    tau = y.times.tolist()
    n, m = len(t) - 1, len(tau) - 1

    g, l, gam, lam = [], [], [], []
    q = r = 0
    while q <= n and r <= m:
        tq, tr = t[q], tau[r]
        lq, lr = max(q - 1, 0), max(r - 1, 0)
        if tq < tr:
            w = bisect_left(t, tr, q + 1)
            if w > n:
                g.append(n); l.append(lq); gam.append(r); lam.append(lr)
                q = n + 1
            else:
                g.append(w); l.append(lq); gam.append(r); lam.append(lr)
                q = w + 1 if t[w] == tr else w
            r += 1
        elif tq == tr:
            g.append(q); l.append(lq); gam.append(r); lam.append(lr)
            q += 1
            r += 1
        else:
            k = bisect_left(tau, tq, r + 1)
            if k > m:
                g.append(q); l.append(lq); gam.append(m); lam.append(lr)
                r = m + 1
            else:
                g.append(q); l.append(lq); gam.append(k); lam.append(lr)
                r = k + 1 if tau[k] == tq else k
            q += 1

    if q <= n:
        g.append(n); l.append(q - 1); gam.append(m); lam.append(m)
    elif r <= m:
        g.append(n); l.append(n); gam.append(m); lam.append(r - 1)

    return SyncGrid(g, l, gam, lam)


def grid_increments(grid: SyncGrid, x: TickSeries, y: TickSeries, lag: int, j: int):
    """Increments of X and Y spanning the sets ``j - lag`` through ``j``."""
    if lag < 1:
        raise IndexOutOfRange(f"lag must be >= 1, got {lag}")
    if j < lag or j > grid.n_sync:
        raise IndexOutOfRange(f"j must lie in [{lag}, {grid.n_sync}], got {j}")
    dx = x.values[grid.g[j]] - x.values[grid.l[j - lag]]
    dy = y.values[grid.gamma[j]] - y.values[grid.lam[j - lag]]
    return float(dx), float(dy)
