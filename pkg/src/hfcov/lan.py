"""Spectral objects of the synchronous equidistant Gaussian model.

With ``N`` equidistant observations of two correlated Brownian motions
(correlation ``theta``) plus independent noise, the covariance of the
observed increments is the ``2N x 2N`` block matrix

    [[A, D], [D, B]],  A = tridiag(-eta_x^2, dt + 2 eta_x^2, -eta_x^2),
                       D = theta * dt * I,

with ``B`` defined like ``A``. ``A`` and ``B`` share the discrete sine basis,
so the spectrum splits into ``N`` two-by-two problems with closed-form
eigenvalues. Those eigenvalues drive the local log-likelihood expansion in
``rho`` and its Fisher information, computed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterOutOfRange, UnequalNoise

__all__ = [
    "LanProfile",
    "noise_eigenvalues",
    "eigenvalues_equal_noise",
    "eigenvalues_general",
    "covariance_matrix",
    "gamma_coefficients",
    "gamma_sum",
    "fisher_info_equal",
    "fisher_info_bounds",
    "convergence_table",
]


@dataclass(frozen=True)
class LanProfile:
    """Model and local-alternative parameters.

    The noise levels are stored with ``eta_x >= eta_y``; they are swapped on
    construction if needed, which leaves every quantity computed here
    unchanged.
    """

    rho: float
    eta_x: float
    eta_y: float
    n_obs: int
    h: float = 1.0

    def __post_init__(self):
        if not abs(self.rho) < 1:
            raise ParameterOutOfRange(f"rho must lie in (-1, 1), got {self.rho}")
        if not (self.eta_x > 0 and self.eta_y > 0):
            raise ParameterOutOfRange("noise levels must be > 0")
        if int(self.n_obs) != self.n_obs or self.n_obs < 1:
            raise ParameterOutOfRange(f"n_obs must be a positive integer, got {self.n_obs}")
        if self.eta_x < self.eta_y:
            ex, ey = self.eta_y, self.eta_x
            object.__setattr__(self, "eta_x", ex)
            object.__setattr__(self, "eta_y", ey)
        object.__setattr__(self, "n_obs", int(self.n_obs))
        if not abs(self.perturbed_rho) <= 1:
            raise ParameterOutOfRange(
                f"perturbed correlation {self.perturbed_rho:.6g} leaves [-1, 1]"
            )

    @property
    def dt(self) -> float:
        return 1.0 / self.n_obs

    @property
    def step(self) -> float:
        """Local perturbation ``h * N^(-1/4)``."""
        return self.h * self.n_obs ** -0.25

    @property
    def perturbed_rho(self) -> float:
        return self.rho + self.step

    @property
    def equal_noise(self) -> bool:
        return self.eta_x == self.eta_y


def noise_eigenvalues(eta: float, n: int) -> np.ndarray:
    """Eigenvalues ``dt + 2 eta^2 (1 - cos(i pi/(n+1)))`` of one diagonal block, i = 1..n.

    ``1 - cos`` is evaluated as ``2 sin^2(./2)`` to keep full relative
    precision for the smallest modes at large ``n``.
    """
    i = np.arange(1, n + 1, dtype=float)
    s = np.sin(i * math.pi / (2.0 * (n + 1)))
    return 1.0 / n + 4.0 * eta * eta * s * s


def eigenvalues_equal_noise(profile: LanProfile, theta: float | None = None):
    """``lambda^+`` and ``lambda^-`` for equal noise, paired with ``1 + theta`` and ``1 - theta``.

    ``theta`` defaults to ``profile.rho``.
    """
    if not profile.equal_noise:
        raise UnequalNoise(
            f"eta_x={profile.eta_x} != eta_y={profile.eta_y}; use eigenvalues_general"
        )
    theta = profile.rho if theta is None else theta
    base = noise_eigenvalues(profile.eta_x, profile.n_obs) - profile.dt
    return profile.dt * (1.0 + theta) + base, profile.dt * (1.0 - theta) + base


def eigenvalues_general(profile: LanProfile, theta: float):
    """``xi^+`` and ``xi^-`` for arbitrary noise levels.

    The result is even in ``theta``: for equal noise and ``theta < 0`` the
    two lists equal ``lambda^-`` and ``lambda^+`` respectively.
    """
    lx = noise_eigenvalues(profile.eta_x, profile.n_obs)
    ly = noise_eigenvalues(profile.eta_y, profile.n_obs)
    mid = 0.5 * (lx + ly)
    root = np.hypot(0.5 * (lx - ly), theta * profile.dt)
    return mid + root, mid - root


def covariance_matrix(profile: LanProfile, theta: float) -> np.ndarray:
    """Dense ``2N x 2N`` covariance of the observed increments."""
    n, dt = profile.n_obs, profile.dt

    def block(eta):
        m = np.diag(np.full(n, dt + 2.0 * eta * eta))
        off = np.full(n - 1, -eta * eta)
        return m + np.diag(off, 1) + np.diag(off, -1)

    d = theta * dt * np.eye(n)
    return np.block([[block(profile.eta_x), d], [d, block(profile.eta_y)]])


def gamma_coefficients(profile: LanProfile) -> np.ndarray:
    """Relative eigenvalue changes ``lambda_j(rho + h N^-1/4) / lambda_j(rho) - 1``, j = 1..2N.

    Unequal noise uses ``xi^+`` and ``xi^-`` in place of ``lambda^+`` and
    ``lambda^-``.
    """
    if profile.equal_noise:
        spectrum = eigenvalues_equal_noise
    else:
        spectrum = eigenvalues_general
    lp0, lm0 = spectrum(profile, profile.rho)
    lp1, lm1 = spectrum(profile, profile.perturbed_rho)
    return np.concatenate([lp1 / lp0 - 1.0, lm1 / lm0 - 1.0])


def gamma_sum(profile: LanProfile):
    """Sum of squared gamma coefficients.

    Returns a float for equal noise. For unequal noise the pair
    ``(lower, upper)`` is returned, obtained by replacing both eigenvalues of
    each mode with ``lambda_X +/- rho dt`` (lower) and with
    ``(lambda_X + lambda_Y)/2 +/- rho dt`` (upper). Their limits are the
    Fisher-information bounds. The pair brackets the sum over
    :func:`gamma_coefficients` for ``rho > 0`` and comparable noise levels,
    but not in general: for ``rho <= 0`` or ``eta_y << eta_x`` the
    eigenvalue-ratio sum can fall outside.
    """
    if profile.equal_noise:
        g = gamma_coefficients(profile)
        return math.fsum(g * g)
    dt = profile.dt
    num = (profile.step * dt) ** 2
    lx = noise_eigenvalues(profile.eta_x, profile.n_obs)
    lbar = 0.5 * (lx + noise_eigenvalues(profile.eta_y, profile.n_obs))
    r = profile.rho * dt

    def bracket(lam):
        return num * math.fsum(1.0 / (lam + r) ** 2 + 1.0 / (lam - r) ** 2)

    return bracket(lx), bracket(lbar)


def _shape(rho: float) -> float:
    if not abs(rho) < 1:
        raise ParameterOutOfRange(f"rho must lie in (-1, 1), got {rho}")
    return (1.0 + rho) ** -1.5 + (1.0 - rho) ** -1.5


def fisher_info_equal(rho: float, eta: float) -> float:
    """Asymptotic Fisher information ``((1+rho)^-3/2 + (1-rho)^-3/2) / (8 eta)``."""
    if not eta > 0:
        raise ParameterOutOfRange(f"eta must be > 0, got {eta}")
    return _shape(rho) / (8.0 * eta)


def fisher_info_bounds(rho: float, eta_x: float, eta_y: float) -> tuple[float, float]:
    """Lower and upper bounds on the Fisher information for unequal noise.

    Both collapse to :func:`fisher_info_equal` when ``eta_x == eta_y``.
    """
    if not (eta_x > 0 and eta_y > 0):
        raise ParameterOutOfRange("noise levels must be > 0")
    eta_x, eta_y = max(eta_x, eta_y), min(eta_x, eta_y)
    s = _shape(rho)
    lower = s / (8.0 * eta_x)
    upper = math.sqrt(2.0) * s / (8.0 * math.sqrt(eta_x**2 + eta_y**2))
    return lower, max(lower, upper)


def _rel(value: float, target: float) -> float:
    if target == 0.0:
        return 0.0 if value == 0.0 else math.inf
    return abs(value - target) / abs(target)


def convergence_table(rho: float, eta_x: float, eta_y: float, h: float, n_list) -> list[dict]:
    """Squared-gamma sums against their ``2 h^2 I`` limits, one row per ``N``.

    Equal noise rows carry ``N, sum_gamma_sq, target, rel_error``; unequal
    noise rows carry the lower and upper brackets with their own targets.
    """
    rows = []
    for n in n_list:
        p = LanProfile(rho, eta_x, eta_y, int(n), h)
        if p.equal_noise:
            s = gamma_sum(p)
            target = 2.0 * h * h * fisher_info_equal(rho, p.eta_x)
            rows.append({"N": p.n_obs, "sum_gamma_sq": s, "target": target,
                         "rel_error": _rel(s, target)})
        else:
            lo, hi = gamma_sum(p)
            i_lo, i_hi = fisher_info_bounds(rho, p.eta_x, p.eta_y)
            t_lo, t_hi = 2.0 * h * h * i_lo, 2.0 * h * h * i_hi
            rows.append({"N": p.n_obs, "sum_gamma_sq_lower": lo, "sum_gamma_sq_upper": hi,
                         "target_lower": t_lo, "target_upper": t_hi,
                         "rel_error_lower": _rel(lo, t_lo), "rel_error_upper": _rel(hi, t_hi)})
    return rows
