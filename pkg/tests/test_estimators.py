import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfcov import (
    ConfigError,
    EstimateReport,
    EstimatorKind,
    GridMismatch,
    NegativeVariance,
    TickSeries,
    TuningOutOfRange,
    TuningPolicy,
    estimate_pair,
    grid_increments,
    hy_estimate,
    multiscale_estimate,
    multiscale_weights,
    optimal_k,
    optimal_m,
    plugin_noise_variance,
    run_estimators,
    subsample_estimate,
    synchronize,
)
from oracles import brute_force_hy, random_times


def sync_pair(vx, vy):
    t = np.arange(len(vx), dtype=float)
    x, y = TickSeries(t, vx), TickSeries(t, vy)
    return x, y, synchronize(x, y)


def random_pair(rng, n, m):
    tx, ty = random_times(rng, n), random_times(rng, m)
    return TickSeries(tx, rng.normal(size=n)), TickSeries(ty, rng.normal(size=m))


# hand-computed from the lagged product sums on synchronous toy data


def test_four_point_example():
    x, y, grid = sync_pair([0, 1, 3, 4], [0, 2, 2, 5])
    assert subsample_estimate(grid, x, y, 1) == 17.0
    assert subsample_estimate(grid, x, y, 2) == 13.0
    assert multiscale_estimate(grid, x, y, 2) == 9.0
    assert hy_estimate(grid, x, y) == 2 * 1 + 2 * 0 + 1 * 3


def test_three_point_example():
    x, y, grid = sync_pair([0, 1, 3], [0, 2, 2])
    assert hy_estimate(grid, x, y) == 2.0
    assert subsample_estimate(grid, x, y, 1) == 8.0


def test_subsample_matches_grid_increments():
    rng = np.random.default_rng(1)
    x, y = random_pair(rng, 40, 30)
    grid = synchronize(x, y)
    for k in (1, 3, 7):
        terms = [np.prod(grid_increments(grid, x, y, k, j)) for j in range(k, grid.n_sync + 1)]
        assert subsample_estimate(grid, x, y, k) == pytest.approx(math.fsum(terms) / k, rel=1e-13)


def test_multiscale_is_weighted_subsample_sum():
    rng = np.random.default_rng(2)
    x, y = random_pair(rng, 60, 50)
    grid = synchronize(x, y)
    for m in (2, 5, 9):
        alpha = multiscale_weights(m).alpha
        expect = math.fsum(a * subsample_estimate(grid, x, y, i + 1) for i, a in enumerate(alpha))
        assert multiscale_estimate(grid, x, y, m) == pytest.approx(expect, rel=1e-12, abs=1e-12)


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 40), st.integers(2, 40), st.integers(0, 2**32 - 1))
def test_hy_equals_overlap_double_sum(n, m, seed):
    rng = np.random.default_rng(seed)
    x, y = random_pair(rng, n, m)
    got = hy_estimate(synchronize(x, y), x, y)
    ref = brute_force_hy(x.times, x.values, y.times, y.values)
    assert got == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_hy_with_ties_equals_overlap_double_sum():
    rng = np.random.default_rng(3)
    for _ in range(50):
        tx = random_times(rng, 15, span=25)
        ty = random_times(rng, 15, span=25)
        x = TickSeries(tx, rng.normal(size=tx.size))
        y = TickSeries(ty, rng.normal(size=ty.size))
        ref = brute_force_hy(tx, x.values, ty, y.values)
        assert hy_estimate(synchronize(x, y), x, y) == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_estimators_are_bilinear():
    rng = np.random.default_rng(4)
    x, y = random_pair(rng, 50, 45)
    x2 = TickSeries(x.times, rng.normal(size=len(x)))
    grid = synchronize(x, y)
    mix = TickSeries(x.times, 2.0 * x.values - 0.5 * x2.values)
    for f, arg in ((subsample_estimate, 4), (multiscale_estimate, 5)):
        lhs = f(grid, mix, y, arg)
        rhs = 2.0 * f(grid, x, y, arg) - 0.5 * f(grid, x2, y, arg)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


def test_symmetry_on_synchronous_grid():
    rng = np.random.default_rng(5)
    vx, vy = rng.normal(size=30), rng.normal(size=30)
    x, y, grid = sync_pair(vx, vy)
    _, _, grid_yx = sync_pair(vy, vx)
    assert hy_estimate(grid, x, y) == hy_estimate(grid_yx, y, x)
    assert subsample_estimate(grid, x, y, 3) == subsample_estimate(grid_yx, y, x, 3)
    assert multiscale_estimate(grid, x, y, 4) == multiscale_estimate(grid_yx, y, x, 4)


def test_tuning_bounds():
    x, y, grid = sync_pair([0, 1, 3, 4], [0, 2, 2, 5])
    with pytest.raises(TuningOutOfRange, match="n_sync=3"):
        subsample_estimate(grid, x, y, 4)
    with pytest.raises(TuningOutOfRange):
        subsample_estimate(grid, x, y, 0)
    with pytest.raises(TuningOutOfRange):
        multiscale_estimate(grid, x, y, 1)
    with pytest.raises(TuningOutOfRange):
        multiscale_estimate(grid, x, y, 4)
    with pytest.raises(TuningOutOfRange):
        subsample_estimate(grid, x, y, 2.0)


def test_grid_mismatch():
    rng = np.random.default_rng(6)
    x, y = random_pair(rng, 30, 30)
    short = TickSeries(x.times[:10], x.values[:10])
    with pytest.raises(GridMismatch):
        hy_estimate(synchronize(x, y), short, y)


def test_weights_small_m():
    assert multiscale_weights(2).alpha.tolist() == [-1.0, 2.0]
    np.testing.assert_allclose(multiscale_weights(3).alpha, [-0.5, 0.0, 1.5], atol=1e-15)
    w = multiscale_weights(50)
    assert w.total == pytest.approx(1.0, abs=1e-13)
    assert w.harmonic_total == pytest.approx(0.0, abs=1e-13)
    for bad in (1, 0, 2.5, True):
        with pytest.raises(TuningOutOfRange):
            multiscale_weights(bad)


def test_optimal_tuning_formulae():
    assert optimal_k(30000, 0.1, 0.1) == 300
    assert optimal_m(30000, 0.1, 0.1) == 122
    # clamped at both ends
    assert optimal_k(100, 0.0, 0.0) == 1
    assert optimal_m(100, 0.0, 0.0) == 2
    assert optimal_k(10, 1e6, 1e6) == 10
    assert optimal_m(10, 1e6, 1e6) == 10
    with pytest.raises(NegativeVariance):
        optimal_k(100, -0.1, 0.1)
    with pytest.raises(NegativeVariance):
        optimal_m(100, 0.1, -0.1)
    with pytest.raises(TuningOutOfRange):
        optimal_m(1, 0.1, 0.1)


def test_rounding_is_half_away_from_zero():
    from hfcov.estimators import _round_half_away

    # Python's round() would give 2 and 4 here
    assert [_round_half_away(v) for v in (2.5, 4.5, -2.5, 2.49, 0.5)] == [3, 5, -3, 2, 1]


def test_plugin_noise_variance():
    s = TickSeries([0, 1, 2, 3], [0.0, 1.0, 0.0, 1.0])
    assert plugin_noise_variance(s) == 0.5


def test_plugin_noise_variance_recovers_noise():
    rng = np.random.default_rng(7)
    n = 20000
    s = TickSeries(np.arange(n) / n, 0.1 * rng.normal(size=n))
    assert plugin_noise_variance(s) == pytest.approx(0.01, rel=0.05)


def test_policy_parse():
    assert TuningPolicy.parse("oracle") == TuningPolicy("oracle")
    assert TuningPolicy.parse("PLUGIN").kind == "plugin"
    assert TuningPolicy.parse("K=5") == TuningPolicy("manual", k=5)
    assert TuningPolicy.parse("K=5,M=3") == TuningPolicy("manual", k=5, m=3)
    for bad in ("K5", "Q=1", "K=x", "auto"):
        with pytest.raises(ConfigError):
            TuningPolicy.parse(bad)


def test_run_estimators_reports():
    x, y, grid = sync_pair([0, 1, 3, 4], [0, 2, 2, 5])
    reps = run_estimators(grid, x, y, ["hy", "sub", "multi"], TuningPolicy.parse("K=2,M=2"))
    assert [r.estimator_kind for r in reps] == list(EstimatorKind)
    assert [r.estimate for r in reps] == [5.0, 13.0, 9.0]
    assert [r.tuning for r in reps] == [None, 2, 2]
    with pytest.raises(ConfigError):
        run_estimators(grid, x, y, ["sub"], TuningPolicy("oracle"))
    with pytest.raises(ConfigError):
        run_estimators(grid, x, y, ["multi"], TuningPolicy.parse("K=2"))
    oracle = run_estimators(grid, x, y, ["sub"], TuningPolicy("oracle"), eta2=(0.0, 0.0))
    assert oracle[0].tuning == 1 and oracle[0].noise_variances_used == (0.0, 0.0)


def test_estimate_pair_plugin():
    rng = np.random.default_rng(8)
    x, y = random_pair(rng, 200, 200)
    reps = estimate_pair(x, y)
    assert len(reps) == 3
    assert reps[1].noise_variances_used == (plugin_noise_variance(x), plugin_noise_variance(y))


def test_report_invariants():
    with pytest.raises(ValueError):
        EstimateReport("hy", 1.0, 3, tuning=2)
    with pytest.raises(ValueError):
        EstimateReport("multi", 1.0, 3, tuning=1)
    r = EstimateReport("sub", 1.0, 3, tuning=1)
    assert r.estimator_kind is EstimatorKind.SUBSAMPLE
    assert r.as_row()["estimator"] == "sub"
