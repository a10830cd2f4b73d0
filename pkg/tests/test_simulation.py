import json
from dataclasses import replace

import numpy as np
import pytest
from scipy.stats import norm

from dunkl_intertwining.classes.dyson_process import DysonProcess
from dunkl_intertwining.exceptions import OutOfRangeException, UnorderedInputException, UnsupportedCaseException
from dunkl_intertwining.hermite import freeze_prediction
from dunkl_intertwining.simulation.dyson import (
    SUBSTEPS,
    WORKERS_ENV,
    _jump_step,
    default_workers,
    interaction,
    order_kept,
    simulate_dunkl,
    simulate_dyson,
    trajectory_rng,
)
from dunkl_intertwining.simulation.ensemble import (
    empirical_cdf,
    ensemble_stats,
    grabiner_marginal_cdf,
    ks_against,
    ks_critical_value,
    ks_distance,
)
from dunkl_intertwining.simulation.experiments import freeze_experiment, mc_norm_check
from dunkl_intertwining.simulation.simulation_exceptions import (
    GridMismatchException,
    GuardDepthExhaustedException,
    InvalidConfigException,
    ThinningCapException,
)
from dunkl_intertwining.simulation.simulation_typing import SimConfig

X0 = np.array([-1.0, 0.0, 1.0])


def small_config(**changes) -> SimConfig:
    return replace(SimConfig(3, 1.0, 1e-2, 0.5, 40, seed=11, n_grid=6, block_size=16), **changes)


@pytest.mark.parametrize(
    "changes",
    [
        {"n_vars": 0},
        {"k": 0.0},
        {"dt": -1.0},
        {"dt": 2.0, "t_end": 1.0},
        {"n_traj": 0},
        {"seed": -1},
        {"guard_depth": 0},
        {"thinning_cap": 0},
        {"n_grid": 1},
        {"n_grid": 1000},
        {"block_size": 0},
    ],
)
def test_config_validation(changes):
    data = {**small_config().to_dict(), **changes}
    with pytest.raises(InvalidConfigException):
        SimConfig.from_dict(data)


def test_config_grid():
    config = SimConfig(2, 1.0, 0.1, 1.0, 1, n_grid=3)
    assert config.n_steps == 10
    assert config.beta == 2.0
    np.testing.assert_array_equal(config.record_steps, [0, 5, 10])
    np.testing.assert_allclose(config.times, [0.0, 0.5, 1.0])


def test_config_from_json(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(small_config().to_dict()))
    config = SimConfig.from_json(str(path), k=2.0, seed=None)
    assert config.k == 2.0
    assert config.seed == 11
    assert replace(config, k=1.0) == small_config()


def test_config_rejects_unknown_keys():
    with pytest.raises(InvalidConfigException):
        SimConfig.from_dict({**small_config().to_dict(), "scheme": "milstein"})


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, "3")
    assert default_workers() == 3
    monkeypatch.setenv(WORKERS_ENV, "many")
    with pytest.raises(InvalidConfigException):
        default_workers()
    monkeypatch.delenv(WORKERS_ENV)
    assert default_workers() == 1


def test_interaction_and_order():
    x = np.array([[0.0, 1.0, 3.0]])
    np.testing.assert_allclose(interaction(x), [[-1.0 - 1 / 3, 1.0 - 0.5, 1 / 3 + 0.5]])
    assert order_kept(x, x + 0.1)[0]
    assert not order_kept(x, np.array([[0.0, 2.0, 1.5]]))[0]


def test_streams_are_independent():
    a = trajectory_rng(1, 0, 0).standard_normal(4)
    assert np.array_equal(a, trajectory_rng(1, 0, 0).standard_normal(4))
    assert not np.array_equal(a, trajectory_rng(1, 1, 0).standard_normal(4))
    assert not np.array_equal(a, trajectory_rng(1, 0, 1).standard_normal(4))


def test_dyson_shapes_and_order():
    config = small_config()
    ensemble = simulate_dyson(config, X0, workers=1)
    assert ensemble.positions.shape == (40, 6, 3)
    assert ensemble.n_traj == 40
    assert ensemble.n_vars == 3
    np.testing.assert_array_equal(ensemble.positions[:, 0], np.tile(X0, (40, 1)))
    assert np.all(np.diff(ensemble.positions, axis=2) > 0)
    assert ensemble.jump_counts().sum() == 0
    assert ensemble.seed_lineage(5) == (11, 5)


def test_dyson_is_reproducible_across_blocks():
    first = simulate_dyson(small_config(), X0, workers=1)
    second = simulate_dyson(small_config(block_size=7), X0, workers=1)
    np.testing.assert_array_equal(first.positions, second.positions)
    other_seed = simulate_dyson(small_config(seed=12), X0, workers=1)
    assert not np.array_equal(first.positions, other_seed.positions)


@pytest.mark.slow
def test_dyson_is_reproducible_across_workers():
    config = small_config(n_traj=64)
    serial = simulate_dyson(config, X0, workers=1)
    parallel = simulate_dyson(config, X0, workers=2)
    np.testing.assert_array_equal(serial.positions, parallel.positions)


def test_dyson_rejects_bad_start():
    with pytest.raises(UnorderedInputException):
        simulate_dyson(small_config(), [1.0, 0.0, 2.0], workers=1)
    with pytest.raises(OutOfRangeException):
        simulate_dyson(small_config(), [0.0, 1.0], workers=1)


def test_guard_depth_exhausted():
    config = SimConfig(2, 1e-9, 1.0, 1.0, 100, seed=3, guard_depth=1, n_grid=2)
    with pytest.raises(GuardDepthExhaustedException):
        simulate_dyson(config, [0.0, 1e-3], workers=1)


def test_thinning_cap():
    config = SimConfig(2, 1.0, 1e-2, 1.0, 1, thinning_cap=1)
    x = np.array([[0.0, 0.01]])
    pairs = np.triu_indices(2, k=1)
    with pytest.raises(ThinningCapException):
        _jump_step(x, np.ones((1, 1)), 1e-2, 0.0, config, 0, pairs, {}, [[]])


def test_jump_step_swaps_when_certain():
    config = SimConfig(2, 1.0, 1e-2, 1.0, 1)
    x = np.array([[0.0, 1.0]])
    events = [[]]
    _jump_step(x, np.zeros((1, 1)), 1e-2, 0.0, config, 0, np.triu_indices(2, k=1), {}, events)
    np.testing.assert_array_equal(x, [[1.0, 0.0]])
    assert [(e.i, e.j) for e in events[0]] == [(0, 1)]
    assert SUBSTEPS == 3


def test_dunkl_symmetric_start_permutes_labels():
    config = small_config(symmetric_start=True)
    ensemble = simulate_dunkl(config, X0, workers=1)
    starts = ensemble.positions[:, 0]
    np.testing.assert_array_equal(np.sort(starts, axis=1), np.tile(X0, (40, 1)))
    assert len({tuple(row) for row in starts}) > 1
    assert ensemble.jump_counts().sum() > 0
    for events in ensemble.jumps:
        assert all(0 < e.time <= config.t_end + 1e-12 for e in events)


def test_dunkl_sorted_positions_form_a_dyson_path():
    ensemble = simulate_dunkl(small_config(), X0, workers=1)
    assert np.all(np.diff(ensemble.sorted_positions, axis=2) > 0)


def test_process_wrapper():
    process = DysonProcess(small_config())
    assert process.beta == 2.0
    np.testing.assert_allclose(process.frozen_configuration, freeze_prediction(3, 0.5))
    ensemble = process.simulate_dunkl(X0)
    assert ensemble.config.symmetric_start


def test_ensemble_stats():
    ensemble = simulate_dyson(small_config(), X0, workers=1)
    stats = ensemble_stats(ensemble)
    assert stats.mean.shape == (6, 3)
    np.testing.assert_allclose(stats.mean[0], X0)
    np.testing.assert_allclose(stats.variance[0], 0.0)
    assert np.all(np.diff(stats.mean[-1]) > 0)
    np.testing.assert_array_equal(stats.final_sorted, ensemble.final())


def test_ks_helpers():
    np.testing.assert_allclose(empirical_cdf([3.0, 1.0, 2.0], [0.0, 1.0, 2.5, 9.0]), [0.0, 1 / 3, 2 / 3, 1.0])
    assert ks_critical_value(10_000, 10_000) == pytest.approx(1.63 * np.sqrt(2e-4))
    a = simulate_dyson(small_config(), X0, workers=1)
    np.testing.assert_array_equal(ks_distance(a, a), np.zeros(3))
    with pytest.raises(GridMismatchException):
        ks_distance(a, simulate_dyson(small_config(n_grid=3), X0, workers=1))


def test_marginal_cdf_one_particle_is_normal():
    grid = np.array([-1.0, 0.5, 2.0])
    np.testing.assert_allclose(grabiner_marginal_cdf([0.5], 4.0, 0, grid), norm.cdf(grid, loc=0.5, scale=2.0))


def test_marginal_cdf_is_a_distribution():
    grid = np.linspace(-8.0, 8.0, 200)
    for coordinate in range(2):
        cdf = grabiner_marginal_cdf([-0.5, 0.5], 1.0, coordinate, grid)
        assert np.all(np.diff(cdf) >= -1e-12)
        assert cdf[0] == pytest.approx(0.0, abs=1e-6)
        assert cdf[-1] == pytest.approx(1.0, abs=1e-6)
    lower = grabiner_marginal_cdf([-0.5, 0.5], 1.0, 0, grid)
    upper = grabiner_marginal_cdf([-0.5, 0.5], 1.0, 1, grid)
    assert np.all(lower >= upper - 1e-9)


def test_marginal_cdf_limits():
    with pytest.raises(UnsupportedCaseException):
        grabiner_marginal_cdf([0.0, 1.0, 2.0, 3.0], 1.0, 0, [0.0])
    with pytest.raises(OutOfRangeException):
        grabiner_marginal_cdf([0.0, 1.0], 1.0, 2, [0.0])


@pytest.mark.slow
def test_dyson_matches_exact_marginals():
    config = SimConfig(2, 1.0, 1e-3, 1.0, 2000, seed=5, n_grid=2, block_size=500)
    x0 = np.array([-0.5, 0.5])
    final = simulate_dyson(config, x0, workers=1).final()
    for coordinate in range(2):
        distance = ks_against(final[:, coordinate], lambda s: grabiner_marginal_cdf(x0, 1.0, coordinate, s))
        assert distance < 0.05


@pytest.mark.slow
def test_symmetric_dunkl_matches_dyson():
    config = SimConfig(3, 1.0, 2e-3, 1.0, 2000, seed=8, n_grid=2, block_size=500)
    dyson = simulate_dyson(config, X0, workers=1)
    dunkl = simulate_dunkl(replace(config, seed=9, symmetric_start=True), X0, workers=1)
    assert np.all(ks_distance(dunkl, dyson) < 2 * ks_critical_value(2000, 2000))


@pytest.mark.slow
def test_weak_coupling_variance_is_time():
    config = SimConfig(3, 0.01, 1e-2, 1.0, 2000, seed=2, n_grid=2, block_size=500)
    final = simulate_dyson(config, [-10.0, 0.0, 10.0], workers=1).final()
    np.testing.assert_allclose(final.var(axis=0), 1.0, atol=0.12)


@pytest.mark.slow
def test_jumps_thin_out_as_particles_spread():
    config = SimConfig(3, 1.0, 1e-3, 0.5, 200, seed=4, n_grid=2, block_size=100)
    tight = simulate_dunkl(config, [-0.1, 0.0, 0.1], workers=1).jump_counts()
    wide = simulate_dunkl(config, [-3.0, 0.0, 3.0], workers=1).jump_counts()
    assert tight.mean() > 5 * wide.mean()
    assert tight.mean() > 1.0


@pytest.mark.slow
def test_two_particle_ensemble_is_mirror_symmetric_about_the_start():
    centre = 1.0
    config = SimConfig(2, 1.0, 1e-3, 1.0, 2000, seed=6, n_grid=2, block_size=500)
    final = simulate_dyson(config, [centre - 0.5, centre + 0.5], workers=1).final()
    below, above = centre - final[:, 0], final[:, 1] - centre
    standard_error = np.std(below - above) / np.sqrt(len(final))
    assert abs(below.mean() - above.mean()) < 4 * standard_error
    assert np.std(below) == pytest.approx(np.std(above), rel=0.1)


@pytest.mark.slow
def test_freeze_experiment_small():
    config = SimConfig(3, 1e4, 1e-4, 1.0, 20, seed=1, n_grid=2)
    report = freeze_experiment(config, X0, k_factors=(1.0, 4.0))
    assert report.runs[0].max_deviation < 0.05
    assert report.rms_decreasing
    assert report.x0_gap_centered < 0.05
    np.testing.assert_allclose(report.prediction, freeze_prediction(3, 1.0))


def test_freeze_experiment_needs_large_k():
    with pytest.raises(OutOfRangeException):
        freeze_experiment(small_config(), X0)


def test_norm_check():
    check = mc_norm_check(2, 1.0, 200_000, seed=4)
    assert check.closed_form == pytest.approx(2 * np.pi)
    assert check.sigmas < 4.0
    assert check.relative_error < 0.02


@pytest.mark.parametrize("n_vars, k", [(5, 1.0), (2, 3.0), (2, 0.0)])
def test_norm_check_ranges(n_vars, k):
    with pytest.raises(OutOfRangeException):
        mc_norm_check(n_vars, k, 100, seed=0)
