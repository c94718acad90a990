"""Parameter access, simplex calibration, and grid sweep tests."""

import dataclasses

import numpy as np
import pytest

from solarcooker.fitting import (FAILURE_PENALTY, ParamSpec, calibrate,
                                 get_param, set_param, sweep, _nelder_mead)
from solarcooker.metrics import ExperimentalSeries, ExperimentPoint
from solarcooker.solver import integrate


def synthetic_experiment(params, env, cfg, initial, every_s=300.0,
                         until_s=5400.0):
    """Sample a run of the given model at a fixed cadence, noise free."""
    result = integrate(params, env, initial, cfg)
    times = result.times()
    fluid = result.t_fluid()
    points = []
    t = 0.0
    while t <= min(until_s, times[-1]):
        points.append(ExperimentPoint(
            time=t, t_fluid=float(np.interp(t, times, fluid)),
            uncertainty=None))
        t += every_s
    return ExperimentalSeries(points=tuple(points))


class TestParamAccess:
    def test_get_dotted_path(self, small_params):
        assert get_param(small_params, "convection.h_abs_fluid") == 5.0
        assert get_param(small_params, "optics.eps_absorber") == 0.5
        assert get_param(small_params, "fluid.mass") == 1.0

    def test_set_returns_modified_copy(self, small_params):
        updated = set_param(small_params, "geometry.area_collector", 0.4)
        assert get_param(updated, "geometry.area_collector") == 0.4
        assert get_param(small_params, "geometry.area_collector") == 0.2

    def test_set_leaves_siblings_alone(self, small_params):
        updated = set_param(small_params, "convection.h_abs_fluid", 1.0)
        assert updated.convection.h_abs_ambient == 10.0
        assert updated.optics == small_params.optics

    def test_unknown_path_raises(self, small_params):
        with pytest.raises(ValueError, match="h_abs_water"):
            get_param(small_params, "convection.h_abs_water")

    def test_non_leaf_path_raises(self, small_params):
        with pytest.raises(ValueError, match="convection"):
            get_param(small_params, "convection")

    def test_set_revalidates(self, small_params):
        with pytest.raises(ValueError, match="h_abs_fluid"):
            set_param(small_params, "convection.h_abs_fluid", -1.0)


class TestParamSpec:
    def test_bounds_must_be_ordered(self):
        with pytest.raises(ValueError, match="lower"):
            ParamSpec(name="fluid.mass", lower=2.0, upper=1.0)


class TestNelderMead:
    def test_minimizes_quadratic(self):
        # minimum at (0.3, 0.7) inside the unit box
        def objective(x):
            return (x[0] - 0.3) ** 2 + (x[1] - 0.7) ** 2

        best_x, best_val, iterations, evaluations, history = _nelder_mead(
            objective, 2, max_iter=500, diam_tol=1e-6)
        assert np.allclose(best_x, [0.3, 0.7], atol=1e-4)
        assert best_val < 1e-8
        assert evaluations >= iterations

    def test_history_is_monotone_nonincreasing(self):
        def objective(x):
            return (x[0] - 0.9) ** 2

        _, _, _, _, history = _nelder_mead(objective, 1, max_iter=200,
                                           diam_tol=1e-8)
        assert all(b <= a for a, b in zip(history, history[1:]))

    def test_stays_inside_unit_box(self):
        seen = []

        def objective(x):
            seen.append(x.copy())
            return float(np.sum((x - 2.0) ** 2))  # pulls toward x = 2

        _nelder_mead(objective, 2, max_iter=100, diam_tol=1e-6)
        stacked = np.vstack(seen)
        assert stacked.min() >= 0.0
        assert stacked.max() <= 1.0


class TestCalibrate:
    def test_single_parameter_round_trip(self, paper_like):
        params, env, cfg, initial = paper_like
        exp = synthetic_experiment(params, env, cfg, initial)
        spec = ParamSpec("convection.h_abs_fluid", 0.3, 1.5)
        outcome = calibrate(params, env, initial, cfg, [spec], exp)
        fitted = get_param(outcome.params, "convection.h_abs_fluid")
        truth = get_param(params, "convection.h_abs_fluid")
        assert abs(fitted - truth) / truth <= 0.02
        assert outcome.error < 0.05

    def test_history_monotone(self, paper_like):
        params, env, cfg, initial = paper_like
        exp = synthetic_experiment(params, env, cfg, initial)
        spec = ParamSpec("convection.h_abs_fluid", 0.3, 1.5)
        outcome = calibrate(params, env, initial, cfg, [spec], exp,
                            max_iter=60)
        assert all(b <= a for a, b in
                   zip(outcome.history, outcome.history[1:]))

    def test_unscorable_runs_earn_the_penalty(self, paper_like):
        params, env, cfg, initial = paper_like
        # experiment extends past every possible simulation span
        exp = ExperimentalSeries(points=(
            ExperimentPoint(time=0.0, t_fluid=302.15, uncertainty=None),
            ExperimentPoint(time=cfg.t_end + 3600.0, t_fluid=350.0,
                            uncertainty=None)))
        spec = ParamSpec("convection.h_abs_fluid", 0.3, 1.5)
        outcome = calibrate(params, env, initial, cfg, [spec], exp,
                            max_iter=3)
        assert outcome.error == FAILURE_PENALTY

    def test_rejects_empty_free_list(self, paper_like):
        params, env, cfg, initial = paper_like
        exp = synthetic_experiment(params, env, cfg, initial)
        with pytest.raises(ValueError, match="free parameter"):
            calibrate(params, env, initial, cfg, [], exp)

    def test_rejects_duplicate_names(self, paper_like):
        params, env, cfg, initial = paper_like
        exp = synthetic_experiment(params, env, cfg, initial)
        spec = ParamSpec("convection.h_abs_fluid", 0.3, 1.5)
        with pytest.raises(ValueError, match="unique"):
            calibrate(params, env, initial, cfg, [spec, spec], exp)

    def test_rejects_too_many_parameters(self, paper_like):
        params, env, cfg, initial = paper_like
        exp = synthetic_experiment(params, env, cfg, initial)
        specs = [ParamSpec("convection.h_abs_fluid", 0.3 + 0.01 * i, 1.5)
                 for i in range(7)]
        with pytest.raises(ValueError, match=r"\[1, 6\]"):
            calibrate(params, env, initial, cfg, specs, exp)


class TestSweep:
    def test_single_point_grid_matches_direct_run(self, paper_like):
        params, env, cfg, initial = paper_like
        grid = [(ParamSpec("geometry.area_collector", 1.1, 1.2), 1)]
        result = sweep(params, env, initial, cfg, grid)
        assert result.param_names == ("geometry.area_collector",)
        assert len(result.rows) == 1
        row = result.rows[0]
        assert row.values == (1.1,)  # a one-step axis sits at its lower bound
        direct = integrate(params, env, initial, cfg)
        assert row.boiling_time == pytest.approx(direct.t_boil, abs=1e-6)
        assert row.error is None

    def test_axis_ordering_is_cartesian(self, paper_like):
        params, env, cfg, initial = paper_like
        short = dataclasses.replace(cfg, t_end=600.0)
        grid = [(ParamSpec("optics.eps_absorber", 0.2, 0.4), 2),
                (ParamSpec("convection.h_abs_fluid", 0.5, 1.0), 2)]
        result = sweep(params, env, initial, short, grid)
        values = [row.values for row in result.rows]
        assert values == [(0.2, 0.5), (0.2, 1.0), (0.4, 0.5), (0.4, 1.0)]

    def test_larger_collector_boils_sooner(self, paper_like):
        params, env, cfg, initial = paper_like
        grid = [(ParamSpec("geometry.area_collector", 1.0, 1.6), 3)]
        result = sweep(params, env, initial, cfg, grid)
        boils = [row.boiling_time for row in result.rows]
        assert all(b is not None for b in boils)
        assert boils[0] > boils[1] > boils[2]

    def test_emissivity_changes_trajectory(self, paper_like):
        params, env, cfg, initial = paper_like
        short = dataclasses.replace(cfg, t_end=1800.0)
        grid = [(ParamSpec("optics.eps_absorber", 0.1, 0.9), 3)]
        result = sweep(params, env, initial, short, grid)
        finals = [row.final_t_fluid for row in result.rows]
        assert len(set(finals)) == 3

    def test_never_boiling_point_has_empty_boil_time(self, paper_like):
        params, env, cfg, initial = paper_like
        grid = [(ParamSpec("geometry.area_collector", 0.5, 0.5001), 1)]
        result = sweep(params, env, initial, cfg, grid)
        row = result.rows[0]
        assert row.boiling_time is None
        assert row.error is None
        assert row.final_t_fluid is not None

    def test_rejects_oversized_grid(self, paper_like):
        params, env, cfg, initial = paper_like
        grid = [(ParamSpec("optics.eps_absorber", 0.1, 0.9), 1001),
                (ParamSpec("convection.h_abs_fluid", 0.1, 1.0), 1001)]
        with pytest.raises(ValueError, match="limit"):
            sweep(params, env, initial, cfg, grid)

    def test_rejects_bad_steps(self, paper_like):
        params, env, cfg, initial = paper_like
        grid = [(ParamSpec("optics.eps_absorber", 0.1, 0.9), 0)]
        with pytest.raises(ValueError, match="steps"):
            sweep(params, env, initial, cfg, grid)
