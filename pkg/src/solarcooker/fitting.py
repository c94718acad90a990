"""Coefficient calibration and parameter sweeps.

Calibration minimizes the temperature-trace percentage error over a box
of free parameters with a deterministic Nelder-Mead simplex: the search
runs in box-normalized coordinates, the initial simplex sits at the box
center with one vertex shifted by a quarter of the box width per axis,
and proposals that leave the box are reflected back inside.  There is no
randomness anywhere, so a calibration is exactly reproducible.
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .metrics import (METHOD_INTERPOLATE, ExperimentalSeries,
                      cooking_power_series, relative_error,
                      standardized_cooking_power)
from .solver import SolverConfig, Status, integrate
from .thermal import CookerParams, CookerState, Environment, _check, _finite

# Objective value substituted when a candidate point cannot be simulated
# or scored; high enough that the simplex always retreats from it.
FAILURE_PENALTY = 1.0e6

MAX_FREE_PARAMS = 6
MAX_SWEEP_POINTS = 1_000_000


@dataclass(frozen=True)
class ParamSpec:
    """One free parameter: a dotted path into CookerParams plus box bounds."""

    name: str     # e.g. "convection.h_abs_fluid" or "optics.eps_absorber"
    lower: float
    upper: float

    def __post_init__(self) -> None:
        _check(bool(self.name), "parameter name must be non-empty")
        _check(_finite(self.lower) and _finite(self.upper),
               f"bounds of {self.name} must be finite")
        _check(self.lower < self.upper,
               f"lower bound of {self.name} must be below the upper bound, "
               f"got [{self.lower}, {self.upper}]")


def get_param(params: CookerParams, name: str) -> float:
    """Read a numeric field through its dotted path."""
    obj = params
    for part in name.split("."):
        if not dataclasses.is_dataclass(obj) or part not in {f.name for f in dataclasses.fields(obj)}:
            raise ValueError(f"unknown parameter path {name!r} (no field {part!r})")
        obj = getattr(obj, part)
    if not _finite(obj):
        raise ValueError(f"parameter {name!r} is not a numeric field")
    return float(obj)


def set_param(params: CookerParams, name: str, value: float) -> CookerParams:
    """Return a copy of params with one dotted-path field replaced."""
    get_param(params, name)  # validates the path points at a number

    def assign(obj, parts: list[str]):
        head = parts[0]
        if len(parts) == 1:
            return dataclasses.replace(obj, **{head: value})
        return dataclasses.replace(obj, **{head: assign(getattr(obj, head), parts[1:])})

    return assign(params, name.split("."))


@dataclass(frozen=True)
class CalibrationResult:
    """Outcome of one calibration run."""

    params: CookerParams        # base params with the fitted values applied
    error: float                # %, objective at the returned point
    iterations: int
    evaluations: int
    history: tuple[float, ...]  # best objective after each simplex iteration


def _fold_into_box(x: np.ndarray) -> np.ndarray:
    """Reflect a normalized point back into [0, 1] per axis."""
    x = np.asarray(x, dtype=float)
    for _ in range(4):
        x = np.where(x < 0.0, -x, x)
        x = np.where(x > 1.0, 2.0 - x, x)
    return np.clip(x, 0.0, 1.0)


def _nelder_mead(objective, dim: int, max_iter: int, diam_tol: float):
    """Deterministic simplex descent in the normalized box [0, 1]^dim."""
    center = np.full(dim, 0.5)
    vertices = [center.copy()]
    for axis in range(dim):
        v = center.copy()
        v[axis] += 0.25
        vertices.append(v)
    values = [objective(v) for v in vertices]
    evaluations = len(vertices)
    history: list[float] = []
    iterations = 0

    for iterations in range(1, max_iter + 1):
        order = sorted(range(len(vertices)), key=lambda i: values[i])
        vertices = [vertices[i] for i in order]
        values = [values[i] for i in order]
        history.append(values[0])

        diameter = max(float(np.max(np.abs(v - vertices[0]))) for v in vertices[1:])
        if diameter < diam_tol:
            break

        centroid = np.mean(vertices[:-1], axis=0)
        worst = vertices[-1]

        reflected = _fold_into_box(centroid + (centroid - worst))
        f_reflected = objective(reflected)
        evaluations += 1

        if f_reflected < values[0]:
            expanded = _fold_into_box(centroid + 2.0 * (centroid - worst))
            f_expanded = objective(expanded)
            evaluations += 1
            if f_expanded < f_reflected:
                vertices[-1], values[-1] = expanded, f_expanded
            else:
                vertices[-1], values[-1] = reflected, f_reflected
            continue

        if f_reflected < values[-2]:
            vertices[-1], values[-1] = reflected, f_reflected
            continue

        if f_reflected < values[-1]:
            contracted = _fold_into_box(centroid + 0.5 * (centroid - worst))
            f_contracted = objective(contracted)
            evaluations += 1
            if f_contracted <= f_reflected:
                vertices[-1], values[-1] = contracted, f_contracted
                continue
        else:
            contracted = _fold_into_box(centroid - 0.5 * (centroid - worst))
            f_contracted = objective(contracted)
            evaluations += 1
            if f_contracted < values[-1]:
                vertices[-1], values[-1] = contracted, f_contracted
                continue

        # Shrink toward the best vertex.
        for i in range(1, len(vertices)):
            vertices[i] = vertices[0] + 0.5 * (vertices[i] - vertices[0])
            values[i] = objective(vertices[i])
            evaluations += 1

    order = sorted(range(len(vertices)), key=lambda i: values[i])
    best = order[0]
    return vertices[best], values[best], iterations, evaluations, history


def calibrate(base: CookerParams, env: Environment, initial: CookerState,
              cfg: SolverConfig, free: Sequence[ParamSpec],
              experiment: ExperimentalSeries, *,
              max_iter: int = 500, diam_tol: float = 1e-4) -> CalibrationResult:
    """Fit the free parameters so the simulated fluid trace matches the
    experiment.

    The objective is the mean absolute percentage error of the fluid
    temperature; candidate points whose simulation fails or cannot be
    scored receive a fixed penalty.  Returns the best point found after
    the simplex diameter drops below ``diam_tol`` (in box-normalized
    units) or ``max_iter`` iterations, whichever comes first.
    """
    _check(1 <= len(free) <= MAX_FREE_PARAMS,
           f"number of free parameters must be in [1, {MAX_FREE_PARAMS}], got {len(free)}")
    names = [spec.name for spec in free]
    _check(len(set(names)) == len(names), "free parameter names must be unique")
    for spec in free:
        get_param(base, spec.name)  # path must exist and be numeric

    lower = np.array([spec.lower for spec in free])
    width = np.array([spec.upper - spec.lower for spec in free])

    def decode(x: np.ndarray) -> CookerParams:
        params = base
        for spec, value in zip(free, lower + x * width):
            params = set_param(params, spec.name, float(value))
        return params

    def objective(x: np.ndarray) -> float:
        try:
            params = decode(x)
            result = integrate(params, env, initial, cfg)
            if result.status is Status.STEP_FAILURE:
                return FAILURE_PENALTY
            return relative_error(result, experiment)
        except (ValueError, OverflowError, FloatingPointError, ZeroDivisionError):
            return FAILURE_PENALTY

    best_x, best_f, iterations, evaluations, history = _nelder_mead(
        objective, len(free), max_iter, diam_tol)

    return CalibrationResult(params=decode(best_x), error=float(best_f),
                             iterations=iterations, evaluations=evaluations,
                             history=tuple(history))


class SweepRow(NamedTuple):
    """Outcome of one grid point."""

    values: tuple[float, ...]          # swept parameter values, grid order
    boiling_time: float | None         # s, None when the run never boiled
    standardized_power: float | None   # W, None when not computable
    final_t_fluid: float               # K, last sampled fluid temperature
    error: str | None                  # failure description, None on success


@dataclass(frozen=True)
class SweepResult:
    """Cartesian sweep outcomes, row order matching itertools.product."""

    param_names: tuple[str, ...]
    rows: tuple[SweepRow, ...]


def sweep(base: CookerParams, env: Environment, initial: CookerState,
          cfg: SolverConfig, grid: Sequence[tuple[ParamSpec, int]], *,
          method: str = METHOD_INTERPOLATE) -> SweepResult:
    """Simulate every point of a cartesian parameter grid.

    Each grid axis is ``steps`` evenly spaced values across its
    parameter's box (a single step collapses to the lower bound).
    Failures at a point are recorded in that row instead of aborting
    the sweep.
    """
    _check(len(grid) >= 1, "sweep needs at least one grid axis")
    total = 1
    axes = []
    for spec, steps in grid:
        _check(isinstance(steps, int) and not isinstance(steps, bool) and steps >= 1,
               f"steps for {spec.name} must be a positive integer, got {steps!r}")
        get_param(base, spec.name)
        axes.append([float(v) for v in np.linspace(spec.lower, spec.upper, steps)])
        total *= steps
    _check(total <= MAX_SWEEP_POINTS,
           f"grid has {total} points, limit is {MAX_SWEEP_POINTS}")

    names = tuple(spec.name for spec, _ in grid)
    rows = []
    for combo in itertools.product(*axes):
        try:
            params = base
            for name, value in zip(names, combo):
                params = set_param(params, name, value)
            result = integrate(params, env, initial, cfg)
            if result.status is Status.STEP_FAILURE:
                rows.append(SweepRow(combo, None, None,
                                     result.samples[-1].state.t_fluid,
                                     "step size underflow"))
                continue
            power = None
            try:
                curve = cooking_power_series(result, params)
                power = standardized_cooking_power(curve, method)
            except ValueError:
                power = None
            rows.append(SweepRow(combo, result.t_boil, power,
                                 result.samples[-1].state.t_fluid, None))
        except (ValueError, OverflowError, FloatingPointError, ZeroDivisionError) as exc:
            rows.append(SweepRow(combo, None, None, float("nan"), str(exc)))
    return SweepResult(param_names=names, rows=tuple(rows))
