"""Cooking-power figures and model-versus-measurement scoring."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .solver import SimulationResult
from .thermal import KELVIN_OFFSET, CookerParams, _check, _finite

# Temperature rise above ambient at which cooking power is standardized.
DELTA_T_REFERENCE = 50.0  # K

METHOD_INTERPOLATE = "interpolate"
METHOD_REGRESSION = "regression"


class ExperimentPoint(NamedTuple):
    time: float                 # s
    t_fluid: float              # K
    uncertainty: float | None   # K, optional measurement uncertainty


@dataclass(frozen=True)
class ExperimentalSeries:
    """Measured fluid-temperature trace."""

    points: tuple[ExperimentPoint, ...]
    t_ambient_ref: float | None = None  # K, ambient reported for the test

    def __post_init__(self) -> None:
        _check(len(self.points) >= 2, "an experimental series needs at least two points")
        for p in self.points:
            _check(_finite(p.time), f"experimental time {p.time!r} is not finite")
            _check(_finite(p.t_fluid) and p.t_fluid > 0.0,
                   f"experimental temperature must be > 0 K, got {p.t_fluid!r}")
            if p.uncertainty is not None:
                _check(_finite(p.uncertainty) and p.uncertainty >= 0.0,
                       f"uncertainty must be >= 0, got {p.uncertainty!r}")
        times = [p.time for p in self.points]
        for a, b in zip(times, times[1:]):
            _check(a < b, f"experimental times must be strictly increasing, got {a} then {b}")

    def times(self) -> np.ndarray:
        return np.array([p.time for p in self.points])

    def t_fluid(self) -> np.ndarray:
        return np.array([p.t_fluid for p in self.points])


class PowerPoint(NamedTuple):
    delta_t: float  # K, fluid rise above ambient
    power: float    # W


@dataclass(frozen=True)
class PowerCurve:
    """Cooking power as a function of the fluid rise above ambient."""

    points: tuple[PowerPoint, ...]

    def __post_init__(self) -> None:
        _check(len(self.points) >= 1, "a power curve needs at least one point")
        for p in self.points:
            _check(_finite(p.delta_t), f"delta_t {p.delta_t!r} is not finite")
            _check(_finite(p.power), f"power {p.power!r} is not finite")

    def delta_t(self) -> np.ndarray:
        return np.array([p.delta_t for p in self.points])

    def power(self) -> np.ndarray:
        return np.array([p.power for p in self.points])


def cooking_power_series(result: SimulationResult,
                         params: CookerParams) -> PowerCurve:
    """Power delivered to the fluid at every sample, paired with the rise
    of the fluid above the ambient temperature at that moment.

    The per-sample power is the sum of the wall/fluid flux terms, which
    equals m_f c_f dT_f/dt by construction of the fluid balance; params
    is accepted so callers can cross-check against that identity.
    """
    _check(len(result.samples) >= 1, "result has no samples")
    del params  # the flux form q8 + q9 is already stored per sample
    points = [
        PowerPoint(s.state.t_fluid - result.env.ambient(s.state.time), s.cooking_power)
        for s in result.samples
    ]
    return PowerCurve(points=tuple(points))


def standardized_cooking_power(curve: PowerCurve,
                               method: str = METHOD_INTERPOLATE,
                               delta_t: float = DELTA_T_REFERENCE) -> float:
    """Cooking power standardized to a fixed rise above ambient.

    method "interpolate" walks the curve in sample order and linearly
    interpolates inside the first segment that brackets the reference
    rise; it raises ValueError when no segment brackets it.  method
    "regression" fits power = a + b * delta_t by least squares over the
    whole curve and evaluates the fit at the reference rise.
    """
    _check(_finite(delta_t), f"delta_t must be finite, got {delta_t!r}")
    d = curve.delta_t()
    p = curve.power()

    if method == METHOD_INTERPOLATE:
        for i in range(len(d) - 1):
            lo, hi = d[i], d[i + 1]
            if (lo - delta_t) * (hi - delta_t) <= 0.0:
                if lo == hi:
                    return float(p[i])
                theta = (delta_t - lo) / (hi - lo)
                return float(p[i] + theta * (p[i + 1] - p[i]))
        if len(d) == 1 and d[0] == delta_t:
            return float(p[0])
        raise ValueError(
            f"power curve does not bracket delta_t = {delta_t} "
            f"(curve spans [{d.min():.3f}, {d.max():.3f}])")

    if method == METHOD_REGRESSION:
        _check(len(d) >= 2, "regression needs at least two curve points")
        if float(np.ptp(d)) == 0.0:
            raise ValueError("regression needs at least two distinct delta_t values")
        slope, intercept = np.polyfit(d, p, 1)
        return float(intercept + slope * delta_t)

    raise ValueError(f"unknown method {method!r}, expected "
                     f"'{METHOD_INTERPOLATE}' or '{METHOD_REGRESSION}'")


def _sim_fluid_celsius_at(result: SimulationResult,
                          times: np.ndarray) -> np.ndarray:
    """Simulated fluid temperature, interpolated at the given times, in C."""
    sim_t = result.times()
    sim_tf = result.t_fluid()
    _check(len(sim_t) >= 2, "simulation needs at least two samples to interpolate")
    if times.min() < sim_t[0] or times.max() > sim_t[-1]:
        raise ValueError(
            f"experimental times [{times.min():.1f}, {times.max():.1f}] s fall outside "
            f"the simulated span [{sim_t[0]:.1f}, {sim_t[-1]:.1f}] s")
    return np.interp(times, sim_t, sim_tf) - KELVIN_OFFSET


def residuals(result: SimulationResult,
              experiment: ExperimentalSeries) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-point comparison arrays (times_s, measured_C, simulated_C)."""
    times = experiment.times()
    measured_c = experiment.t_fluid() - KELVIN_OFFSET
    simulated_c = _sim_fluid_celsius_at(result, times)
    return times, measured_c, simulated_c


def relative_error(result: SimulationResult,
                   experiment: ExperimentalSeries) -> float:
    """Mean absolute percentage error of the simulated fluid temperature
    against the measured one, both in degrees Celsius, evaluated at the
    experimental times (the simulation is linearly interpolated)."""
    _, measured_c, simulated_c = residuals(result, experiment)
    if np.any(measured_c <= 0.0):
        raise ValueError("percentage error is undefined for measured temperatures <= 0 C")
    return float(100.0 * np.mean(np.abs(simulated_c - measured_c) / measured_c))


def compare_power(simulated: float, measured: float) -> float:
    """Percentage difference of a simulated power figure against a
    measured one: 100 * |sim - meas| / meas."""
    _check(_finite(simulated), f"simulated power must be finite, got {simulated!r}")
    _check(_finite(measured) and measured > 0.0,
           f"measured power must be > 0, got {measured!r}")
    return 100.0 * abs(simulated - measured) / measured
