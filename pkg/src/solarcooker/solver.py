"""Time integration of the cooker model.

Two integrators are provided:

* an adaptive, embedded Runge-Kutta 5(4) pair (the Dormand-Prince
  coefficients) with a PI step-size controller, used for production runs,
* classical fixed-step RK4, used for convergence studies and as an
  independent cross-check of the adaptive path.

Both are plain explicit methods so that a run is reproducible bit for
bit on a given platform.  Output samples are emitted on a fixed cadence
from a cubic Hermite interpolant over each accepted step; the boiling
stop event is located on the same interpolant by bisection.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .thermal import (CookerParams, CookerState, Environment, FluxBreakdown,
                      ReflectedFn, compute_fluxes, make_rhs, _check, _finite)

# Dormand-Prince 5(4) tableau.  The seventh stage is evaluated at the
# fifth-order solution (FSAL), so an accepted step costs six fresh
# right-hand-side evaluations.
_DP_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_DP_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
     -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
     11.0 / 84.0),
)
# Difference between the 5th- and 4th-order weights, used for the error
# estimate.
_DP_ERR = (71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0,
           -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)

# PI controller settings (order-5 error estimate).
_SAFETY = 0.9
_PI_ALPHA = 0.7 / 5.0
_PI_BETA = 0.4 / 5.0
_FAC_MIN = 0.2
_FAC_MAX = 5.0

_RHS_ERRORS = (ValueError, OverflowError, FloatingPointError, ZeroDivisionError)


class Status(enum.Enum):
    """How a run ended."""

    REACHED_END = "reached_end"
    BOILED = "boiled"
    STEP_FAILURE = "step_failure"


@dataclass(frozen=True)
class SolverConfig:
    """Integration settings.  Times in seconds, temperatures in kelvin."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-10       # K
    h_init: float = 1.0          # s
    h_max: float = 60.0          # s
    t_end: float = 10800.0       # s
    boiling_point: float = 373.15  # K, stop event on the fluid node
    output_every: float = 60.0   # s, sample cadence

    def __post_init__(self) -> None:
        _check(_finite(self.rel_tol) and self.rel_tol > 0.0,
               f"rel_tol must be > 0, got {self.rel_tol!r}")
        _check(_finite(self.abs_tol) and self.abs_tol > 0.0,
               f"abs_tol must be > 0, got {self.abs_tol!r}")
        _check(_finite(self.h_init) and self.h_init > 0.0,
               f"h_init must be > 0, got {self.h_init!r}")
        _check(_finite(self.h_max) and self.h_max >= self.h_init,
               f"h_max must be >= h_init, got {self.h_max!r}")
        _check(_finite(self.t_end) and self.t_end > 0.0,
               f"t_end must be > 0, got {self.t_end!r}")
        _check(_finite(self.boiling_point) and self.boiling_point > 0.0,
               f"boiling_point must be > 0 K, got {self.boiling_point!r}")
        _check(_finite(self.output_every) and self.output_every > 0.0,
               f"output_every must be > 0, got {self.output_every!r}")


class SolverStats(NamedTuple):
    """Step bookkeeping of one run."""

    accepted: int
    rejected: int
    rhs_evals: int


class Sample(NamedTuple):
    """One output row of a simulation."""

    state: CookerState
    fluxes: FluxBreakdown
    cooking_power: float  # W, q8 + q9 delivered to the fluid


@dataclass(frozen=True)
class SimulationResult:
    """Sampled trajectory plus run metadata."""

    samples: tuple[Sample, ...]
    status: Status
    t_boil: float | None       # s, set when status is BOILED
    stats: SolverStats
    params: CookerParams
    env: Environment

    def __post_init__(self) -> None:
        _check(len(self.samples) >= 1, "a result needs at least one sample")
        times = [s.state.time for s in self.samples]
        for a, b in zip(times, times[1:]):
            _check(a < b, f"sample times must be strictly increasing, got {a} then {b}")
        if self.status is Status.BOILED:
            _check(self.t_boil is not None, "BOILED result must carry t_boil")

    def times(self) -> np.ndarray:
        """Sample times in seconds."""
        return np.array([s.state.time for s in self.samples])

    def t_fluid(self) -> np.ndarray:
        return np.array([s.state.t_fluid for s in self.samples])

    def t_container(self) -> np.ndarray:
        return np.array([s.state.t_container for s in self.samples])

    def t_reflector(self) -> np.ndarray:
        return np.array([s.state.t_reflector for s in self.samples])

    def power(self) -> np.ndarray:
        return np.array([s.cooking_power for s in self.samples])


class SolveTrace(NamedTuple):
    """Raw output of the generic solvers."""

    times: np.ndarray    # shape (m,)
    states: np.ndarray   # shape (m, n)
    status: Status
    t_event: float | None
    stats: SolverStats


RhsFn = Callable[[float, np.ndarray], np.ndarray]


def _hermite(theta: float, y0: np.ndarray, y1: np.ndarray,
             f0: np.ndarray, f1: np.ndarray, h: float) -> np.ndarray:
    """Cubic Hermite interpolant over one step, theta in [0, 1]."""
    d = y1 - y0
    return ((1.0 - theta) * y0 + theta * y1
            + theta * (theta - 1.0) * ((1.0 - 2.0 * theta) * d
                                       + (theta - 1.0) * h * f0
                                       + theta * h * f1))


def _dp54_step(f: RhsFn, t: float, y: np.ndarray, h: float,
               k1: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One trial step.  Returns (y_new, k_last, error_estimate)."""
    k = [k1]
    for i in range(1, 6):
        yi = y + h * sum(a * kj for a, kj in zip(_DP_A[i], k))
        k.append(f(t + _DP_C[i] * h, yi))
    y_new = y + h * sum(a * kj for a, kj in zip(_DP_A[6], k))
    k.append(f(t + h, y_new))
    err = h * sum(e * kj for e, kj in zip(_DP_ERR, k))
    return y_new, k[6], err


def solve_adaptive(f: RhsFn, t0: float, y0: Sequence[float], t_end: float, *,
                   rel_tol: float, abs_tol: float, h_init: float, h_max: float,
                   output_every: float, event_index: int | None = None,
                   event_value: float = math.inf, event_time_tol: float = 0.1,
                   min_step: float = 1e-6) -> SolveTrace:
    """Adaptive Dormand-Prince 5(4) integration of y' = f(t, y).

    A step is accepted when the embedded error estimate satisfies
    |err_i| <= abs_tol + rel_tol * |y_i| componentwise.  Samples are
    emitted at ``t0 + k * output_every`` and at the final time.  When
    ``event_index`` is given, integration stops as soon as that state
    component reaches ``event_value`` from below; the crossing time is
    located by bisection on the step interpolant to within
    ``event_time_tol`` seconds and emitted as the last sample.
    """
    y = np.array(y0, dtype=float)
    t = float(t0)
    n_eval = 0
    n_accept = 0
    n_reject = 0

    out_times = [t]
    out_states = [y.copy()]

    def finish(status: Status, t_event: float | None = None) -> SolveTrace:
        return SolveTrace(np.array(out_times), np.array(out_states), status,
                          t_event, SolverStats(n_accept, n_reject, n_eval))

    if event_index is not None and y[event_index] >= event_value:
        return finish(Status.BOILED, t)

    k1 = f(t, y)
    n_eval += 1
    h = min(h_init, h_max, t_end - t)
    err_old = 1.0
    next_out = t0 + output_every
    time_eps = 1e-9 * max(1.0, abs(t_end))

    while t < t_end - time_eps:
        if t + h >= t_end:
            h = t_end - t

        try:
            y_new, k_last, err_vec = _dp54_step(f, t, y, h, k1)
            n_eval += 6
            scale = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
            err_norm = float(np.max(np.abs(err_vec) / scale))
            if not math.isfinite(err_norm):
                err_norm = math.inf
        except _RHS_ERRORS:
            err_norm = math.inf

        if err_norm > 1.0:
            n_reject += 1
            h *= max(_FAC_MIN, _SAFETY * err_norm ** -0.2) if math.isfinite(err_norm) else _FAC_MIN
            if h < min_step:
                return finish(Status.STEP_FAILURE)
            continue

        n_accept += 1
        t_new = t + h

        t_event = None
        if event_index is not None and y_new[event_index] >= event_value:
            lo, hi = 0.0, 1.0
            while (hi - lo) * h > event_time_tol:
                mid = 0.5 * (lo + hi)
                y_mid = _hermite(mid, y, y_new, k1, k_last, h)
                if y_mid[event_index] >= event_value:
                    hi = mid
                else:
                    lo = mid
            t_event = t + hi * h
            y_event = _hermite(hi, y, y_new, k1, k_last, h)

        emit_until = t_event if t_event is not None else t_new + time_eps
        while next_out <= emit_until:
            if t_event is not None and next_out > t_event - time_eps:
                break
            if abs(next_out - t_new) <= time_eps:
                emit_t, emit_y = next_out, y_new.copy()
            else:
                theta = (next_out - t) / h
                emit_t = next_out
                emit_y = _hermite(theta, y, y_new, k1, k_last, h)
            if emit_t > out_times[-1]:
                out_times.append(emit_t)
                out_states.append(emit_y)
            next_out += output_every

        if t_event is not None:
            if t_event - out_times[-1] > time_eps:
                out_times.append(t_event)
                out_states.append(y_event)
            return finish(Status.BOILED, t_event)

        t = t_new
        y = y_new
        k1 = k_last

        if err_norm == 0.0:
            factor = _FAC_MAX
        else:
            factor = _SAFETY * err_norm ** -_PI_ALPHA * err_old ** _PI_BETA
        h = min(h * min(_FAC_MAX, max(_FAC_MIN, factor)), h_max)
        err_old = max(err_norm, 1e-10)
        if h < min_step:
            return finish(Status.STEP_FAILURE)

    if t_end - out_times[-1] > time_eps:
        out_times.append(t_end)
        out_states.append(y.copy())
    return finish(Status.REACHED_END)


def solve_fixed_rk4(f: RhsFn, t0: float, y0: Sequence[float], t_end: float,
                    h: float, event_index: int | None = None,
                    event_value: float = math.inf) -> SolveTrace:
    """Classical fixed-step RK4.  Every step end is a sample; an event is
    reported at the first sample at or past the crossing, without
    interpolation."""
    _check(_finite(h) and h > 0.0, f"step size must be > 0, got {h!r}")
    _check(t_end > t0, "t_end must be past t0")

    y = np.array(y0, dtype=float)
    t = float(t0)
    n_eval = 0
    n_steps = 0

    out_times = [t]
    out_states = [y.copy()]

    if event_index is not None and y[event_index] >= event_value:
        return SolveTrace(np.array(out_times), np.array(out_states),
                          Status.BOILED, t, SolverStats(0, 0, 0))

    total = t_end - t0
    n_full = int(math.floor(total / h + 1e-9))
    step_sizes = [h] * n_full
    remainder = total - n_full * h
    if remainder > 1e-9 * max(1.0, abs(t_end)):
        step_sizes.append(remainder)

    for i, hi in enumerate(step_sizes):
        k1 = f(t, y)
        k2 = f(t + 0.5 * hi, y + 0.5 * hi * k1)
        k3 = f(t + 0.5 * hi, y + 0.5 * hi * k2)
        k4 = f(t + hi, y + hi * k3)
        y = y + (hi / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        n_eval += 4
        n_steps += 1
        t = t_end if i == len(step_sizes) - 1 else t0 + (i + 1) * h
        out_times.append(t)
        out_states.append(y.copy())
        if event_index is not None and y[event_index] >= event_value:
            return SolveTrace(np.array(out_times), np.array(out_states),
                              Status.BOILED, t, SolverStats(n_steps, 0, n_eval))

    return SolveTrace(np.array(out_times), np.array(out_states),
                      Status.REACHED_END, None, SolverStats(n_steps, 0, n_eval))


# ---------------------------------------------------------------------------
# cooker-level wrappers
# ---------------------------------------------------------------------------


def _build_result(trace: SolveTrace, params: CookerParams, env: Environment,
                  initial: CookerState,
                  reflected_fn: ReflectedFn | None) -> SimulationResult:
    samples = []
    for i, (t, y) in enumerate(zip(trace.times, trace.states)):
        if i == 0:
            state = initial
        else:
            state = CookerState(time=float(t), t_container=float(y[0]),
                                t_reflector=float(y[1]), t_fluid=float(y[2]))
        fx = compute_fluxes(state, params, env, reflected_fn)
        samples.append(Sample(state, fx, fx.q8_conv + fx.q9_rad))
    return SimulationResult(samples=tuple(samples), status=trace.status,
                            t_boil=trace.t_event, stats=trace.stats,
                            params=params, env=env)


def _check_initial(initial: CookerState) -> None:
    _check(initial.time == 0.0,
           f"initial state must be at time 0, got {initial.time!r}")


def integrate(params: CookerParams, env: Environment, initial: CookerState,
              cfg: SolverConfig,
              reflected_fn: ReflectedFn | None = None) -> SimulationResult:
    """Run the adaptive solver on the cooker system.

    The run stops at ``cfg.t_end`` or when the fluid reaches
    ``cfg.boiling_point``, whichever comes first.
    """
    _check_initial(initial)
    f = make_rhs(params, env, reflected_fn)
    trace = solve_adaptive(
        f, 0.0,
        (initial.t_container, initial.t_reflector, initial.t_fluid),
        cfg.t_end,
        rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol,
        h_init=cfg.h_init, h_max=cfg.h_max,
        output_every=cfg.output_every,
        event_index=2, event_value=cfg.boiling_point,
    )
    return _build_result(trace, params, env, initial, reflected_fn)


def integrate_fixed_step(params: CookerParams, env: Environment,
                         initial: CookerState, cfg: SolverConfig, h: float,
                         reflected_fn: ReflectedFn | None = None) -> SimulationResult:
    """Run classical RK4 with constant step h on the cooker system."""
    _check_initial(initial)
    f = make_rhs(params, env, reflected_fn)
    trace = solve_fixed_rk4(
        f, 0.0,
        (initial.t_container, initial.t_reflector, initial.t_fluid),
        cfg.t_end, h,
        event_index=2, event_value=cfg.boiling_point,
    )
    return _build_result(trace, params, env, initial, reflected_fn)
