"""Lumped-parameter thermal model of a concentrating (CPC-type) solar cooker.

The cooker is reduced to three isothermal nodes: the absorber container
(the pot), the reflector sheets, and the working fluid inside the pot.
Each node temperature follows an energy balance of the form

    m c dT/dt = sum of heat fluxes into the node        [W]

with the flux terms

    q1   solar radiation collected by the container (direct plus the
         share concentrated by the reflectors)
    q2   thermal radiation, container to sky
    q3   convection, container to the outside air
    q3b  convection, container to the air trapped inside the cooker
         (that air is taken at the container/reflector mean temperature)
    q4   thermal radiation, container to the reflector sheets
    q5   solar radiation absorbed by the reflector sheets
    q6   convection, reflectors to the outside air
    q7   thermal radiation, reflectors to sky
    q8   convection between the container wall and the fluid, written
         against the wall/fluid mean temperature
    q9   thermal radiation from the container wall into the fluid

and the balances

    container:  m_r  c_r  dT_r/dt  = q1 - q2 - q3 - q4 - q8 - q9 - q3b
    reflector:  m_rf c_rf dT_rf/dt = q5 + q4 - q6 - q7 + q3b
    fluid:      m_f  c_f  dT_f/dt  = q8 + q9

The q8 sign convention above is kept exactly as the model defines it:
the term is proportional to (T_mean - T_container), so it is negative
while the container is hotter than the fluid and the fluid then gains
heat through q9 alone.  Calibrated wall/fluid film coefficients are
therefore small.

Everything in this module is SI: seconds, kelvin, kilograms, joules,
watts, square metres.  The minutes / degrees-Celsius convention used by
configuration files and reports is converted at the I/O boundary only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

KELVIN_OFFSET = 273.15

# Radiation constant used consistently by every radiative flux term.
STEFAN_BOLTZMANN = 5.669e-8  # W/(m^2 K^4)

# Swinbank-style clear-sky correlation constant, T_sky = C * T_amb**1.5.
SWINBANK_COEFF = 0.0552  # K^(-1/2)


def celsius_to_kelvin(t_celsius: float) -> float:
    """Exact unit shift, no scaling involved."""
    return t_celsius + KELVIN_OFFSET


def kelvin_to_celsius(t_kelvin: float) -> float:
    return t_kelvin - KELVIN_OFFSET


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def _finite(value: float) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


# ---------------------------------------------------------------------------
# parameter blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThermalMass:
    """Heat capacity of one lumped node."""

    mass: float           # kg
    specific_heat: float  # J/(kg K)

    def __post_init__(self) -> None:
        _check(_finite(self.mass) and self.mass > 0.0,
               f"mass must be a positive finite number, got {self.mass!r}")
        _check(_finite(self.specific_heat) and self.specific_heat > 0.0,
               f"specific_heat must be a positive finite number, got {self.specific_heat!r}")

    @property
    def heat_capacity(self) -> float:
        """Lumped heat capacity m*c in J/K."""
        return self.mass * self.specific_heat


@dataclass(frozen=True)
class OpticalProps:
    """Solar and infrared surface properties of absorber and reflectors."""

    alpha_absorber: float   # solar absorptance of the container surface
    alpha_reflector: float  # solar absorptance of the reflector sheets
    eps_absorber: float     # infrared emittance of the container surface
    eps_reflector: float    # infrared emittance of the reflector sheets
    rho_mirror: float       # specular reflectance of the mirror material
    mean_reflections: float  # average number of bounces a concentrated ray takes
    eta0: float             # geometric intercept efficiency of the concentrator

    def __post_init__(self) -> None:
        for name in ("alpha_absorber", "alpha_reflector", "eps_absorber",
                     "eps_reflector", "rho_mirror", "eta0"):
            value = getattr(self, name)
            _check(_finite(value) and 0.0 <= value <= 1.0,
                   f"{name} must lie in [0, 1], got {value!r}")
        _check(_finite(self.mean_reflections) and self.mean_reflections >= 0.0,
               f"mean_reflections must be >= 0, got {self.mean_reflections!r}")


@dataclass(frozen=True)
class Geometry:
    """Exchange areas of the two solid nodes."""

    area_absorber: float   # m^2, container surface taking part in exchange
    area_collector: float  # m^2, reflector sheet / aperture area

    def __post_init__(self) -> None:
        _check(_finite(self.area_absorber) and self.area_absorber > 0.0,
               f"area_absorber must be > 0, got {self.area_absorber!r}")
        _check(_finite(self.area_collector) and self.area_collector > 0.0,
               f"area_collector must be > 0, got {self.area_collector!r}")


@dataclass(frozen=True)
class ConvectionCoeffs:
    """Film coefficients for the four convective paths, W/(m^2 K)."""

    h_abs_ambient: float   # container surface to outside air
    h_abs_interior: float  # container surface to the air inside the cooker
    h_refl_ambient: float  # reflector sheets to outside air
    h_abs_fluid: float     # container wall to the fluid

    def __post_init__(self) -> None:
        for name in ("h_abs_ambient", "h_abs_interior", "h_refl_ambient", "h_abs_fluid"):
            value = getattr(self, name)
            _check(_finite(value) and value >= 0.0,
                   f"{name} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class CookerParams:
    """Complete parameter set of the three-node model."""

    container: ThermalMass
    reflectors: ThermalMass
    fluid: ThermalMass
    optics: OpticalProps
    geometry: Geometry
    convection: ConvectionCoeffs
    sigma: float = STEFAN_BOLTZMANN  # W/(m^2 K^4), overridable for tests

    def __post_init__(self) -> None:
        _check(_finite(self.sigma) and self.sigma > 0.0,
               f"sigma must be > 0, got {self.sigma!r}")


# ---------------------------------------------------------------------------
# environment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Swinbank:
    """Clear-sky model: T_sky = 0.0552 * T_amb**1.5 (kelvin in, kelvin out)."""


@dataclass(frozen=True)
class EqualToAmbient:
    """Sky temperature pinned to the ambient temperature."""


@dataclass(frozen=True)
class FixedOffset:
    """Sky temperature a constant number of kelvin below ambient."""

    offset_k: float  # K, subtracted from ambient

    def __post_init__(self) -> None:
        _check(_finite(self.offset_k) and self.offset_k >= 0.0,
               f"offset_k must be >= 0, got {self.offset_k!r}")


SkyModel = Union[Swinbank, EqualToAmbient, FixedOffset]


@dataclass(frozen=True)
class PiecewiseLinear:
    """Piecewise-linear time series, clamped to its end values outside the
    sampled interval."""

    times: tuple[float, ...]   # s, strictly increasing
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        _check(len(self.times) >= 1, "series needs at least one sample")
        _check(len(self.times) == len(self.values),
               "times and values must have the same length")
        for t, v in zip(self.times, self.values):
            _check(_finite(t), f"series time {t!r} is not finite")
            _check(_finite(v), f"series value {v!r} is not finite")
        for a, b in zip(self.times, self.times[1:]):
            _check(a < b, f"series times must be strictly increasing, got {a} then {b}")
        object.__setattr__(self, "_t", np.asarray(self.times, dtype=float))
        object.__setattr__(self, "_v", np.asarray(self.values, dtype=float))

    def __call__(self, t: float) -> float:
        return float(np.interp(t, self._t, self._v))

    def min_value(self) -> float:
        return min(self.values)

    def max_value(self) -> float:
        return max(self.values)


TimeSeries = Union[float, PiecewiseLinear]


def _series_min(series: TimeSeries) -> float:
    return series.min_value() if isinstance(series, PiecewiseLinear) else series


@dataclass(frozen=True)
class Environment:
    """Ambient driving conditions seen by the cooker."""

    t_ambient: TimeSeries          # K, constant or piecewise-linear in time
    irradiance_direct: TimeSeries  # W/m^2, direct normal irradiance
    sky_model: SkyModel = Swinbank()

    def __post_init__(self) -> None:
        if isinstance(self.t_ambient, PiecewiseLinear):
            _check(self.t_ambient.min_value() > 0.0,
                   "ambient temperature series must stay above 0 K")
        else:
            _check(_finite(self.t_ambient) and self.t_ambient > 0.0,
                   f"t_ambient must be > 0 K, got {self.t_ambient!r}")
        if isinstance(self.irradiance_direct, PiecewiseLinear):
            _check(self.irradiance_direct.min_value() >= 0.0,
                   "irradiance series must be >= 0 everywhere")
        else:
            _check(_finite(self.irradiance_direct) and self.irradiance_direct >= 0.0,
                   f"irradiance_direct must be >= 0, got {self.irradiance_direct!r}")
        _check(isinstance(self.sky_model, (Swinbank, EqualToAmbient, FixedOffset)),
               f"unknown sky model {self.sky_model!r}")

    def ambient(self, t: float) -> float:
        """Ambient air temperature at time t, in K."""
        ta = self.t_ambient
        return ta(t) if isinstance(ta, PiecewiseLinear) else ta

    def irradiance(self, t: float) -> float:
        """Direct irradiance at time t, in W/m^2."""
        g = self.irradiance_direct
        return g(t) if isinstance(g, PiecewiseLinear) else g

    def sky(self, t: float) -> float:
        """Effective sky temperature at time t, in K."""
        return sky_temperature(self.ambient(t), self.sky_model)


# ---------------------------------------------------------------------------
# state and flux breakdown
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CookerState:
    """Instantaneous state of the three nodes."""

    time: float         # s
    t_container: float  # K
    t_reflector: float  # K
    t_fluid: float      # K

    def __post_init__(self) -> None:
        _check(_finite(self.time), f"time must be finite, got {self.time!r}")
        for name in ("t_container", "t_reflector", "t_fluid"):
            value = getattr(self, name)
            _check(_finite(value) and value > 0.0,
                   f"{name} must be a finite temperature above 0 K, got {value!r}")


_FLUX_FIELDS = ("q1_rad", "q2_rad", "q3_conv", "q3_conv2", "q4_rad", "q5_rad",
                "q6_conv", "q7_rad", "q8_conv", "q9_rad",
                "t_int2", "t_inte", "irradiance_reflected", "t_sky")


@dataclass(frozen=True)
class FluxBreakdown:
    """All heat-flux terms of one evaluation, in W, plus the auxiliary
    temperatures and the concentrated irradiance that produced them."""

    q1_rad: float    # solar gain of the container (direct + concentrated)
    q2_rad: float    # container -> sky radiation
    q3_conv: float   # container -> outside air convection
    q3_conv2: float  # container -> interior air convection
    q4_rad: float    # container -> reflector radiation
    q5_rad: float    # solar gain of the reflectors
    q6_conv: float   # reflectors -> outside air convection
    q7_rad: float    # reflectors -> sky radiation
    q8_conv: float   # wall/fluid convective term (model sign convention)
    q9_rad: float    # container -> fluid radiation
    t_int2: float    # K, interior air temperature (container/reflector mean)
    t_inte: float    # K, wall film temperature (container/fluid mean)
    irradiance_reflected: float  # W/m^2 arriving via the reflectors
    t_sky: float     # K, sky temperature used

    def __post_init__(self) -> None:
        for name in _FLUX_FIELDS:
            _check(math.isfinite(getattr(self, name)),
                   f"flux term {name} is not finite")


# ---------------------------------------------------------------------------
# model functions
# ---------------------------------------------------------------------------


def sky_temperature(t_ambient: float, sky_model: SkyModel) -> float:
    """Effective sky temperature for a given ambient temperature.

    Parameters
    ----------
    t_ambient : float
        Ambient air temperature in K, must be positive.
    sky_model : SkyModel
        One of Swinbank, EqualToAmbient or FixedOffset.
    """
    _check(_finite(t_ambient) and t_ambient > 0.0,
           f"t_ambient must be > 0 K, got {t_ambient!r}")
    if isinstance(sky_model, Swinbank):
        return SWINBANK_COEFF * t_ambient ** 1.5
    if isinstance(sky_model, EqualToAmbient):
        return t_ambient
    if isinstance(sky_model, FixedOffset):
        return t_ambient - sky_model.offset_k
    raise ValueError(f"unknown sky model {sky_model!r}")


def reflected_irradiance(i_direct: float, optics: OpticalProps) -> float:
    """Irradiance concentrated onto the absorber by the reflector field.

    The direct beam is scaled by the intercept efficiency and by the
    mirror reflectance raised to the mean number of bounces:

        I_R = eta0 * rho_mirror**mean_reflections * I_D
    """
    _check(_finite(i_direct) and i_direct >= 0.0,
           f"i_direct must be >= 0, got {i_direct!r}")
    return optics.eta0 * optics.rho_mirror ** optics.mean_reflections * i_direct


ReflectedFn = Callable[[float, OpticalProps], float]


def compute_fluxes(state: CookerState, params: CookerParams, env: Environment,
                   reflected_fn: ReflectedFn | None = None) -> FluxBreakdown:
    """Evaluate every heat-flux term of the model at one state.

    Parameters
    ----------
    state : CookerState
        Node temperatures (K) and the time used to sample the environment.
    params, env :
        Model parameters and driving conditions.
    reflected_fn : callable, optional
        Replacement for :func:`reflected_irradiance`, mainly so tests can
        pin the concentrated irradiance to a constant.
    """
    t_amb = env.ambient(state.time)
    i_direct = env.irradiance(state.time)
    t_sky = sky_temperature(t_amb, env.sky_model)
    i_reflected = (reflected_fn or reflected_irradiance)(i_direct, params.optics)

    optics = params.optics
    conv = params.convection
    sigma = params.sigma
    a_r = params.geometry.area_absorber
    a_rf = params.geometry.area_collector

    t_r = state.t_container
    t_rf = state.t_reflector
    t_f = state.t_fluid
    t_r4 = t_r ** 4
    t_rf4 = t_rf ** 4
    t_f4 = t_f ** 4
    t_sky4 = t_sky ** 4

    t_int2 = 0.5 * (t_r + t_rf)
    t_inte = 0.5 * (t_r + t_f)

    return FluxBreakdown(
        q1_rad=a_r * optics.alpha_absorber * i_direct + a_rf * i_reflected,
        q2_rad=a_r * optics.eps_absorber * sigma * (t_r4 - t_sky4),
        q3_conv=a_r * conv.h_abs_ambient * (t_r - t_amb),
        q3_conv2=a_r * conv.h_abs_interior * (t_r - t_int2),
        q4_rad=a_r * optics.eps_absorber * sigma * (t_r4 - t_rf4),
        q5_rad=a_rf * optics.alpha_reflector * i_direct,
        q6_conv=a_rf * conv.h_refl_ambient * (t_rf - t_amb),
        q7_rad=a_rf * optics.eps_reflector * sigma * (t_rf4 - t_sky4),
        q8_conv=a_r * conv.h_abs_fluid * (t_inte - t_r),
        q9_rad=a_r * optics.eps_absorber * sigma * (t_r4 - t_f4),
        t_int2=t_int2,
        t_inte=t_inte,
        irradiance_reflected=i_reflected,
        t_sky=t_sky,
    )


def rhs(state: CookerState, params: CookerParams, env: Environment,
        reflected_fn: ReflectedFn | None = None) -> tuple[float, float, float]:
    """Temperature rates (dT_container, dT_reflector, dT_fluid) in K/s."""
    fx = compute_fluxes(state, params, env, reflected_fn)
    d_container = (fx.q1_rad - fx.q2_rad - fx.q3_conv - fx.q4_rad
                   - fx.q8_conv - fx.q9_rad - fx.q3_conv2) / params.container.heat_capacity
    d_reflector = (fx.q5_rad + fx.q4_rad - fx.q6_conv - fx.q7_rad
                   + fx.q3_conv2) / params.reflectors.heat_capacity
    d_fluid = (fx.q8_conv + fx.q9_rad) / params.fluid.heat_capacity
    return (d_container, d_reflector, d_fluid)


def make_rhs(params: CookerParams, env: Environment,
             reflected_fn: ReflectedFn | None = None) -> Callable[[float, np.ndarray], np.ndarray]:
    """Vector right-hand side f(t, y) -> dy/dt for the integrators, with the
    state ordered (T_container, T_reflector, T_fluid)."""

    def f(t: float, y: np.ndarray) -> np.ndarray:
        state = CookerState(time=float(t), t_container=float(y[0]),
                            t_reflector=float(y[1]), t_fluid=float(y[2]))
        return np.asarray(rhs(state, params, env, reflected_fn), dtype=float)

    return f
