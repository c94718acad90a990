"""Run-configuration files.

A run is described by one JSON document using field-level units that
match how cooker experiments are reported: temperatures in degrees
Celsius, times in minutes, with the unit spelled out in the field name
wherever it is not the SI one.  The loader converts to SI (kelvin,
seconds) at this boundary, applies every model invariant, and rejects
unknown fields so typos cannot silently change a run.  Error messages
carry the dotted path of the offending field.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .solver import SolverConfig
from .thermal import (ConvectionCoeffs, CookerParams, CookerState,
                      Environment, EqualToAmbient, FixedOffset, Geometry,
                      OpticalProps, PiecewiseLinear, Swinbank, ThermalMass,
                      TimeSeries, celsius_to_kelvin, kelvin_to_celsius)


class ConfigError(ValueError):
    """A configuration document that cannot be used."""


_SKY_NAMES = {"swinbank", "equal_to_ambient", "fixed_offset"}


def _reject_constant(token: str) -> float:
    raise ConfigError(f"non-finite JSON constant {token!r} is not allowed")


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) \
        and math.isfinite(value)


_MISSING = object()


class _Section:
    """One JSON object, consumed key by key so leftovers can be rejected."""

    def __init__(self, data: Any, path: str):
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected an object")
        self._data = dict(data)
        self._path = path

    def _pop(self, key: str, required: bool) -> Any:
        if key not in self._data:
            if required:
                raise ConfigError(f"{self._path}.{key}: missing required field")
            return _MISSING
        return self._data.pop(key)

    def number(self, key: str, *, required: bool = True, default: float | None = None,
               minimum: float | None = None, maximum: float | None = None,
               exclusive_min: float | None = None) -> float | None:
        value = self._pop(key, required)
        if value is _MISSING:
            return default
        path = f"{self._path}.{key}"
        if not _is_number(value):
            raise ConfigError(f"{path}: expected a finite number, got {value!r}")
        value = float(value)
        if exclusive_min is not None and value <= exclusive_min:
            raise ConfigError(f"{path}: must be > {exclusive_min}, got {value}")
        if minimum is not None and value < minimum:
            raise ConfigError(f"{path}: must be >= {minimum}, got {value}")
        if maximum is not None and value > maximum:
            raise ConfigError(f"{path}: must be <= {maximum}, got {value}")
        return value

    def string(self, key: str, *, required: bool = True, default: str | None = None,
               choices: set[str] | None = None) -> str | None:
        value = self._pop(key, required)
        if value is _MISSING:
            return default
        path = f"{self._path}.{key}"
        if not isinstance(value, str):
            raise ConfigError(f"{path}: expected a string, got {value!r}")
        if choices is not None and value not in choices:
            raise ConfigError(f"{path}: expected one of {sorted(choices)}, got {value!r}")
        return value

    def section(self, key: str, *, required: bool = True) -> "_Section | None":
        value = self._pop(key, required)
        if value is _MISSING:
            return None
        return _Section(value, f"{self._path}.{key}")

    def series_or_number(self, key: str) -> Any:
        return self._pop(key, True)

    def finish(self) -> None:
        if self._data:
            extra = ", ".join(sorted(self._data))
            raise ConfigError(f"{self._path}: unknown field(s): {extra}")


def _parse_series(raw: Any, path: str, *, convert, minimum: float | None = None,
                  exclusive_min: float | None = None) -> TimeSeries:
    """A field that is either one number or a [[minutes, value], ...] list."""

    def check_range(value: float, where: str) -> float:
        if exclusive_min is not None and value <= exclusive_min:
            raise ConfigError(f"{where}: must be > {exclusive_min}, got {value}")
        if minimum is not None and value < minimum:
            raise ConfigError(f"{where}: must be >= {minimum}, got {value}")
        return value

    if _is_number(raw):
        return convert(check_range(float(raw), path))
    if isinstance(raw, list):
        if not raw:
            raise ConfigError(f"{path}: series needs at least one [minutes, value] pair")
        times_s = []
        values = []
        for i, pair in enumerate(raw):
            where = f"{path}[{i}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise ConfigError(f"{where}: expected a [minutes, value] pair")
            t_min, value = pair
            if not _is_number(t_min):
                raise ConfigError(f"{where}[0]: expected a finite number, got {t_min!r}")
            if not _is_number(value):
                raise ConfigError(f"{where}[1]: expected a finite number, got {value!r}")
            times_s.append(float(t_min) * 60.0)
            values.append(convert(check_range(float(value), f"{where}[1]")))
        for i, (a, b) in enumerate(zip(times_s, times_s[1:])):
            if a >= b:
                raise ConfigError(f"{path}[{i + 1}][0]: series times must be strictly increasing")
        return PiecewiseLinear(times=tuple(times_s), values=tuple(values))
    raise ConfigError(f"{path}: expected a number or a [[minutes, value], ...] series")


def _thermal_mass(section: _Section) -> ThermalMass:
    mass = section.number("mass_kg", exclusive_min=0.0)
    c = section.number("specific_heat", exclusive_min=0.0)
    section.finish()
    return ThermalMass(mass=mass, specific_heat=c)


def _load_cooker(section: _Section) -> CookerParams:
    container = _thermal_mass(section.section("container"))
    reflectors = _thermal_mass(section.section("reflectors"))
    fluid = _thermal_mass(section.section("fluid"))

    optics_sec = section.section("optics")
    optics = OpticalProps(
        alpha_absorber=optics_sec.number("alpha_absorber", minimum=0.0, maximum=1.0),
        alpha_reflector=optics_sec.number("alpha_reflector", minimum=0.0, maximum=1.0),
        eps_absorber=optics_sec.number("eps_absorber", minimum=0.0, maximum=1.0),
        eps_reflector=optics_sec.number("eps_reflector", minimum=0.0, maximum=1.0),
        rho_mirror=optics_sec.number("rho_mirror", minimum=0.0, maximum=1.0),
        mean_reflections=optics_sec.number("mean_reflections", minimum=0.0),
        eta0=optics_sec.number("eta0", minimum=0.0, maximum=1.0),
    )
    optics_sec.finish()

    geometry_sec = section.section("geometry")
    geometry = Geometry(
        area_absorber=geometry_sec.number("area_absorber_m2", exclusive_min=0.0),
        area_collector=geometry_sec.number("area_collector_m2", exclusive_min=0.0),
    )
    geometry_sec.finish()

    conv_sec = section.section("convection")
    convection = ConvectionCoeffs(
        h_abs_ambient=conv_sec.number("h_abs_ambient", minimum=0.0),
        h_abs_interior=conv_sec.number("h_abs_interior", minimum=0.0),
        h_refl_ambient=conv_sec.number("h_refl_ambient", minimum=0.0),
        h_abs_fluid=conv_sec.number("h_abs_fluid", minimum=0.0),
    )
    conv_sec.finish()

    sigma = section.number("sigma", required=False, default=None, exclusive_min=0.0)
    section.finish()

    kwargs = {} if sigma is None else {"sigma": sigma}
    return CookerParams(container=container, reflectors=reflectors, fluid=fluid,
                        optics=optics, geometry=geometry, convection=convection,
                        **kwargs)


def _load_environment(section: _Section) -> Environment:
    ambient = _parse_series(section.series_or_number("ambient_C"),
                            "config.environment.ambient_C",
                            convert=celsius_to_kelvin, exclusive_min=-273.15)
    irradiance = _parse_series(section.series_or_number("irradiance_W_m2"),
                               "config.environment.irradiance_W_m2",
                               convert=float, minimum=0.0)
    sky_name = section.string("sky_model", required=False, default="swinbank",
                              choices=_SKY_NAMES)
    offset = section.number("sky_offset_K", required=False, default=None, minimum=0.0)
    section.finish()

    if sky_name == "fixed_offset":
        if offset is None:
            raise ConfigError("config.environment.sky_offset_K: required when "
                              "sky_model is \"fixed_offset\"")
        sky = FixedOffset(offset_k=offset)
    else:
        if offset is not None:
            raise ConfigError("config.environment.sky_offset_K: only valid when "
                              "sky_model is \"fixed_offset\"")
        sky = Swinbank() if sky_name == "swinbank" else EqualToAmbient()
    return Environment(t_ambient=ambient, irradiance_direct=irradiance, sky_model=sky)


def _load_solver(section: _Section | None) -> SolverConfig:
    if section is None:
        return SolverConfig()
    defaults = SolverConfig()
    rel_tol = section.number("rel_tol", required=False, default=defaults.rel_tol,
                             exclusive_min=0.0)
    abs_tol = section.number("abs_tol_K", required=False, default=defaults.abs_tol,
                             exclusive_min=0.0)
    h_init = section.number("h_init_s", required=False, default=defaults.h_init,
                            exclusive_min=0.0)
    h_max = section.number("h_max_s", required=False, default=defaults.h_max,
                           exclusive_min=0.0)
    t_end_min = section.number("t_end_min", required=False,
                               default=defaults.t_end / 60.0, exclusive_min=0.0)
    boiling_c = section.number("boiling_point_C", required=False,
                               default=kelvin_to_celsius(defaults.boiling_point),
                               exclusive_min=-273.15)
    output_min = section.number("output_every_min", required=False,
                                default=defaults.output_every / 60.0,
                                exclusive_min=0.0)
    section.finish()
    if h_max < h_init:
        raise ConfigError("solver.h_max_s: must be >= solver.h_init_s")
    return SolverConfig(rel_tol=rel_tol, abs_tol=abs_tol, h_init=h_init,
                        h_max=h_max, t_end=t_end_min * 60.0,
                        boiling_point=celsius_to_kelvin(boiling_c),
                        output_every=output_min * 60.0)


def load_config_dict(doc: Any) -> tuple[CookerParams, Environment, SolverConfig, CookerState]:
    """Validate an already-parsed JSON document."""
    root = _Section(doc, "config")
    try:
        params = _load_cooker(root.section("cooker"))
        env = _load_environment(root.section("environment"))
        solver_cfg = _load_solver(root.section("solver", required=False))

        ambient0 = env.ambient(0.0)
        initial_sec = root.section("initial", required=False)
        if initial_sec is None:
            t_cont = t_refl = t_fluid = ambient0
        else:
            def temp(key: str) -> float:
                value = initial_sec.number(key, required=False, default=None,
                                           exclusive_min=-273.15)
                return ambient0 if value is None else celsius_to_kelvin(value)

            t_cont = temp("container_C")
            t_refl = temp("reflector_C")
            t_fluid = temp("fluid_C")
            initial_sec.finish()
        initial = CookerState(time=0.0, t_container=t_cont, t_reflector=t_refl,
                              t_fluid=t_fluid)
        root.finish()
    except ConfigError:
        raise
    except ValueError as exc:
        # Defensive: an invariant enforced by a dataclass rather than the
        # schema walk still surfaces as a config error.
        raise ConfigError(str(exc)) from exc
    return params, env, solver_cfg, initial


def load_config(path: str | Path) -> tuple[CookerParams, Environment, SolverConfig, CookerState]:
    """Load and validate a run configuration from a JSON file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{path} is not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"parse error at line {exc.lineno} column {exc.colno}: "
                          f"{exc.msg}") from exc
    return load_config_dict(doc)


def _dump_series(series: TimeSeries, *, convert) -> Any:
    if isinstance(series, PiecewiseLinear):
        return [[t / 60.0, convert(v)] for t, v in zip(series.times, series.values)]
    return convert(series)


def dump_config(params: CookerParams, env: Environment, cfg: SolverConfig,
                initial: CookerState) -> dict:
    """Serialize run components back into the boundary-unit document form.

    Loading the returned document reproduces the same run up to floating
    point unit-conversion rounding.
    """
    if isinstance(env.sky_model, Swinbank):
        sky_fields: dict[str, Any] = {"sky_model": "swinbank"}
    elif isinstance(env.sky_model, EqualToAmbient):
        sky_fields = {"sky_model": "equal_to_ambient"}
    else:
        sky_fields = {"sky_model": "fixed_offset",
                      "sky_offset_K": env.sky_model.offset_k}

    return {
        "cooker": {
            "container": {"mass_kg": params.container.mass,
                          "specific_heat": params.container.specific_heat},
            "reflectors": {"mass_kg": params.reflectors.mass,
                           "specific_heat": params.reflectors.specific_heat},
            "fluid": {"mass_kg": params.fluid.mass,
                      "specific_heat": params.fluid.specific_heat},
            "optics": {
                "alpha_absorber": params.optics.alpha_absorber,
                "alpha_reflector": params.optics.alpha_reflector,
                "eps_absorber": params.optics.eps_absorber,
                "eps_reflector": params.optics.eps_reflector,
                "rho_mirror": params.optics.rho_mirror,
                "mean_reflections": params.optics.mean_reflections,
                "eta0": params.optics.eta0,
            },
            "geometry": {"area_absorber_m2": params.geometry.area_absorber,
                         "area_collector_m2": params.geometry.area_collector},
            "convection": {
                "h_abs_ambient": params.convection.h_abs_ambient,
                "h_abs_interior": params.convection.h_abs_interior,
                "h_refl_ambient": params.convection.h_refl_ambient,
                "h_abs_fluid": params.convection.h_abs_fluid,
            },
            "sigma": params.sigma,
        },
        "environment": {
            "ambient_C": _dump_series(env.t_ambient, convert=kelvin_to_celsius),
            "irradiance_W_m2": _dump_series(env.irradiance_direct, convert=float),
            **sky_fields,
        },
        "solver": {
            "rel_tol": cfg.rel_tol,
            "abs_tol_K": cfg.abs_tol,
            "h_init_s": cfg.h_init,
            "h_max_s": cfg.h_max,
            "t_end_min": cfg.t_end / 60.0,
            "boiling_point_C": kelvin_to_celsius(cfg.boiling_point),
            "output_every_min": cfg.output_every / 60.0,
        },
        "initial": {
            "container_C": kelvin_to_celsius(initial.t_container),
            "reflector_C": kelvin_to_celsius(initial.t_reflector),
            "fluid_C": kelvin_to_celsius(initial.t_fluid),
        },
    }


def save_config(params: CookerParams, env: Environment, cfg: SolverConfig,
                initial: CookerState, path: str | Path) -> None:
    doc = dump_config(params, env, cfg, initial)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
