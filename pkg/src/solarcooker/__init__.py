"""Lumped-parameter thermal model of a CPC-type concentrating solar cooker.

The package couples three heat balances (absorber container, reflector
bank, working fluid) through radiative, convective, and optical exchange
terms, integrates them with an adaptive Runge-Kutta scheme, and layers
cooking-power metrics, experiment scoring, parameter sweeps, and simplex
calibration on top.  See the README for the JSON configuration schema
and the CLI surface.
"""

from .config import ConfigError, dump_config, load_config, load_config_dict, save_config
from .dataio import (DataError, load_experimental_csv, write_power_csv,
                     write_residuals_csv, write_result_csv, write_sweep_csv)
from .fitting import (CalibrationResult, ParamSpec, SweepResult, SweepRow,
                      calibrate, get_param, set_param, sweep)
from .metrics import (DELTA_T_REFERENCE, METHOD_INTERPOLATE, METHOD_REGRESSION,
                      ExperimentalSeries, ExperimentPoint, PowerCurve,
                      PowerPoint, compare_power, cooking_power_series,
                      relative_error, residuals, standardized_cooking_power)
from .solver import (SimulationResult, SolverConfig, SolverStats, Status,
                     integrate, integrate_fixed_step, solve_adaptive,
                     solve_fixed_rk4)
from .thermal import (KELVIN_OFFSET, STEFAN_BOLTZMANN, ConvectionCoeffs,
                      CookerParams, CookerState, Environment, EqualToAmbient,
                      FixedOffset, FluxBreakdown, Geometry, OpticalProps,
                      PiecewiseLinear, Swinbank, ThermalMass,
                      celsius_to_kelvin, compute_fluxes, kelvin_to_celsius,
                      make_rhs, reflected_irradiance, rhs, sky_temperature)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # thermal
    "KELVIN_OFFSET", "STEFAN_BOLTZMANN", "ThermalMass", "OpticalProps",
    "Geometry", "ConvectionCoeffs", "CookerParams", "Swinbank",
    "EqualToAmbient", "FixedOffset", "PiecewiseLinear", "Environment",
    "CookerState", "FluxBreakdown", "celsius_to_kelvin", "kelvin_to_celsius",
    "sky_temperature", "reflected_irradiance", "compute_fluxes", "rhs",
    "make_rhs",
    # solver
    "SolverConfig", "SolverStats", "Status", "SimulationResult",
    "solve_adaptive", "solve_fixed_rk4", "integrate", "integrate_fixed_step",
    # metrics
    "DELTA_T_REFERENCE", "METHOD_INTERPOLATE", "METHOD_REGRESSION",
    "ExperimentPoint", "ExperimentalSeries", "PowerPoint", "PowerCurve",
    "cooking_power_series", "standardized_cooking_power", "residuals",
    "relative_error", "compare_power",
    # fitting
    "ParamSpec", "CalibrationResult", "SweepRow", "SweepResult",
    "get_param", "set_param", "calibrate", "sweep",
    # config / dataio
    "ConfigError", "load_config", "load_config_dict", "dump_config",
    "save_config", "DataError", "load_experimental_csv", "write_result_csv",
    "write_power_csv", "write_residuals_csv", "write_sweep_csv",
]
