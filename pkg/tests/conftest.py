"""Shared fixtures: repository paths and small parameter rigs."""

import pathlib

import pytest

from solarcooker.config import load_config
from solarcooker.thermal import (ConvectionCoeffs, CookerParams, CookerState,
                                 Environment, EqualToAmbient, Geometry,
                                 OpticalProps, ThermalMass)

REPO = pathlib.Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def paper_config_path() -> pathlib.Path:
    return REPO / "configs" / "paper_like.json"


@pytest.fixture(scope="session")
def equilibrium_config_path() -> pathlib.Path:
    return REPO / "configs" / "equilibrium.json"


@pytest.fixture(scope="session")
def experiment_path() -> pathlib.Path:
    return REPO / "data" / "paper_like_experiment.csv"


@pytest.fixture()
def paper_like(paper_config_path):
    """(params, env, solver_cfg, initial) for the shipped demonstration run."""
    return load_config(str(paper_config_path))


def make_small_params(**overrides) -> CookerParams:
    """A small bench-scale parameter rig used by the flux unit tests."""
    fields = dict(
        container=ThermalMass(mass=0.5, specific_heat=900.0),
        reflectors=ThermalMass(mass=0.3, specific_heat=900.0),
        fluid=ThermalMass(mass=1.0, specific_heat=4186.0),
        optics=OpticalProps(alpha_absorber=0.9, alpha_reflector=0.12,
                            eps_absorber=0.5, eps_reflector=0.08,
                            rho_mirror=0.85, mean_reflections=1.0, eta0=0.9),
        geometry=Geometry(area_absorber=0.05, area_collector=0.2),
        convection=ConvectionCoeffs(h_abs_ambient=10.0, h_abs_interior=2.0,
                                    h_refl_ambient=8.0, h_abs_fluid=5.0),
    )
    fields.update(overrides)
    return CookerParams(**fields)


@pytest.fixture()
def small_params() -> CookerParams:
    return make_small_params()


def constant_env(t_ambient_k: float, irradiance: float,
                 sky_model=None) -> Environment:
    if sky_model is None:
        sky_model = EqualToAmbient()
    return Environment(t_ambient=t_ambient_k, irradiance_direct=irradiance,
                       sky_model=sky_model)


def uniform_state(t_kelvin: float, time: float = 0.0) -> CookerState:
    return CookerState(time=time, t_container=t_kelvin,
                       t_reflector=t_kelvin, t_fluid=t_kelvin)
