"""Unit tests for the flux terms and their building blocks."""

import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solarcooker.thermal import (KELVIN_OFFSET, STEFAN_BOLTZMANN,
                                 ConvectionCoeffs, CookerParams, CookerState,
                                 Environment, EqualToAmbient, FixedOffset,
                                 FluxBreakdown, Geometry, OpticalProps,
                                 PiecewiseLinear, Swinbank, ThermalMass,
                                 celsius_to_kelvin, compute_fluxes,
                                 kelvin_to_celsius, make_rhs,
                                 reflected_irradiance, rhs, sky_temperature)

from conftest import constant_env, make_small_params, uniform_state


class TestUnitHelpers:
    def test_celsius_to_kelvin(self):
        assert celsius_to_kelvin(25.0) == 298.15
        assert celsius_to_kelvin(-273.15) == 0.0

    def test_kelvin_to_celsius(self):
        assert kelvin_to_celsius(373.15) == pytest.approx(100.0)

    def test_round_trip(self):
        assert kelvin_to_celsius(celsius_to_kelvin(37.5)) == pytest.approx(37.5)

    def test_offset_constant(self):
        assert KELVIN_OFFSET == 273.15


class TestSkyTemperature:
    def test_swinbank_oracle(self):
        # 0.0552 * 300**1.5, frozen independently
        assert sky_temperature(300.0, Swinbank()) == pytest.approx(
            286.8276137334061, abs=1e-9)

    def test_swinbank_is_colder_than_ambient(self):
        for t in (260.0, 290.0, 320.0):
            assert sky_temperature(t, Swinbank()) < t

    def test_equal_to_ambient(self):
        assert sky_temperature(305.0, EqualToAmbient()) == 305.0

    def test_fixed_offset(self):
        assert sky_temperature(300.0, FixedOffset(offset_k=12.0)) == 288.0

    def test_fixed_offset_rejects_negative(self):
        with pytest.raises(ValueError, match="offset_k"):
            FixedOffset(offset_k=-1.0)

    def test_rejects_nonpositive_ambient(self):
        with pytest.raises(ValueError, match="t_ambient"):
            sky_temperature(0.0, Swinbank())


class TestReflectedIrradiance:
    def test_oracle(self):
        optics = OpticalProps(alpha_absorber=0.9, alpha_reflector=0.12,
                              eps_absorber=0.5, eps_reflector=0.08,
                              rho_mirror=0.85, mean_reflections=1.0, eta0=0.9)
        # 0.9 * 0.85**1 * 1000, frozen independently
        assert reflected_irradiance(1000.0, optics) == pytest.approx(765.0, rel=1e-14)

    def test_zero_sun_gives_zero(self):
        optics = make_small_params().optics
        assert reflected_irradiance(0.0, optics) == 0.0

    def test_more_bounces_lose_more(self):
        base = make_small_params().optics
        two = dataclasses.replace(base, mean_reflections=2.0)
        assert reflected_irradiance(800.0, two) < reflected_irradiance(800.0, base)

    def test_rejects_negative_irradiance(self):
        with pytest.raises(ValueError, match="i_direct"):
            reflected_irradiance(-1.0, make_small_params().optics)


class TestFluxOracles:
    def test_sky_radiation_of_container(self):
        # A_r=0.05, eps=0.5, sigma=5.669e-8, T_r=350 K, T_sky=286.83 K
        params = make_small_params()
        env = constant_env(286.83, 0.0)
        state = CookerState(time=0.0, t_container=350.0,
                            t_reflector=286.83, t_fluid=286.83)
        fx = compute_fluxes(state, params, env)
        assert fx.q2_rad == pytest.approx(11.67482178675675, rel=1e-12)

    def test_ambient_convection_of_container(self):
        # A_r=0.05, h=10, T_r - T_amb = 50 K
        params = make_small_params()
        env = constant_env(300.0, 0.0)
        state = CookerState(time=0.0, t_container=350.0,
                            t_reflector=300.0, t_fluid=300.0)
        fx = compute_fluxes(state, params, env)
        assert fx.q3_conv == 25.0

    def test_fluid_heating_rate(self):
        # q8 = A_r h (T_inte - T_r) = 0.5 * 100 * 1 = 50 W with radiation
        # switched off; dT_f/dt = 50 / (4.2 * 4186)
        params = make_small_params(
            fluid=ThermalMass(mass=4.2, specific_heat=4186.0),
            optics=OpticalProps(alpha_absorber=0.9, alpha_reflector=0.12,
                                eps_absorber=0.0, eps_reflector=0.08,
                                rho_mirror=0.85, mean_reflections=1.0, eta0=0.9),
            geometry=Geometry(area_absorber=0.5, area_collector=0.2),
            convection=ConvectionCoeffs(h_abs_ambient=0.0, h_abs_interior=0.0,
                                        h_refl_ambient=0.0, h_abs_fluid=100.0),
        )
        env = constant_env(300.0, 0.0)
        state = CookerState(time=0.0, t_container=340.0,
                            t_reflector=341.0, t_fluid=342.0)
        fx = compute_fluxes(state, params, env)
        assert fx.q8_conv == 50.0
        assert fx.q9_rad == 0.0
        d = rhs(state, params, env)
        assert d[2] == pytest.approx(0.002843946943325825, rel=1e-12)

    def test_solar_gain_combines_direct_and_concentrated(self):
        params = make_small_params()
        env = constant_env(300.0, 1000.0)
        state = uniform_state(300.0)
        fx = compute_fluxes(state, params, env)
        expected = (0.05 * 0.9 * 1000.0
                    + 0.2 * reflected_irradiance(1000.0, params.optics))
        assert fx.q1_rad == pytest.approx(expected, rel=1e-14)

    def test_reflected_fn_override(self):
        params = make_small_params()
        env = constant_env(300.0, 1000.0)
        state = uniform_state(300.0)
        fx = compute_fluxes(state, params, env,
                            reflected_fn=lambda i, optics: 0.0)
        assert fx.irradiance_reflected == 0.0
        assert fx.q1_rad == pytest.approx(0.05 * 0.9 * 1000.0, rel=1e-14)

    def test_auxiliary_temperatures_are_means(self):
        params = make_small_params()
        env = constant_env(300.0, 0.0)
        state = CookerState(time=0.0, t_container=360.0,
                            t_reflector=320.0, t_fluid=300.0)
        fx = compute_fluxes(state, params, env)
        assert fx.t_int2 == 340.0
        assert fx.t_inte == 330.0


class TestEquilibrium:
    @pytest.mark.parametrize("t_amb", [275.0, 298.15, 310.0])
    def test_all_fluxes_vanish(self, t_amb):
        params = make_small_params()
        env = constant_env(t_amb, 0.0)
        fx = compute_fluxes(uniform_state(t_amb), params, env)
        for name in ("q1_rad", "q2_rad", "q3_conv", "q3_conv2", "q4_rad",
                     "q5_rad", "q6_conv", "q7_rad", "q8_conv", "q9_rad"):
            assert getattr(fx, name) == 0.0

    def test_rates_are_exactly_zero(self):
        params = make_small_params()
        env = constant_env(298.15, 0.0)
        assert rhs(uniform_state(298.15), params, env) == (0.0, 0.0, 0.0)


class TestBalanceWiring:
    """The three rates must be the documented signed sums of the fluxes."""

    def test_rates_match_flux_sums(self, small_params):
        env = constant_env(295.0, 600.0, sky_model=Swinbank())
        state = CookerState(time=0.0, t_container=355.0,
                            t_reflector=318.0, t_fluid=335.0)
        fx = compute_fluxes(state, small_params, env)
        d = rhs(state, small_params, env)
        d_container = (fx.q1_rad - fx.q2_rad - fx.q3_conv - fx.q4_rad
                       - fx.q8_conv - fx.q9_rad - fx.q3_conv2)
        d_reflector = (fx.q5_rad + fx.q4_rad - fx.q6_conv - fx.q7_rad
                       + fx.q3_conv2)
        d_fluid = fx.q8_conv + fx.q9_rad
        assert d[0] == pytest.approx(
            d_container / small_params.container.heat_capacity, rel=1e-14)
        assert d[1] == pytest.approx(
            d_reflector / small_params.reflectors.heat_capacity, rel=1e-14)
        assert d[2] == pytest.approx(
            d_fluid / small_params.fluid.heat_capacity, rel=1e-14)

    def test_wall_fluid_term_sign(self, small_params):
        """With a hot container the wall/fluid convective term is negative
        under the model's sign convention, and the fluid is driven by the
        radiative term."""
        env = constant_env(300.0, 0.0)
        state = CookerState(time=0.0, t_container=360.0,
                            t_reflector=300.0, t_fluid=310.0)
        fx = compute_fluxes(state, small_params, env)
        assert fx.q8_conv < 0.0
        assert fx.q9_rad > 0.0

    def test_interior_exchange_conserves_energy(self, small_params):
        """q3_conv2 and q4 leave the container balance and enter the
        reflector balance with the same magnitude."""
        env = constant_env(300.0, 500.0)
        state = CookerState(time=0.0, t_container=380.0,
                            t_reflector=330.0, t_fluid=320.0)
        fx = compute_fluxes(state, small_params, env)
        d = rhs(state, small_params, env)
        heat_container = d[0] * small_params.container.heat_capacity
        heat_reflector = d[1] * small_params.reflectors.heat_capacity
        heat_fluid = d[2] * small_params.fluid.heat_capacity
        total = heat_container + heat_reflector + heat_fluid
        external = (fx.q1_rad + fx.q5_rad - fx.q2_rad - fx.q3_conv
                    - fx.q6_conv - fx.q7_rad)
        assert total == pytest.approx(external, abs=1e-10)


class TestScalingProperties:
    @pytest.mark.parametrize("scale", [0.5, 2.0, 4.0])
    def test_container_terms_scale_with_absorber_area(self, scale):
        """Power-of-two area scalings multiply the area-proportional flux
        terms exactly (binary floating point makes these scalings lossless)."""
        base = make_small_params()
        scaled = make_small_params(
            geometry=Geometry(area_absorber=base.geometry.area_absorber * scale,
                              area_collector=base.geometry.area_collector))
        env = constant_env(296.0, 0.0, sky_model=Swinbank())
        state = CookerState(time=0.0, t_container=352.0,
                            t_reflector=312.0, t_fluid=331.0)
        fx1 = compute_fluxes(state, base, env)
        fx2 = compute_fluxes(state, scaled, env)
        for name in ("q2_rad", "q3_conv", "q3_conv2", "q4_rad",
                     "q8_conv", "q9_rad"):
            assert getattr(fx2, name) == scale * getattr(fx1, name)

    @given(t_r=st.floats(min_value=260.0, max_value=430.0),
           t_rf=st.floats(min_value=260.0, max_value=430.0))
    @settings(max_examples=50, deadline=None)
    def test_container_reflector_exchange_is_antisymmetric(self, t_r, t_rf):
        params = make_small_params()
        env = constant_env(300.0, 0.0)
        fx_ab = compute_fluxes(CookerState(time=0.0, t_container=t_r,
                                           t_reflector=t_rf, t_fluid=300.0),
                               params, env)
        fx_ba = compute_fluxes(CookerState(time=0.0, t_container=t_rf,
                                           t_reflector=t_r, t_fluid=300.0),
                               params, env)
        assert fx_ab.q4_rad == -fx_ba.q4_rad

    @given(t_r=st.floats(min_value=280.0, max_value=400.0),
           delta=st.floats(min_value=0.5, max_value=50.0))
    @settings(max_examples=50, deadline=None)
    def test_sky_loss_grows_with_container_temperature(self, t_r, delta):
        params = make_small_params()
        env = constant_env(290.0, 0.0, sky_model=Swinbank())
        cold = compute_fluxes(CookerState(time=0.0, t_container=t_r,
                                          t_reflector=300.0, t_fluid=300.0),
                              params, env)
        hot = compute_fluxes(CookerState(time=0.0, t_container=t_r + delta,
                                         t_reflector=300.0, t_fluid=300.0),
                             params, env)
        assert hot.q2_rad > cold.q2_rad


class TestPiecewiseLinear:
    def test_interpolates_between_samples(self):
        series = PiecewiseLinear(times=(0.0, 100.0), values=(10.0, 30.0))
        assert series(50.0) == pytest.approx(20.0)

    def test_clamps_outside_span(self):
        series = PiecewiseLinear(times=(0.0, 100.0), values=(10.0, 30.0))
        assert series(-5.0) == 10.0
        assert series(1000.0) == 30.0

    def test_min_max(self):
        series = PiecewiseLinear(times=(0.0, 50.0, 100.0),
                                 values=(12.0, 7.0, 20.0))
        assert series.min_value() == 7.0
        assert series.max_value() == 20.0

    def test_rejects_unsorted_times(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            PiecewiseLinear(times=(0.0, 0.0), values=(1.0, 2.0))

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError, match="same length"):
            PiecewiseLinear(times=(0.0, 1.0), values=(1.0,))


class TestEnvironment:
    def test_constant_accessors(self):
        env = constant_env(299.0, 840.0)
        assert env.ambient(123.0) == 299.0
        assert env.irradiance(123.0) == 840.0
        assert env.sky(123.0) == 299.0

    def test_series_accessors(self):
        env = Environment(
            t_ambient=PiecewiseLinear(times=(0.0, 3600.0),
                                      values=(290.0, 300.0)),
            irradiance_direct=PiecewiseLinear(times=(0.0, 3600.0),
                                              values=(0.0, 900.0)),
            sky_model=EqualToAmbient())
        assert env.ambient(1800.0) == pytest.approx(295.0)
        assert env.irradiance(1800.0) == pytest.approx(450.0)

    def test_rejects_nonpositive_ambient(self):
        with pytest.raises(ValueError, match="t_ambient"):
            Environment(t_ambient=0.0, irradiance_direct=100.0)

    def test_rejects_negative_irradiance(self):
        with pytest.raises(ValueError, match="irradiance"):
            Environment(t_ambient=300.0, irradiance_direct=-10.0)


class TestValidation:
    def test_thermal_mass_rejects_zero_mass(self):
        with pytest.raises(ValueError, match="mass"):
            ThermalMass(mass=0.0, specific_heat=900.0)

    def test_thermal_mass_rejects_nan(self):
        with pytest.raises(ValueError, match="specific_heat"):
            ThermalMass(mass=1.0, specific_heat=math.nan)

    def test_thermal_mass_rejects_bool(self):
        with pytest.raises(ValueError, match="mass"):
            ThermalMass(mass=True, specific_heat=900.0)

    def test_heat_capacity(self):
        assert ThermalMass(mass=2.0, specific_heat=900.0).heat_capacity == 1800.0

    def test_optics_reject_out_of_range(self):
        with pytest.raises(ValueError, match="alpha_absorber"):
            OpticalProps(alpha_absorber=1.2, alpha_reflector=0.1,
                         eps_absorber=0.5, eps_reflector=0.1,
                         rho_mirror=0.8, mean_reflections=1.0, eta0=0.9)

    def test_optics_reject_negative_reflections(self):
        with pytest.raises(ValueError, match="mean_reflections"):
            OpticalProps(alpha_absorber=0.9, alpha_reflector=0.1,
                         eps_absorber=0.5, eps_reflector=0.1,
                         rho_mirror=0.8, mean_reflections=-1.0, eta0=0.9)

    def test_geometry_rejects_zero_area(self):
        with pytest.raises(ValueError, match="area_absorber"):
            Geometry(area_absorber=0.0, area_collector=1.0)

    def test_convection_rejects_negative(self):
        with pytest.raises(ValueError, match="h_refl_ambient"):
            ConvectionCoeffs(h_abs_ambient=10.0, h_abs_interior=2.0,
                             h_refl_ambient=-8.0, h_abs_fluid=5.0)

    def test_state_rejects_nonpositive_temperature(self):
        with pytest.raises(ValueError, match="t_fluid"):
            CookerState(time=0.0, t_container=300.0, t_reflector=300.0,
                        t_fluid=0.0)

    def test_state_rejects_infinite_temperature(self):
        with pytest.raises(ValueError, match="t_container"):
            CookerState(time=0.0, t_container=math.inf, t_reflector=300.0,
                        t_fluid=300.0)

    def test_flux_breakdown_rejects_nan(self):
        with pytest.raises(ValueError, match="q2_rad"):
            FluxBreakdown(q1_rad=0.0, q2_rad=math.nan, q3_conv=0.0,
                          q3_conv2=0.0, q4_rad=0.0, q5_rad=0.0, q6_conv=0.0,
                          q7_rad=0.0, q8_conv=0.0, q9_rad=0.0, t_int2=300.0,
                          t_inte=300.0, irradiance_reflected=0.0, t_sky=280.0)

    def test_stefan_boltzmann_constant(self):
        assert STEFAN_BOLTZMANN == 5.669e-8


class TestVectorRhs:
    def test_matches_scalar_form(self, small_params):
        env = constant_env(295.0, 700.0, sky_model=Swinbank())
        f = make_rhs(small_params, env)
        y = np.array([345.0, 315.0, 325.0])
        expected = rhs(CookerState(time=60.0, t_container=345.0,
                                   t_reflector=315.0, t_fluid=325.0),
                       small_params, env)
        assert np.allclose(f(60.0, y), expected, rtol=1e-14)

    def test_rejects_nonfinite_state(self, small_params):
        env = constant_env(295.0, 700.0)
        f = make_rhs(small_params, env)
        with pytest.raises(ValueError, match="t_container"):
            f(0.0, np.array([math.inf, 300.0, 300.0]))
