"""Threshold policy: setpoints, breakpoints, dispatch, and its invariants.

Expected values were frozen from independent closed-form arithmetic (solving
the marginal-cost equations by hand) and cross-checked against the
brute-force oracle; tolerances are tight on purpose.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_base_config
from wdpdispatch import engine, oracle
from wdpdispatch.model import (
    Mode,
    PlantConfig,
    RodpParams,
    Tariff,
    TariffRegime,
    TdpParams,
    validate_config,
    with_param,
)

# Frozen reference values for the base plant.
W_H_IM = 3000.0          # clipped; unclipped solution is 3875
W_H_NZ = 2583.375
W_H_EX = 1750.0
GAMMA = (-37.5, -32.2921875, 17.704812559998807, 28.122000059998804)


@st.composite
def interior_configs(draw):
    """Random valid plants whose RODP water value lies inside the price band."""
    pi_minus = draw(st.floats(0.0, 200.0))
    pi_plus = pi_minus + draw(st.floats(0.0, 250.0))
    alpha_r = draw(st.floats(20.0, 500.0))
    u = draw(st.floats(0.0, 1.0))
    wh_min = draw(st.floats(0.0, 2000.0))
    wr_min = draw(st.floats(0.0, 5000.0))
    return validate_config(
        PlantConfig(
            tdp=TdpParams(
                alpha_h=draw(st.floats(0.5, 10.0)),
                beta_h=draw(st.floats(0.01, 0.5)),
                w_min=wh_min,
                w_max=wh_min + draw(st.floats(0.0, 4000.0)),
                cost_a=draw(st.floats(1e-3, 0.1)),
                cost_b=draw(st.floats(0.0, 10.0)),
                cost_c=draw(st.floats(0.0, 50.0)),
            ),
            rodp=RodpParams(
                alpha_r=alpha_r,
                w_min=wr_min,
                w_max=wr_min + draw(st.floats(0.0, 8000.0)),
            ),
            tariff=Tariff(
                pi_plus=pi_plus,
                pi_minus=pi_minus,
                pi_w=(pi_minus + u * (pi_plus - pi_minus)) / alpha_r,
            ),
        )
    )


class TestMarginalCostInverse:
    def test_interior_solution(self, base_config):
        # 0.016 p + 2 = 9  =>  p = 437.5
        assert engine.marginal_cost_inverse(9.0, base_config.tdp) == pytest.approx(437.5)

    def test_floors_at_zero_fuel(self, base_config):
        assert engine.marginal_cost_inverse(2.0, base_config.tdp) == 0.0
        assert engine.marginal_cost_inverse(0.5, base_config.tdp) == 0.0

    def test_balanced_mode_price(self, base_config):
        # 0.016 p + 2 = 12.3335  =>  p = 645.84375
        assert engine.marginal_cost_inverse(12.3335, base_config.tdp) == pytest.approx(
            645.84, abs=0.01
        )


class TestTdpSetpoint:
    def test_export_setpoint(self, base_config):
        assert engine.tdp_setpoint(Mode.EX, base_config) == pytest.approx(1750.0)

    def test_balanced_setpoint(self, base_config):
        assert engine.tdp_setpoint(Mode.NZ, base_config) == pytest.approx(2583.4, abs=0.5)

    def test_import_setpoint_clips_at_capacity(self, base_config):
        assert engine.tdp_setpoint(Mode.IM, base_config) == pytest.approx(3000.0)
        raw = base_config.tdp.alpha_h * engine.marginal_cost_inverse(
            4.0 * 1.0 + 0.05 * 270.0, base_config.tdp
        )
        assert raw == pytest.approx(3875.0)

    def test_ordering_across_modes(self, base_config):
        sp = engine.compute_setpoints(base_config)
        assert sp.w_h_im >= sp.w_h_nz >= sp.w_h_ex
        assert (sp.delta_im, sp.delta_nz, sp.delta_ex) == (270.0, pytest.approx(166.67), 100.0)


class TestComputeThresholds:
    def test_base_interior(self, base_config):
        th = engine.compute_thresholds(base_config)
        assert th.tariff_regime is TariffRegime.INTERIOR
        assert th.gamma_im == pytest.approx(GAMMA[0], abs=0.01)
        assert th.gamma_nz1 == pytest.approx(GAMMA[1], abs=0.01)
        assert th.gamma_nz2 == pytest.approx(GAMMA[2], abs=0.01)
        assert th.gamma_ex == pytest.approx(GAMMA[3], abs=0.01)

    def test_high_water_price_pins_rodp_max(self, high_water_config):
        th = engine.compute_thresholds(high_water_config)
        assert th.tariff_regime is TariffRegime.RODP_MAX
        assert th.gamma_im == th.gamma_nz1 == pytest.approx(12.497, abs=0.01)
        # export setpoint at pi_w=2: 0.016 p + 2 = 13 => w_h = 2750
        assert th.gamma_ex == th.gamma_nz2 == pytest.approx(15.622, abs=0.01)

    def test_low_water_price_pins_rodp_min(self, low_water_config):
        th = engine.compute_thresholds(low_water_config)
        assert th.tariff_regime is TariffRegime.RODP_MIN
        assert th.gamma_ex == pytest.approx(-11.875, abs=1e-9)
        assert th.gamma_im == th.gamma_nz1 == pytest.approx(-37.5, abs=1e-9)

    def test_degenerate_single_price(self):
        config = make_base_config(pi_plus=100.0, pi_minus=100.0)  # value 166.67 > 100
        th = engine.compute_thresholds(config)
        assert th.tariff_regime is TariffRegime.DEGENERATE
        assert th.gamma_im == th.gamma_nz1 == th.gamma_nz2 == th.gamma_ex

    def test_exact_tie_classifies_interior(self):
        config = make_base_config(pi_plus=166.67)  # equals alpha_r * pi_w
        assert engine.classify_regime(config) is TariffRegime.INTERIOR
        config = make_base_config(pi_minus=166.67, pi_plus=300.0)
        assert engine.classify_regime(config) is TariffRegime.INTERIOR

    def test_does_not_depend_on_generation(self, base_config):
        assert engine.compute_thresholds(base_config) == engine.compute_thresholds(base_config)


class TestDispatch:
    def test_net_zero_point(self, base_config):
        d = engine.dispatch(0.0, base_config)
        assert d.w_h == pytest.approx(2583.4, abs=0.5)
        assert d.w_r == pytest.approx(5382.0, abs=1.0)
        assert d.z == 0.0 and d.mode is Mode.NZ

    def test_export_band(self, base_config):
        d = engine.dispatch(40.0, base_config)
        assert d.w_h == pytest.approx(1750.0)
        assert d.w_r == pytest.approx(8333.0)
        assert d.z == pytest.approx(-11.878, abs=1e-3)
        assert d.mode is Mode.EX

    def test_upper_transition_band(self, base_config):
        d = engine.dispatch(20.0, base_config)
        assert d.w_h == pytest.approx(2399.76, abs=0.01)
        assert d.w_r == pytest.approx(8333.0)
        assert d.z == 0.0 and d.mode is Mode.NZ

    def test_high_water_price_imports(self, high_water_config):
        d = engine.dispatch(0.0, high_water_config)
        assert d.w_h == pytest.approx(3000.0)
        assert d.w_r == pytest.approx(8333.0)
        assert d.z == pytest.approx(12.497, abs=1e-3)
        assert d.mode is Mode.IM

    def test_low_water_price_exports_constant(self, low_water_config):
        d = engine.dispatch(10.0, low_water_config)
        assert d.w_h == pytest.approx(950.0, abs=1e-9)
        assert d.w_r == 0.0
        assert d.mode is Mode.EX

    def test_negative_generation_rejected(self, base_config):
        with pytest.raises(ValueError):
            engine.dispatch(-1.0, base_config)


class TestGridMode:
    def test_inside_band(self, base_config):
        th = engine.compute_thresholds(base_config)
        assert engine.grid_mode(0.0, th) == 0

    def test_above_band(self, base_config):
        th = engine.compute_thresholds(base_config)
        assert engine.grid_mode(30.0, th) == -1

    def test_boundary_is_balanced(self, base_config):
        th = engine.compute_thresholds(base_config)
        assert engine.grid_mode(th.gamma_ex, th) == 0
        assert engine.grid_mode(th.gamma_im, th) == 0


class TestRodpOnly:
    def test_zero_generation_sits_at_lower_bound(self, base_config):
        d = engine.dispatch_rodp_only(0.0, base_config.rodp, base_config.tariff)
        assert d.w_r == 0.0 and d.w_h == 0.0 and d.p_h == 0.0

    def test_tracks_generation(self, base_config):
        d = engine.dispatch_rodp_only(25.0, base_config.rodp, base_config.tariff)
        assert d.w_r == pytest.approx(4166.75, abs=1.0)
        assert d.z == 0.0

    def test_saturates_at_capacity(self, base_config):
        d = engine.dispatch_rodp_only(60.0, base_config.rodp, base_config.tariff)
        assert d.w_r == pytest.approx(8333.0)
        assert d.mode is Mode.EX


class TestTdpOnly:
    def test_matches_export_setpoint(self, base_config):
        d = engine.dispatch_tdp_only(base_config.tdp, base_config.tariff)
        assert d.w_h == pytest.approx(1750.0)
        assert d.w_r == 0.0

    def test_zero_export_price(self, base_config):
        tariff = Tariff(pi_plus=270.0, pi_minus=0.0, pi_w=1.0)
        d = engine.dispatch_tdp_only(base_config.tdp, tariff)
        assert d.w_h == pytest.approx(500.0)

    def test_worthless_output_idles(self, base_config):
        tariff = Tariff(pi_plus=270.0, pi_minus=0.0, pi_w=0.0)
        d = engine.dispatch_tdp_only(base_config.tdp, tariff)
        assert d.w_h == 0.0


class TestPolicyProperties:
    @given(config=interior_configs())
    @settings(max_examples=80, deadline=None)
    def test_threshold_ordering(self, config):
        th = engine.compute_thresholds(config)
        assert th.gamma_ex >= th.gamma_nz2 - 1e-9
        assert th.gamma_nz2 >= th.gamma_nz1 - 1e-9
        assert th.gamma_nz1 >= th.gamma_im - 1e-9

    @given(config=interior_configs(), data=st.data())
    @settings(max_examples=60, deadline=None)
    def test_monotone_piecewise_dispatch(self, config, data):
        th = engine.compute_thresholds(config)
        hi = max(1.0, th.gamma_ex * 1.5 + 2.0)
        grid = np.linspace(0.0, hi, 80)
        points = [engine.dispatch(float(g), config) for g in grid]
        for a, b in zip(points, points[1:]):
            assert b.w_h <= a.w_h + 1e-7
            assert b.w_r >= a.w_r - 1e-7

    @given(config=interior_configs(), data=st.data())
    @settings(max_examples=60, deadline=None)
    def test_mode_matches_sign(self, config, data):
        th = engine.compute_thresholds(config)
        hi = max(1.0, th.gamma_ex * 1.5 + 2.0)
        g = data.draw(st.floats(0.0, hi))
        sign = engine.grid_mode(g, th)
        z = engine.dispatch(g, config).z
        assert np.sign(z) == sign

    def test_rodp_ignores_grid_prices(self, base_config):
        widened = make_base_config(pi_plus=400.0, pi_minus=20.0)
        for g in np.linspace(0.0, 60.0, 121):
            assert engine.dispatch(g, widened).w_r == engine.dispatch(g, base_config).w_r

    def test_continuity_near_breakpoints(self, base_config):
        th = engine.compute_thresholds(base_config)
        probes = [0.0, 5.0, 17.0, 25.0, 40.0, th.gamma_nz2, th.gamma_ex]
        for g in probes:
            a = engine.dispatch(max(0.0, g), base_config)
            b = engine.dispatch(max(0.0, g) + 1e-6, base_config)
            assert abs(b.w_h - a.w_h) <= 1e-3
            assert abs(b.w_r - a.w_r) <= 1e-3 * base_config.rodp.alpha_r / 80.0 + 1e-3

    def test_threshold_gap_widens_with_price_spread(self):
        gaps = []
        for t in np.linspace(0.0, 80.0, 9):
            config = make_base_config(pi_plus=270.0 + t, pi_minus=100.0 - t)
            th = engine.compute_thresholds(config)
            assert th.tariff_regime is TariffRegime.INTERIOR
            gaps.append(th.gamma_ex - th.gamma_im)
        assert all(b >= a - 1e-12 for a, b in zip(gaps, gaps[1:]))

    def test_threshold_gap_widens_with_rodp_range(self):
        gaps = []
        for t in np.linspace(0.0, 3000.0, 7):
            config = make_base_config(wr_min=0.0, wr_max=8333.0 + t)
            th = engine.compute_thresholds(config)
            gaps.append(th.gamma_ex - th.gamma_im)
        assert all(b >= a - 1e-12 for a, b in zip(gaps, gaps[1:]))

    def test_always_exporting_when_ex_threshold_negative(self, low_water_config):
        # gamma_ex < 0 means local generation always beats RODP demand.
        th = engine.compute_thresholds(low_water_config)
        assert th.gamma_ex < 0
        for g in (0.0, 5.0, 50.0):
            assert engine.dispatch(g, low_water_config).mode is Mode.EX

    def test_fallback_enumeration_never_triggered(self, base_config, caplog):
        # The in-band policy balances exactly; the defensive fallback stays idle.
        rng = np.random.default_rng(5)
        for config in (base_config, make_base_config(wr_min=6000.0, wh_min=1000.0)):
            for g in oracle.random_generation(rng, config, 200):
                engine.dispatch(float(g), config)
        assert not [r for r in caplog.records if "falling back" in r.message]
