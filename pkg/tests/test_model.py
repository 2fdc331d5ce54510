"""Domain type construction, validation, and dispatch assembly."""

import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_base_config
from wdpdispatch.model import (
    BoundsViolation,
    ConfigError,
    ConfigValidationError,
    Mode,
    NegativeParameter,
    NonConvexCost,
    PlantConfig,
    RodpParams,
    SizingViolation,
    Tariff,
    TariffViolation,
    TdpParams,
    assemble_dispatch,
    config_fingerprint,
    config_from_dict,
    config_to_dict,
    get_param,
    validate_config,
    with_param,
)


class TestEtaH:
    def test_base_ratio(self):
        assert make_base_config().tdp.eta_h == pytest.approx(80.0)

    def test_unit_ratio(self):
        tdp = TdpParams(alpha_h=1, beta_h=1, w_min=0, w_max=10, cost_a=1, cost_b=0)
        assert tdp.eta_h == 1.0

    def test_scaled_ratio(self):
        tdp = TdpParams(alpha_h=6, beta_h=0.05, w_min=0, w_max=10, cost_a=1, cost_b=0)
        assert tdp.eta_h == pytest.approx(120.0)


class TestValidateConfig:
    def test_base_case_is_valid(self):
        config = make_base_config()
        assert validate_config(config) is config

    def test_idempotent(self):
        config = make_base_config()
        assert validate_config(validate_config(config)) is config

    def test_export_above_import_price(self):
        config = dataclasses.replace(
            make_base_config(), tariff=Tariff(pi_plus=270, pi_minus=300, pi_w=1)
        )
        with pytest.raises(TariffViolation):
            validate_config(config)

    def test_undersized_plant(self):
        config = dataclasses.replace(make_base_config(), water_demand=100.0)
        with pytest.raises(SizingViolation):
            validate_config(config)

    def test_nonconvex_cost(self):
        base = make_base_config()
        config = dataclasses.replace(base, tdp=dataclasses.replace(base.tdp, cost_a=0.0))
        with pytest.raises(NonConvexCost):
            validate_config(config)

    def test_negative_conversion(self):
        base = make_base_config()
        config = dataclasses.replace(base, rodp=dataclasses.replace(base.rodp, alpha_r=-1.0))
        with pytest.raises(NegativeParameter):
            validate_config(config)

    def test_bounds_out_of_order(self):
        base = make_base_config()
        config = dataclasses.replace(
            base, rodp=dataclasses.replace(base.rodp, w_min=9000.0)
        )
        with pytest.raises(BoundsViolation):
            validate_config(config)

    def test_multiple_violations_are_aggregated(self):
        base = make_base_config()
        config = dataclasses.replace(
            base,
            tdp=dataclasses.replace(base.tdp, cost_a=-1.0),
            tariff=Tariff(pi_plus=10.0, pi_minus=50.0, pi_w=1.0),
        )
        with pytest.raises(ConfigValidationError) as err:
            validate_config(config)
        kinds = {type(v) for v in err.value.violations}
        assert kinds == {NonConvexCost, TariffViolation}


class TestAssembleDispatch:
    def test_net_zero_snap(self, base_config):
        d = assemble_dispatch(2400.0, 166.67 * 30.0, 0.0, base_config)
        assert d.z == 0.0
        assert d.mode is Mode.NZ

    def test_import_sign(self, base_config):
        d = assemble_dispatch(0.0, 8333.0, 0.0, base_config)
        assert d.z > 0 and d.mode is Mode.IM

    def test_export_sign(self, base_config):
        d = assemble_dispatch(3000.0, 0.0, 0.0, base_config)
        assert d.z < 0 and d.mode is Mode.EX

    @given(
        w_h=st.floats(0.0, 3000.0),
        w_r=st.floats(0.0, 8333.0),
        g=st.floats(0.0, 60.0),
    )
    @settings(max_examples=100, deadline=None)
    def test_round_trip(self, w_h, w_r, g):
        config = make_base_config()
        d = assemble_dispatch(w_h, w_r, g, config)
        assert d.q_h == pytest.approx(d.w_h / config.tdp.eta_h, rel=1e-9)
        assert d.q_r == pytest.approx(d.w_r / config.rodp.alpha_r, rel=1e-9)
        assert d.p_h == pytest.approx(d.w_h / config.tdp.alpha_h, rel=1e-9)


class TestConfigSerialization:
    def test_dict_round_trip(self):
        config = make_base_config()
        assert config_from_dict(config_to_dict(config)) == config

    def test_unknown_key_rejected(self):
        data = config_to_dict(make_base_config())
        data["tdp"]["mystery"] = 1.0
        with pytest.raises(ConfigError, match="mystery"):
            config_from_dict(data)

    def test_missing_section_rejected(self):
        data = config_to_dict(make_base_config())
        del data["rodp"]
        with pytest.raises(ConfigError, match="rodp"):
            config_from_dict(data)

    def test_fingerprint_tracks_content(self):
        a = make_base_config()
        b = make_base_config(pi_w=2.0)
        assert config_fingerprint(a) != config_fingerprint(b)
        assert config_fingerprint(a) == config_fingerprint(make_base_config())

    def test_defaults_applied(self):
        data = config_to_dict(make_base_config())
        del data["water_demand"], data["interval_hours"]
        config = config_from_dict(data)
        assert config.water_demand == 0.0
        assert config.interval_hours == 1.0


class TestWithParam:
    @pytest.mark.parametrize(
        "name,value",
        [("pi_plus", 300.0), ("pi_minus", 50.0), ("pi_w", 1.7),
         ("alpha_r", 125.0), ("alpha_h", 5.0), ("beta_h", 0.08)],
    )
    def test_round_trip(self, name, value):
        config = with_param(make_base_config(), name, value)
        assert get_param(config, name) == value

    def test_unknown_parameter(self):
        with pytest.raises(KeyError):
            with_param(make_base_config(), "cost_a", 1.0)

    def test_original_unchanged(self):
        base = make_base_config()
        with_param(base, "pi_w", 9.0)
        assert base.tariff.pi_w == 1.0
