"""Shared fixtures: reference plant configurations and repo data paths."""

from pathlib import Path

import pytest

from wdpdispatch.model import (
    PlantConfig,
    RodpParams,
    Tariff,
    TdpParams,
    validate_config,
)

REPO_ROOT = Path(__file__).resolve().parents[1]
CONFIG_DIR = REPO_ROOT / "configs"
PROFILE_DIR = REPO_ROOT / "profiles"


def make_base_config(
    pi_plus: float = 270.0,
    pi_minus: float = 100.0,
    pi_w: float = 1.0,
    pi_zero: float = 0.0,
    wr_min: float = 0.0,
    wr_max: float = 8333.0,
    wh_min: float = 0.0,
    wh_max: float = 3000.0,
    water_demand: float = 0.0,
) -> PlantConfig:
    """Reference plant: quadratic fuel cost 0.008 p^2 + 2 p, eta_h = 80."""
    return validate_config(
        PlantConfig(
            tdp=TdpParams(
                alpha_h=4.0,
                beta_h=0.05,
                w_min=wh_min,
                w_max=wh_max,
                cost_a=0.008,
                cost_b=2.0,
                cost_c=0.0,
            ),
            rodp=RodpParams(alpha_r=166.67, w_min=wr_min, w_max=wr_max),
            tariff=Tariff(pi_plus=pi_plus, pi_minus=pi_minus, pi_w=pi_w, pi_zero=pi_zero),
            water_demand=water_demand,
        )
    )


@pytest.fixture
def base_config() -> PlantConfig:
    return make_base_config()


@pytest.fixture
def high_water_config() -> PlantConfig:
    return make_base_config(pi_w=2.0)


@pytest.fixture
def low_water_config() -> PlantConfig:
    return make_base_config(pi_w=0.2)


@pytest.fixture
def pv_profile_path() -> Path:
    return PROFILE_DIR / "synthetic_pv50.csv"
