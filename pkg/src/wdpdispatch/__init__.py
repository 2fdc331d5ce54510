"""Optimal joint water-electricity dispatch for hybrid desalination plants.

A plant combining a thermal desalination unit (fuel in, water and power
out), a reverse-osmosis unit (power in, water out), and on-site renewables
sells water at a fixed price and trades electricity under a net-metering
tariff. The profit-maximizing schedule is a closed-form threshold policy on
renewable output, certified here against independent brute-force and
stationary-candidate oracles, with benchmark algorithms, profit-sensitivity
analytics, and a time-series simulation harness.
"""

__version__ = "0.1.0"

from wdpdispatch.model import (
    BoundsViolation,
    ConfigError,
    ConfigValidationError,
    Dispatch,
    Mode,
    ModeSetpoints,
    NegativeParameter,
    NonConvexCost,
    NZ_TOLERANCE_MWH,
    PlantConfig,
    ProfitBreakdown,
    RodpParams,
    SizingViolation,
    TariffRegime,
    TariffViolation,
    TdpParams,
    Tariff,
    Thresholds,
    assemble_dispatch,
    config_from_dict,
    config_to_dict,
    config_fingerprint,
    validate_config,
    with_param,
)
from wdpdispatch.engine import (
    compute_setpoints,
    compute_thresholds,
    dispatch,
    dispatch_rodp_only,
    dispatch_tdp_only,
    grid_mode,
    marginal_cost_inverse,
    tdp_setpoint,
)
from wdpdispatch.economics import (
    envelope_sensitivities,
    electricity_payment,
    optimal_profit,
    perturbation_decomposition,
    profit,
    profit_slope,
    tdp_cost,
    water_revenue,
)
from wdpdispatch.benchmarks import max_rodp_dispatch, passive_tdp_dispatch
from wdpdispatch.oracle import compare, solve_grid, solve_regions
from wdpdispatch.sim import (
    RenewableProfile,
    SimulationReport,
    SweepSpec,
    load_profile,
    simulate,
    sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
