"""Profit accounting and sensitivity analytics.

Interval profit is water revenue minus the net-metering electricity payment
minus thermal fuel cost. The maximized profit is piecewise smooth in
renewable output and in the tariff parameters; its derivatives follow the
envelope rule (differentiate at the fixed optimal setpoints) and are checked
here against re-optimized finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from wdpdispatch import engine
from wdpdispatch.model import (
    Dispatch,
    PlantConfig,
    ProfitBreakdown,
    SWEEPABLE_PARAMS,
    TariffRegime,
    TdpParams,
    Tariff,
    get_param,
    validate_config,
    with_param,
)


class PerturbationInfeasible(ValueError):
    """A parameter perturbation produced an invalid configuration."""


def water_revenue(w_h: float, w_r: float, tariff: Tariff) -> float:
    """Revenue from selling the combined water output."""
    return tariff.pi_w * (w_h + w_r)


def electricity_payment(z: float, tariff: Tariff) -> float:
    """Net-metering payment for exchange z (positive = paid to the utility).

    Imports are charged at pi_plus, exports credited at pi_minus, plus the
    fixed per-interval charge pi_zero.
    """
    volumetric = tariff.pi_plus * z if z > 0.0 else tariff.pi_minus * z
    return volumetric + tariff.pi_zero


def tdp_cost(p_h: float, tdp: TdpParams) -> float:
    """Quadratic fuel cost of running the thermal unit at fuel level p_h."""
    return (tdp.cost_a * p_h + tdp.cost_b) * p_h + tdp.cost_c


def profit(dispatch: Dispatch, g: float, config: PlantConfig) -> ProfitBreakdown:
    """Profit breakdown of a dispatch; the identity holds exactly.

    The stored exchange z already reflects g, so g is not re-derived here;
    it is part of the signature because a dispatch is only meaningful
    relative to the renewable output that produced it.
    """
    del g
    revenue = water_revenue(dispatch.w_h, dispatch.w_r, config.tariff)
    payment = electricity_payment(dispatch.z, config.tariff)
    cost = tdp_cost(dispatch.p_h, config.tdp)
    return ProfitBreakdown(
        water_revenue=revenue,
        electricity_payment=payment,
        tdp_cost=cost,
        profit=revenue - payment - cost,
    )


def optimal_profit(g: float, config: PlantConfig) -> float:
    """Profit of the optimal dispatch at renewable output g."""
    point = engine.dispatch(g, config)
    return profit(point, g, config).profit


def _band_index(g: float, config: PlantConfig) -> tuple[TariffRegime, int]:
    """Regime plus the index of the policy segment containing g (0..4)."""
    th = engine.compute_thresholds(config)
    if g < th.gamma_im:
        band = 0
    elif g < th.gamma_nz1:
        band = 1
    elif g <= th.gamma_nz2:
        band = 2
    elif g <= th.gamma_ex:
        band = 3
    else:
        band = 4
    return th.tariff_regime, band


def _marginal_cost(p_h: float, tdp: TdpParams) -> float:
    return 2.0 * tdp.cost_a * p_h + tdp.cost_b


def profit_slope(g: float, config: PlantConfig) -> tuple[float, float]:
    """Rate at which the maximized profit grows with renewables, as (lo, hi).

    The interval is a single point in the import band (pi_plus), the
    balanced band (alpha_r * pi_w, interior regime), and the export band
    (pi_minus). On the two transition bands the rate varies with g and only
    the bracketing pair of adjacent marginal values is returned.
    """
    tariff = config.tariff
    regime, band = _band_index(g, config)
    if band == 0:
        return (tariff.pi_plus, tariff.pi_plus)
    if band == 4:
        return (tariff.pi_minus, tariff.pi_minus)

    if regime is TariffRegime.INTERIOR:
        value = config.rodp.alpha_r * tariff.pi_w
        if band == 2:
            return (value, value)
        if band == 1:
            return tuple(sorted((value, tariff.pi_plus)))
        return tuple(sorted((tariff.pi_minus, value)))
    # Pinned-RODP and degenerate regimes have a single net-zero band whose
    # rate sweeps from pi_plus down to pi_minus.
    return (tariff.pi_minus, tariff.pi_plus)


def _slope_at(g: float, config: PlantConfig) -> float:
    """Pointwise derivative of the maximized profit with respect to g."""
    tariff = config.tariff
    regime, band = _band_index(g, config)
    if band == 0:
        return tariff.pi_plus
    if band == 4:
        return tariff.pi_minus
    if regime is TariffRegime.INTERIOR and band == 2:
        return config.rodp.alpha_r * tariff.pi_w
    # Net-zero transition segments: the TDP tracks renewables, so the value
    # of one extra MWh is its displaced marginal cost net of water revenue.
    tdp = config.tdp
    point = engine.dispatch(g, config)
    return tdp.eta_h * (_marginal_cost(point.p_h, tdp) / tdp.alpha_h - tariff.pi_w)


@dataclass(frozen=True)
class SensitivityReport:
    """Envelope derivatives of the maximized profit and their FD checks.

    fd_* are central finite differences of the re-optimized profit, falling
    back to one-sided differences next to a policy kink (the affected
    parameters are listed in ``kinks``). ``flagged`` lists parameters whose
    analytic and numeric values disagree by more than ``flag_tol`` relative.
    """

    g: float
    d_profit_d_pi_plus: float
    d_profit_d_pi_minus: float
    d_profit_d_pi_w: float
    d_profit_d_g: float
    fd_pi_plus: float
    fd_pi_minus: float
    fd_pi_w: float
    fd_g: float
    kinks: tuple[str, ...]
    flagged: tuple[str, ...]
    flag_tol: float


def _profit_for_param(name: str, value: float, g: float, config: PlantConfig) -> float:
    if name == "g":
        return optimal_profit(value, config)
    return optimal_profit(g, with_param(config, name, value))


def _param_ok(name: str, value: float, g: float, config: PlantConfig) -> bool:
    if name == "g":
        return value >= 0.0
    try:
        validate_config(with_param(config, name, value))
    except ValueError:
        return False
    return True


def _classification(name: str, value: float, g: float, config: PlantConfig):
    if name == "g":
        return _band_index(value, config)
    return _band_index(g, with_param(config, name, value))


def _finite_difference(
    name: str, g: float, config: PlantConfig, rel_step: float
) -> tuple[float, bool]:
    """Central difference of the re-optimized profit, one-sided at kinks.

    Returns (derivative, kinked). The step is rel_step times the parameter
    magnitude, floored at rel_step for values near zero.
    """
    x0 = g if name == "g" else get_param(config, name)
    h = rel_step * max(1.0, abs(x0))

    lo_ok = _param_ok(name, x0 - h, g, config)
    hi_ok = _param_ok(name, x0 + h, g, config)
    center = _classification(name, x0, g, config)
    same_lo = lo_ok and _classification(name, x0 - h, g, config) == center
    same_hi = hi_ok and _classification(name, x0 + h, g, config) == center

    f0 = _profit_for_param(name, x0, g, config)
    if same_lo and same_hi:
        f_lo = _profit_for_param(name, x0 - h, g, config)
        f_hi = _profit_for_param(name, x0 + h, g, config)
        return (f_hi - f_lo) / (2.0 * h), False
    if same_hi:
        return (_profit_for_param(name, x0 + h, g, config) - f0) / h, True
    if same_lo:
        return (f0 - _profit_for_param(name, x0 - h, g, config)) / h, True
    return math.nan, True


def envelope_sensitivities(
    g: float, config: PlantConfig, rel_step: float = 1e-4, flag_tol: float = 1e-3
) -> SensitivityReport:
    """Analytic profit derivatives at the optimum plus numeric counterparts.

    The analytic values hold the optimal setpoints fixed: the import price
    enters only through purchased energy, the export price only through sold
    energy, and the water price through total water output.
    """
    point = engine.dispatch(g, config)
    d_plus = -max(0.0, point.z)
    d_minus = max(0.0, -point.z)
    d_water = point.w_h + point.w_r
    d_g = _slope_at(g, config)

    analytic = {"pi_plus": d_plus, "pi_minus": d_minus, "pi_w": d_water, "g": d_g}
    fd: dict[str, float] = {}
    kinks: list[str] = []
    flagged: list[str] = []
    for name, exact in analytic.items():
        value, kinked = _finite_difference(name, g, config, rel_step)
        fd[name] = value
        if kinked:
            kinks.append(name)
        if math.isfinite(value):
            rel = abs(exact - value) / max(1.0, abs(exact), abs(value))
            if rel > flag_tol:
                flagged.append(name)

    return SensitivityReport(
        g=g,
        d_profit_d_pi_plus=d_plus,
        d_profit_d_pi_minus=d_minus,
        d_profit_d_pi_w=d_water,
        d_profit_d_g=d_g,
        fd_pi_plus=fd["pi_plus"],
        fd_pi_minus=fd["pi_minus"],
        fd_pi_w=fd["pi_w"],
        fd_g=fd["g"],
        kinks=tuple(kinks),
        flagged=tuple(flagged),
        flag_tol=flag_tol,
    )


@dataclass(frozen=True)
class PerturbationDecomposition:
    """Change in daily profit components after scaling one parameter.

    Deltas are perturbed minus base over a full profile simulation;
    d_profit = d_water_revenue + d_electricity_revenue - d_tdp_cost, where
    electricity revenue is the negated utility payment.
    """

    parameter: str
    factor: float
    base_value: float
    perturbed_value: float
    d_water_revenue: float
    d_electricity_revenue: float
    d_tdp_cost: float
    d_profit: float


def perturbation_decomposition(
    config: PlantConfig,
    profile,
    parameter: str,
    factor: float,
    algorithm: str = "optimal",
) -> PerturbationDecomposition:
    """Re-simulate a profile with one parameter scaled by (1 + factor).

    Args:
        config: validated base configuration.
        profile: RenewableProfile to simulate under both configurations.
        parameter: one of SWEEPABLE_PARAMS.
        factor: relative change, e.g. +0.5 or -0.5.
        algorithm: dispatch algorithm name used for both runs.

    Raises:
        PerturbationInfeasible: the scaled parameter fails validation, for
            example an export price scaled above the import price.
    """
    from wdpdispatch import sim

    if parameter not in SWEEPABLE_PARAMS:
        raise KeyError(f"unknown parameter {parameter!r}; expected one of {SWEEPABLE_PARAMS}")
    base_value = get_param(config, parameter)
    new_value = base_value * (1.0 + factor)
    perturbed = with_param(config, parameter, new_value)
    try:
        validate_config(perturbed)
    except ValueError as exc:
        raise PerturbationInfeasible(
            f"{parameter} scaled by {1.0 + factor:g} is infeasible: {exc}"
        ) from exc

    base_report = sim.simulate(profile, config, algorithm)
    pert_report = sim.simulate(profile, perturbed, algorithm)
    b, p = base_report.totals, pert_report.totals
    return PerturbationDecomposition(
        parameter=parameter,
        factor=factor,
        base_value=base_value,
        perturbed_value=new_value,
        d_water_revenue=p.water_revenue - b.water_revenue,
        d_electricity_revenue=-(p.electricity_payment - b.electricity_payment),
        d_tdp_cost=p.tdp_cost - b.tdp_cost,
        d_profit=p.profit - b.profit,
    )
