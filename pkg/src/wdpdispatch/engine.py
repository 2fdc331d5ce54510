"""Closed-form threshold dispatch for the hybrid desalination plant.

The profit-maximizing schedule is a threshold rule on renewable output g.
Four precomputed breakpoints (gamma_im <= gamma_nz1 <= gamma_nz2 <= gamma_ex)
partition g into five segments:

- g < gamma_im: net import, TDP at its import setpoint, RODP at minimum.
- [gamma_im, gamma_nz1): net zero, RODP at minimum, TDP tracks renewables.
- [gamma_nz1, gamma_nz2]: net zero, TDP at its balanced setpoint, RODP
  absorbs renewables.
- (gamma_nz2, gamma_ex]: net zero, RODP at maximum, TDP tracks renewables.
- g > gamma_ex: net export, TDP at its export setpoint, RODP at maximum.

The breakpoints depend only on tariff and technology parameters, never on g,
so they can be computed offline. When the RODP water value alpha_r * pi_w
falls outside the price band [pi_minus, pi_plus], the RODP is pinned at a
bound and the TDP follows a two-threshold version of the same rule.

Everything here is a pure function of immutable inputs and reentrant.
"""

from __future__ import annotations

import logging

from wdpdispatch.model import (
    Dispatch,
    Mode,
    ModeSetpoints,
    PlantConfig,
    RodpParams,
    TariffRegime,
    TdpParams,
    Tariff,
    Thresholds,
    assemble_dispatch,
    snap_exchange,
)

logger = logging.getLogger(__name__)


def _clip(x: float, lo: float, hi: float) -> float:
    return max(lo, min(x, hi))


def marginal_cost_inverse(y: float, tdp: TdpParams) -> float:
    """Fuel level at which marginal generation cost reaches y, floored at zero.

    With cost (a*p + b)*p + c the marginal cost is 2*a*p + b, so the inverse
    is (y - b) / (2*a). Prices below the zero-fuel marginal cost b map to
    zero fuel, which keeps the setpoint formulas total for small prices.
    """
    return max(0.0, (y - tdp.cost_b) / (2.0 * tdp.cost_a))


def mode_value(sigma: Mode, config: PlantConfig) -> float:
    """Effective $/MWh value of TDP electricity in the given mode.

    Import offsets purchases at pi_plus, export earns pi_minus, and in the
    net-zero mode each MWh routed to the RODP is worth alpha_r * pi_w of
    water revenue.
    """
    tariff = config.tariff
    if sigma is Mode.IM:
        return tariff.pi_plus
    if sigma is Mode.EX:
        return tariff.pi_minus
    return config.rodp.alpha_r * tariff.pi_w


def tdp_setpoint(sigma: Mode, config: PlantConfig) -> float:
    """Per-mode TDP water setpoint, clipped to the flowrate limits.

    The TDP produces until its marginal fuel cost equals the combined
    marginal value of its water (alpha_h * pi_w) and its electricity
    (beta_h times the mode's electricity value).
    """
    tdp = config.tdp
    y = tdp.alpha_h * config.tariff.pi_w + tdp.beta_h * mode_value(sigma, config)
    return _clip(tdp.alpha_h * marginal_cost_inverse(y, tdp), tdp.w_min, tdp.w_max)


def compute_setpoints(config: PlantConfig) -> ModeSetpoints:
    """All three per-mode TDP setpoints and their electricity values."""
    return ModeSetpoints(
        w_h_im=tdp_setpoint(Mode.IM, config),
        w_h_nz=tdp_setpoint(Mode.NZ, config),
        w_h_ex=tdp_setpoint(Mode.EX, config),
        delta_im=mode_value(Mode.IM, config),
        delta_nz=mode_value(Mode.NZ, config),
        delta_ex=mode_value(Mode.EX, config),
    )


def classify_regime(config: PlantConfig) -> TariffRegime:
    """Tariff regime from the RODP water value alpha_r * pi_w.

    Exact ties with either price are classified as interior: on the optimal
    set the plant is indifferent, and the interior policy is the one that
    stays continuous in the tariff parameters.
    """
    tariff = config.tariff
    value = config.rodp.alpha_r * tariff.pi_w
    if tariff.pi_minus <= value <= tariff.pi_plus:
        return TariffRegime.INTERIOR
    if tariff.pi_plus == tariff.pi_minus:
        return TariffRegime.DEGENERATE
    if value > tariff.pi_plus:
        return TariffRegime.RODP_MAX
    return TariffRegime.RODP_MIN


def pinned_rodp_output(config: PlantConfig, regime: TariffRegime) -> float:
    """RODP flowrate in the regimes where it does not respond to renewables."""
    if regime is TariffRegime.RODP_MAX:
        return config.rodp.w_max
    if regime is TariffRegime.RODP_MIN:
        return config.rodp.w_min
    if regime is TariffRegime.DEGENERATE:
        value = config.rodp.alpha_r * config.tariff.pi_w
        return config.rodp.w_max if value > config.tariff.pi_plus else config.rodp.w_min
    raise ValueError("RODP output is not pinned in the interior regime")


def compute_thresholds(config: PlantConfig) -> Thresholds:
    """Renewable-output breakpoints for the configured tariff regime.

    Each breakpoint is the renewable level at which net exchange
    w_r / alpha_r - w_h / eta_h - g would cross zero for the corresponding
    fixed pair of setpoints. They are independent of g by construction.
    """
    regime = classify_regime(config)
    sp = compute_setpoints(config)
    rodp = config.rodp
    eta = config.tdp.eta_h

    if regime is TariffRegime.INTERIOR:
        return Thresholds(
            gamma_im=rodp.w_min / rodp.alpha_r - sp.w_h_im / eta,
            gamma_nz1=rodp.w_min / rodp.alpha_r - sp.w_h_nz / eta,
            gamma_nz2=rodp.w_max / rodp.alpha_r - sp.w_h_nz / eta,
            gamma_ex=rodp.w_max / rodp.alpha_r - sp.w_h_ex / eta,
            tariff_regime=regime,
        )

    pinned_q = pinned_rodp_output(config, regime) / rodp.alpha_r
    if regime is TariffRegime.DEGENERATE:
        # pi_plus == pi_minus makes the import and export setpoints coincide,
        # so a single breakpoint describes the whole policy.
        gamma = pinned_q - sp.w_h_im / eta
        return Thresholds(gamma, gamma, gamma, gamma, tariff_regime=regime)

    gamma_im = pinned_q - sp.w_h_im / eta
    gamma_ex = pinned_q - sp.w_h_ex / eta
    return Thresholds(
        gamma_im=gamma_im,
        gamma_nz1=gamma_im,
        gamma_nz2=gamma_ex,
        gamma_ex=gamma_ex,
        tariff_regime=regime,
    )


def dispatch(g: float, config: PlantConfig) -> Dispatch:
    """Optimal plant operating point for renewable output g.

    Args:
        g: renewable generation over the interval (MWh), nonnegative.
        config: validated plant configuration.

    Returns:
        A feasible Dispatch whose setpoints maximize interval profit.
    """
    if g < 0:
        raise ValueError(f"renewable generation must be nonnegative, got {g}")

    tdp, rodp = config.tdp, config.rodp
    eta = tdp.eta_h
    sp = compute_setpoints(config)
    th = compute_thresholds(config)

    if th.tariff_regime is TariffRegime.INTERIOR:
        if g < th.gamma_im:
            w_h, w_r = sp.w_h_im, rodp.w_min
        elif g < th.gamma_nz1:
            w_h = _clip(eta * (rodp.w_min / rodp.alpha_r - g), tdp.w_min, tdp.w_max)
            w_r = rodp.w_min
        elif g <= th.gamma_nz2:
            w_h = sp.w_h_nz
            w_r = _clip(rodp.alpha_r * (w_h / eta + g), rodp.w_min, rodp.w_max)
        elif g <= th.gamma_ex:
            w_h = _clip(eta * (rodp.w_max / rodp.alpha_r - g), tdp.w_min, tdp.w_max)
            w_r = rodp.w_max
        else:
            w_h, w_r = sp.w_h_ex, rodp.w_max
    else:
        w_r = pinned_rodp_output(config, th.tariff_regime)
        if g < th.gamma_im:
            w_h = sp.w_h_im
        elif g <= th.gamma_ex:
            w_h = _clip(eta * (w_r / rodp.alpha_r - g), tdp.w_min, tdp.w_max)
        else:
            w_h = sp.w_h_ex

    point = assemble_dispatch(w_h, w_r, g, config)

    if th.gamma_im <= g <= th.gamma_ex and point.mode is not Mode.NZ:
        # Clipping produced a nonzero exchange inside the nominal net-zero
        # band. Unreachable for validated configs, but fall back to exact
        # candidate enumeration rather than return an inconsistent point.
        logger.warning(
            "net-zero band dispatch clipped to |z|=%g at g=%g; "
            "falling back to candidate enumeration", point.z, g,
        )
        from wdpdispatch import oracle

        point = oracle.solve_regions(g, config).best_dispatch
    return point


def grid_mode(g: float, thresholds: Thresholds) -> int:
    """Sign of the optimal net exchange: +1 import, 0 balanced, -1 export.

    The balanced interval [gamma_im, gamma_ex] is closed on both ends.
    """
    if g < thresholds.gamma_im:
        return 1
    if g > thresholds.gamma_ex:
        return -1
    return 0


def dispatch_rodp_only(g: float, rodp: RodpParams, tariff: Tariff) -> Dispatch:
    """Optimal dispatch for a membrane-only plant.

    The schedule tracks renewables between the two breakpoints
    w_min / alpha_r and w_max / alpha_r and sits at the corresponding bound
    outside them; within the standard price band it does not depend on the
    tariff at all.
    """
    if g < 0:
        raise ValueError(f"renewable generation must be nonnegative, got {g}")
    del tariff  # setpoints are price-independent

    if g < rodp.w_min / rodp.alpha_r:
        w_r = rodp.w_min
    elif g <= rodp.w_max / rodp.alpha_r:
        w_r = rodp.alpha_r * g
    else:
        w_r = rodp.w_max
    q_r = w_r / rodp.alpha_r
    z, mode = snap_exchange(q_r - g)
    return Dispatch(w_h=0.0, w_r=w_r, q_h=0.0, q_r=q_r, p_h=0.0, z=z, mode=mode)


def dispatch_tdp_only(tdp: TdpParams, tariff: Tariff, g: float = 0.0) -> Dispatch:
    """Optimal dispatch for a thermal-only plant: constant in renewables.

    With no on-site load the plant always exports, so the setpoint is the
    export-mode one; g only affects the reported exchange.
    """
    if g < 0:
        raise ValueError(f"renewable generation must be nonnegative, got {g}")
    y = tdp.alpha_h * tariff.pi_w + tdp.beta_h * tariff.pi_minus
    w_h = _clip(tdp.alpha_h * marginal_cost_inverse(y, tdp), tdp.w_min, tdp.w_max)
    q_h = w_h / tdp.eta_h
    z, mode = snap_exchange(-q_h - g)
    return Dispatch(
        w_h=w_h, w_r=0.0, q_h=q_h, q_r=0.0, p_h=w_h / tdp.alpha_h, z=z, mode=mode
    )
