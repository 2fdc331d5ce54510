"""Comparison dispatch algorithms.

Both heuristics share the plant, tariff, and renewables with the optimal
policy and reuse its setpoint machinery, so they are feasible by
construction and any setpoint fix propagates. Their profit can never exceed
the optimal policy's at any renewable level.
"""

from __future__ import annotations

from wdpdispatch import engine
from wdpdispatch.model import Dispatch, Mode, PlantConfig, assemble_dispatch


def _clip(x: float, lo: float, hi: float) -> float:
    return max(lo, min(x, hi))


def max_rodp_dispatch(g: float, config: PlantConfig) -> Dispatch:
    """Pin the RODP at maximum flowrate and co-optimize only the TDP.

    Given the fixed membrane load, the best TDP schedule is a two-threshold
    rule: the import setpoint at low renewables, the export setpoint at
    high renewables, and exact balancing in between.
    """
    if g < 0:
        raise ValueError(f"renewable generation must be nonnegative, got {g}")
    tdp, rodp = config.tdp, config.rodp
    eta = tdp.eta_h
    sp = engine.compute_setpoints(config)
    q_max = rodp.w_max / rodp.alpha_r
    gamma_im = q_max - sp.w_h_im / eta
    gamma_ex = q_max - sp.w_h_ex / eta

    if g < gamma_im:
        w_h = sp.w_h_im
    elif g <= gamma_ex:
        w_h = _clip(eta * (q_max - g), tdp.w_min, tdp.w_max)
    else:
        w_h = sp.w_h_ex
    return assemble_dispatch(w_h, rodp.w_max, g, config)


def passive_tdp_dispatch(g: float, config: PlantConfig) -> Dispatch:
    """Run the TDP as an independent producer, always facing the export price.

    The TDP holds its export setpoint regardless of renewables. The RODP
    then dispatches optimally against that fixed output: pinned at a bound
    when its water value alpha_r * pi_w falls outside the price band, and
    otherwise tracking the net-zero point between its flowrate limits.
    """
    if g < 0:
        raise ValueError(f"renewable generation must be nonnegative, got {g}")
    tdp, rodp, tariff = config.tdp, config.rodp, config.tariff
    w_h = engine.tdp_setpoint(Mode.EX, config)
    value = rodp.alpha_r * tariff.pi_w
    if value > tariff.pi_plus:
        w_r = rodp.w_max
    elif value < tariff.pi_minus:
        w_r = rodp.w_min
    else:
        w_r = _clip(rodp.alpha_r * (w_h / tdp.eta_h + g), rodp.w_min, rodp.w_max)
    return assemble_dispatch(w_h, w_r, g, config)
