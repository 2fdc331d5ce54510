"""Independent verification solvers for the dispatch problem.

Two oracles cross-check the closed-form policy without sharing its code
path: a stationary-candidate enumerator for the three fixed-sign convex
subproblems (import, net-zero, export), and a brute-force scan of the
water-output box with local refinement. Both are dependency-free by design
so they stay auditable, and both reduce with the same lexicographic
(profit, w_h, w_r) tie-break, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from wdpdispatch import economics, engine
from wdpdispatch._kernels import scan_box
from wdpdispatch.model import (
    Dispatch,
    Mode,
    NZ_TOLERANCE_MWH,
    PlantConfig,
    RodpParams,
    Tariff,
    TdpParams,
    assemble_dispatch,
    validate_config,
    with_param,
)

NZ_CONSTRUCTION_TOL = 1e-9
"""Net-zero candidates must balance to this tolerance before mode rounding."""


class NoFeasibleCandidate(RuntimeError):
    """No region candidate was feasible; signals an internal bug."""


@dataclass(frozen=True)
class RegionCandidate:
    """One stationary candidate of a fixed-sign subproblem.

    multiplier_mu is the power-balance dual of the net-zero subproblem,
    recovered only when the non-fixed unit sits strictly inside its bounds;
    it is None for import/export candidates and at corner points.
    """

    region: Mode
    label: str
    dispatch: Dispatch
    multiplier_mu: Optional[float]
    feasible: bool
    profit: float


@dataclass(frozen=True)
class RegionSolution:
    """All candidates plus the feasible profit maximizer."""

    candidates: tuple[RegionCandidate, ...]
    best: RegionCandidate

    @property
    def best_dispatch(self) -> Dispatch:
        return self.best.dispatch


def _candidate(
    region: Mode,
    label: str,
    w_h: float,
    w_r: float,
    feasible: bool,
    mu: Optional[float],
    g: float,
    config: PlantConfig,
) -> RegionCandidate:
    point = assemble_dispatch(w_h, w_r, g, config)
    value = economics.profit(point, g, config).profit
    return RegionCandidate(
        region=region,
        label=label,
        dispatch=point,
        multiplier_mu=mu,
        feasible=feasible,
        profit=value,
    )


def _inside(x: float, lo: float, hi: float) -> bool:
    slack = 1e-9 * max(1.0, abs(lo), abs(hi))
    return lo - slack <= x <= hi + slack


def _strictly_inside(x: float, lo: float, hi: float) -> bool:
    slack = 1e-9 * max(1.0, abs(lo), abs(hi))
    return lo + slack < x < hi - slack


def _clamp(x: float, lo: float, hi: float) -> float:
    return max(lo, min(x, hi))


def solve_regions(g: float, config: PlantConfig) -> RegionSolution:
    """Enumerate the stationary candidates of the three sign regions.

    Import and export candidates hold the RODP at the bound favored by the
    sign of alpha_r * pi_w minus the applicable price, with the TDP at its
    per-mode setpoint; they are feasible only when the resulting exchange
    actually has the region's sign. Net-zero candidates balance exactly:
    the unconstrained interior point, the four single-bound points where
    one unit sits at a limit and the other balances, and the box corners
    (feasible only when they happen to balance). The best feasible
    candidate is the global optimum of the interval dispatch problem.
    """
    if g < 0:
        raise ValueError(f"renewable generation must be nonnegative, got {g}")
    tdp, rodp, tariff = config.tdp, config.rodp, config.tariff
    eta = tdp.eta_h
    value = rodp.alpha_r * tariff.pi_w
    sp = engine.compute_setpoints(config)

    def raw_z(w_h: float, w_r: float) -> float:
        return w_r / rodp.alpha_r - w_h / eta - g

    def nz_mu_from_tdp(w_h: float) -> Optional[float]:
        if not _strictly_inside(w_h, tdp.w_min, tdp.w_max):
            return None
        marginal = 2.0 * tdp.cost_a * (w_h / tdp.alpha_h) + tdp.cost_b
        return eta * (marginal / tdp.alpha_h - tariff.pi_w)

    candidates: list[RegionCandidate] = []

    # Import region: exchange must be strictly positive at the candidate.
    w_r_im = rodp.w_max if value > tariff.pi_plus else rodp.w_min
    candidates.append(
        _candidate(
            Mode.IM, "im", sp.w_h_im, w_r_im,
            feasible=raw_z(sp.w_h_im, w_r_im) > 0.0, mu=None, g=g, config=config,
        )
    )

    # Export region: exchange must be strictly negative.
    w_r_ex = rodp.w_min if value < tariff.pi_minus else rodp.w_max
    candidates.append(
        _candidate(
            Mode.EX, "ex", sp.w_h_ex, w_r_ex,
            feasible=raw_z(sp.w_h_ex, w_r_ex) < 0.0, mu=None, g=g, config=config,
        )
    )

    # Net-zero interior: marginal fuel cost equals the combined water value.
    q_int = tdp.beta_h * engine.marginal_cost_inverse(
        tdp.alpha_h * tariff.pi_w + tdp.beta_h * value, tdp
    )
    w_h_int = eta * q_int
    w_r_int = rodp.alpha_r * (q_int + g)
    feas = _inside(w_h_int, tdp.w_min, tdp.w_max) and _inside(w_r_int, rodp.w_min, rodp.w_max)
    candidates.append(
        _candidate(
            Mode.NZ, "nz-interior",
            _clamp(w_h_int, tdp.w_min, tdp.w_max),
            _clamp(w_r_int, rodp.w_min, rodp.w_max),
            feasible=feas, mu=value if feas else None, g=g, config=config,
        )
    )

    # Net-zero with the RODP at a bound and the TDP balancing.
    for label, w_r_fix in (("nz-rodp-lower", rodp.w_min), ("nz-rodp-upper", rodp.w_max)):
        w_h_bal = eta * (w_r_fix / rodp.alpha_r - g)
        feas = _inside(w_h_bal, tdp.w_min, tdp.w_max)
        candidates.append(
            _candidate(
                Mode.NZ, label, _clamp(w_h_bal, tdp.w_min, tdp.w_max), w_r_fix,
                feasible=feas, mu=nz_mu_from_tdp(w_h_bal) if feas else None,
                g=g, config=config,
            )
        )

    # Net-zero with the TDP at a bound and the RODP balancing.
    for label, w_h_fix in (("nz-tdp-lower", tdp.w_min), ("nz-tdp-upper", tdp.w_max)):
        w_r_bal = rodp.alpha_r * (w_h_fix / eta + g)
        feas = _inside(w_r_bal, rodp.w_min, rodp.w_max)
        mu = value if feas and _strictly_inside(w_r_bal, rodp.w_min, rodp.w_max) else None
        candidates.append(
            _candidate(
                Mode.NZ, label, w_h_fix, _clamp(w_r_bal, rodp.w_min, rodp.w_max),
                feasible=feas, mu=mu, g=g, config=config,
            )
        )

    # Box corners balance only for special g values.
    for label, w_h_c, w_r_c in (
        ("nz-corner-ll", tdp.w_min, rodp.w_min),
        ("nz-corner-lu", tdp.w_min, rodp.w_max),
        ("nz-corner-ul", tdp.w_max, rodp.w_min),
        ("nz-corner-uu", tdp.w_max, rodp.w_max),
    ):
        feas = abs(raw_z(w_h_c, w_r_c)) <= NZ_CONSTRUCTION_TOL * max(1.0, abs(g))
        candidates.append(
            _candidate(Mode.NZ, label, w_h_c, w_r_c, feasible=feas, mu=None, g=g, config=config)
        )

    feasible = [c for c in candidates if c.feasible]
    if not feasible:
        raise NoFeasibleCandidate(
            f"no region candidate feasible at g={g}; the configuration "
            "was probably not validated"
        )
    best = max(feasible, key=lambda c: (c.profit, c.dispatch.w_h, c.dispatch.w_r))
    return RegionSolution(candidates=tuple(candidates), best=best)


def solve_grid(
    g: float, config: PlantConfig, resolution: int = 1000, refine_rounds: int = 3
) -> Dispatch:
    """Brute-force scan of the water box, then local grid refinement.

    Scans resolution points per axis over the full box, then repeats on a
    box shrunk tenfold around the incumbent (clamped to the original
    bounds) for refine_rounds rounds. The returned profit is within
    grid_accuracy(config, resolution) of the optimum already after the
    first pass; refinement typically tightens it by 10**refine_rounds.
    """
    if g < 0:
        raise ValueError(f"renewable generation must be nonnegative, got {g}")
    if resolution < 100:
        raise ValueError(f"resolution must be at least 100 points per axis, got {resolution}")
    tdp, rodp, tariff = config.tdp, config.rodp, config.tariff
    params = (
        tdp.alpha_h, tdp.eta_h, rodp.alpha_r,
        tariff.pi_plus, tariff.pi_minus, tariff.pi_zero, tariff.pi_w,
        tdp.cost_a, tdp.cost_b, tdp.cost_c,
    )

    span_h = tdp.w_max - tdp.w_min
    span_r = rodp.w_max - rodp.w_min
    box = (tdp.w_min, tdp.w_max, rodp.w_min, rodp.w_max)
    best: Optional[tuple[float, float, float]] = None
    for _ in range(refine_rounds + 1):
        n_h = resolution if box[1] > box[0] else 1
        n_r = resolution if box[3] > box[2] else 1
        found = scan_box(g, box[0], box[1], n_h, box[2], box[3], n_r, *params)
        if best is None or found > best:
            best = found
        span_h /= 10.0
        span_r /= 10.0
        box = (
            max(tdp.w_min, best[1] - span_h / 2.0),
            min(tdp.w_max, best[1] + span_h / 2.0),
            max(rodp.w_min, best[2] - span_r / 2.0),
            min(rodp.w_max, best[2] + span_r / 2.0),
        )
    return assemble_dispatch(best[1], best[2], g, config)


def grid_accuracy(config: PlantConfig, resolution: int) -> float:
    """Worst-case profit gap of the first grid pass: Lipschitz bound x step.

    The profit is concave, so some grid point lies within one step of the
    optimum along each axis and the value gap is at most the sum of the
    per-axis Lipschitz constants times their steps. The net-zero mode
    rounding adds at most max price times NZ_TOLERANCE_MWH.
    """
    tdp, rodp, tariff = config.tdp, config.rodp, config.tariff
    price = max(tariff.pi_plus, tariff.pi_minus)
    marginal_max = 2.0 * tdp.cost_a * (tdp.w_max / tdp.alpha_h) + tdp.cost_b
    lipschitz_h = tariff.pi_w + marginal_max / tdp.alpha_h + price / tdp.eta_h
    lipschitz_r = tariff.pi_w + price / rodp.alpha_r
    step_h = (tdp.w_max - tdp.w_min) / (resolution - 1)
    step_r = (rodp.w_max - rodp.w_min) / (resolution - 1)
    return lipschitz_h * step_h + lipschitz_r * step_r + price * NZ_TOLERANCE_MWH


@dataclass(frozen=True)
class DiscrepancyReport:
    """Agreement summary between the policy engine and both oracles."""

    g: float
    profit_engine: float
    profit_regions: float
    profit_grid: float
    region_best_label: str
    w_h_gap: float
    w_r_gap: float
    rel_gap_regions: float
    grid_shortfall: float
    rel_tol: float
    grid_slack: float

    @property
    def ok(self) -> bool:
        return self.rel_gap_regions <= self.rel_tol and self.grid_shortfall <= self.grid_slack


def compare(
    g: float, config: PlantConfig, resolution: int = 1000, rel_tol: float = 1e-6
) -> DiscrepancyReport:
    """Run the engine against both oracles at one renewable level.

    The engine must match the region enumerator to rel_tol relative profit
    and must not fall below the grid value beyond a float-noise slack (the
    grid scans feasible points only, so it can never legitimately exceed
    the optimum by more than the net-zero rounding allowance).
    """
    point = engine.dispatch(g, config)
    profit_engine = economics.profit(point, g, config).profit
    regions = solve_regions(g, config)
    grid_point = solve_grid(g, config, resolution=resolution)
    profit_grid = economics.profit(grid_point, g, config).profit

    scale = max(1.0, abs(profit_engine), abs(regions.best.profit))
    tariff = config.tariff
    grid_slack = 1e-6 * scale + max(tariff.pi_plus, tariff.pi_minus) * NZ_TOLERANCE_MWH
    return DiscrepancyReport(
        g=g,
        profit_engine=profit_engine,
        profit_regions=regions.best.profit,
        profit_grid=profit_grid,
        region_best_label=regions.best.label,
        w_h_gap=abs(point.w_h - regions.best_dispatch.w_h),
        w_r_gap=abs(point.w_r - regions.best_dispatch.w_r),
        rel_gap_regions=abs(profit_engine - regions.best.profit) / scale,
        grid_shortfall=max(0.0, profit_grid - profit_engine),
        rel_tol=rel_tol,
        grid_slack=grid_slack,
    )


def random_config(rng: np.random.Generator) -> PlantConfig:
    """Random valid plant covering every tariff regime with positive probability.

    Conversion factors are log-uniform, prices uniform with the ordering
    pi_plus >= pi_minus enforced by sorting, and flowrate bounds uniform
    with w_min <= w_max enforced by sorting.
    """
    pi_minus, pi_plus = np.sort(rng.uniform(0.0, 400.0, size=2))
    wh_min, wh_max = np.sort(rng.uniform(0.0, 5000.0, size=2))
    wr_min, wr_max = np.sort(rng.uniform(0.0, 12000.0, size=2))
    config = PlantConfig(
        tdp=TdpParams(
            alpha_h=float(10.0 ** rng.uniform(-0.3, 1.0)),
            beta_h=float(10.0 ** rng.uniform(-2.0, -0.3)),
            w_min=float(wh_min),
            w_max=float(wh_max),
            cost_a=float(10.0 ** rng.uniform(-3.0, -1.0)),
            cost_b=float(rng.uniform(0.0, 10.0)),
            cost_c=float(rng.uniform(0.0, 50.0)),
        ),
        rodp=RodpParams(
            alpha_r=float(10.0 ** rng.uniform(1.3, 2.7)),
            w_min=float(wr_min),
            w_max=float(wr_max),
        ),
        tariff=Tariff(
            pi_plus=float(pi_plus),
            pi_minus=float(pi_minus),
            pi_w=float(rng.uniform(0.0, 3.0)),
            pi_zero=float(rng.uniform(0.0, 20.0)),
        ),
        water_demand=0.0,
    )
    return validate_config(config)


def random_interior_config(rng: np.random.Generator) -> PlantConfig:
    """Random valid plant whose RODP water value lies inside the price band."""
    config = random_config(rng)
    tariff = config.tariff
    band = tariff.pi_minus + rng.uniform(0.0, 1.0) * (tariff.pi_plus - tariff.pi_minus)
    return validate_config(with_param(config, "pi_w", float(band / config.rodp.alpha_r)))


def random_generation(rng: np.random.Generator, config: PlantConfig, size: int) -> np.ndarray:
    """Renewable samples spanning all modes, biased toward the breakpoints."""
    th = engine.compute_thresholds(config)
    hi = max(1.0, 1.5 * max(th.gamma_ex, 0.0) + 2.0)
    samples = rng.uniform(0.0, hi, size=size)
    breakpoints = [b for b in (th.gamma_im, th.gamma_nz1, th.gamma_nz2, th.gamma_ex) if b > 0]
    if breakpoints:
        near = rng.random(size) < 0.3
        picks = rng.integers(0, len(breakpoints), size=size)
        jitter = rng.normal(0.0, 0.05 * hi, size=size)
        nominal = np.array(breakpoints)[picks] + jitter
        samples = np.where(near, np.clip(nominal, 0.0, hi), samples)
    return samples
