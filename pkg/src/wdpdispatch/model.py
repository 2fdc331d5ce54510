"""Domain types and validation for hybrid desalination plant dispatch.

Unit conventions (all quantities are per dispatch interval):

- water volumes: m^3
- electricity: MWh
- fuel: MBTU
- prices: $/m^3 for water, $/MWh for electricity

The default interval length is one hour, so MW and MWh coincide numerically
and hourly flowrate limits can be used directly as per-interval volumes.

All types are frozen dataclasses: immutable value objects that are safe to
share between threads without synchronization.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from enum import Enum

NZ_TOLERANCE_MWH = 1e-6
"""Net exchange below this magnitude is reported as exactly zero (mode NZ)."""

SWEEPABLE_PARAMS = ("pi_plus", "pi_minus", "pi_w", "alpha_r", "alpha_h", "beta_h")
"""Tariff and technology parameters that sweeps and sensitivities may vary."""


class Mode(str, Enum):
    """Grid-interaction mode: net-importing, net-zero, or net-exporting."""

    IM = "IM"
    NZ = "NZ"
    EX = "EX"


class TariffRegime(str, Enum):
    """Position of the RODP water value alpha_r * pi_w within [pi_minus, pi_plus].

    INTERIOR: alpha_r * pi_w in [pi_minus, pi_plus]; full four-threshold policy.
    RODP_MAX: alpha_r * pi_w > pi_plus; RODP pinned at its maximum flowrate.
    RODP_MIN: alpha_r * pi_w < pi_minus; RODP pinned at its minimum flowrate.
    DEGENERATE: pi_plus == pi_minus with the water value strictly outside;
        the TDP setpoint is constant in renewable output.
    """

    INTERIOR = "interior"
    RODP_MAX = "rodp-max"
    RODP_MIN = "rodp-min"
    DEGENERATE = "degenerate"


class ConfigError(ValueError):
    """Base class for plant configuration problems."""


class NegativeParameter(ConfigError):
    """A parameter violates its sign constraint."""


class NonConvexCost(ConfigError):
    """Quadratic fuel-cost coefficient is not strictly positive."""


class TariffViolation(ConfigError):
    """Import price below export price (risk-free arbitrage)."""


class BoundsViolation(ConfigError):
    """A flowrate upper bound is below the corresponding lower bound."""


class SizingViolation(ConfigError):
    """Minimum plant output cannot cover the contracted water demand."""


class ConfigValidationError(ConfigError):
    """Aggregates multiple violations found in one validation pass."""

    def __init__(self, violations: list[ConfigError]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class TdpParams:
    """Thermal desalination plant parameters.

    Attributes:
        alpha_h: fuel-to-water conversion (m^3/MBTU)
        beta_h: fuel-to-electricity conversion (MWh/MBTU)
        w_min: minimum water flowrate (m^3/interval)
        w_max: maximum water flowrate (m^3/interval)
        cost_a: quadratic fuel-cost coefficient ($/MBTU^2)
        cost_b: linear fuel-cost coefficient ($/MBTU)
        cost_c: fixed fuel-cost term ($)
    """

    alpha_h: float
    beta_h: float
    w_min: float
    w_max: float
    cost_a: float
    cost_b: float
    cost_c: float = 0.0

    @property
    def eta_h(self) -> float:
        """Water-to-electricity production ratio (m^3/MWh), alpha_h / beta_h.

        Always derived, never stored, so the two conversion factors stay the
        single source of truth.
        """
        return self.alpha_h / self.beta_h


@dataclass(frozen=True)
class RodpParams:
    """Reverse-osmosis desalination plant parameters.

    Attributes:
        alpha_r: electricity-to-water conversion (m^3/MWh)
        w_min: minimum water flowrate (m^3/interval)
        w_max: maximum water flowrate (m^3/interval)
    """

    alpha_r: float
    w_min: float
    w_max: float


@dataclass(frozen=True)
class Tariff:
    """Net-metering electricity tariff plus the water selling price.

    Attributes:
        pi_plus: electricity import price ($/MWh)
        pi_minus: electricity export price ($/MWh), at most pi_plus
        pi_w: water selling price ($/m^3)
        pi_zero: fixed non-volumetric charge ($/interval)
    """

    pi_plus: float
    pi_minus: float
    pi_w: float
    pi_zero: float = 0.0


@dataclass(frozen=True)
class PlantConfig:
    """Full plant parameterization: both desalination units, tariff, demand."""

    tdp: TdpParams
    rodp: RodpParams
    tariff: Tariff
    water_demand: float = 0.0
    interval_hours: float = 1.0


@dataclass(frozen=True)
class Dispatch:
    """One interval's operating point.

    Attributes:
        w_h: TDP water output (m^3)
        w_r: RODP water output (m^3)
        q_h: TDP electricity output (MWh)
        q_r: RODP electricity consumption (MWh)
        p_h: TDP fuel consumption (MBTU)
        z: net grid exchange (MWh, positive = import); snapped to exactly
            0.0 when within NZ_TOLERANCE_MWH
        mode: grid-interaction mode consistent with the sign of z
    """

    w_h: float
    w_r: float
    q_h: float
    q_r: float
    p_h: float
    z: float
    mode: Mode


@dataclass(frozen=True)
class Thresholds:
    """Renewable-output breakpoints separating the operating modes.

    In the interior regime the four values are distinct and ordered
    gamma_im <= gamma_nz1 <= gamma_nz2 <= gamma_ex. In the pinned-RODP
    regimes the inner breakpoints collapse onto the outer ones, and in the
    degenerate regime all four coincide.
    """

    gamma_im: float
    gamma_nz1: float
    gamma_nz2: float
    gamma_ex: float
    tariff_regime: TariffRegime


@dataclass(frozen=True)
class ModeSetpoints:
    """Per-mode TDP water setpoints and the electricity values behind them.

    delta_* is the effective $/MWh value of TDP electricity in each mode:
    the import price when importing, the export price when exporting, and
    the RODP water value alpha_r * pi_w when power-balanced.
    """

    w_h_im: float
    w_h_nz: float
    w_h_ex: float
    delta_im: float
    delta_nz: float
    delta_ex: float


@dataclass(frozen=True)
class ProfitBreakdown:
    """Interval profit split into its three components.

    profit = water_revenue - electricity_payment - tdp_cost, where
    electricity_payment is positive when money flows to the utility.
    """

    water_revenue: float
    electricity_payment: float
    tdp_cost: float
    profit: float


def snap_exchange(z: float) -> tuple[float, Mode]:
    """Classify a net exchange, rounding |z| <= NZ_TOLERANCE_MWH to exact zero."""
    if abs(z) <= NZ_TOLERANCE_MWH:
        return 0.0, Mode.NZ
    if z > 0.0:
        return z, Mode.IM
    return z, Mode.EX


def assemble_dispatch(w_h: float, w_r: float, g: float, config: PlantConfig) -> Dispatch:
    """Fill in the electricity, fuel, and exchange fields for a water pair."""
    q_h = w_h / config.tdp.eta_h
    q_r = w_r / config.rodp.alpha_r
    p_h = w_h / config.tdp.alpha_h
    z, mode = snap_exchange(q_r - q_h - g)
    return Dispatch(w_h=w_h, w_r=w_r, q_h=q_h, q_r=q_r, p_h=p_h, z=z, mode=mode)


def _finite(problems: list[ConfigError], name: str, value: float) -> bool:
    if not math.isfinite(value):
        problems.append(ConfigError(f"{name} must be finite, got {value!r}"))
        return False
    return True


def validate_config(config: PlantConfig) -> PlantConfig:
    """Check every configuration invariant and return the config unchanged.

    All violations are collected in one pass; a single violation is raised
    as its specific exception type, multiple violations are wrapped in a
    ConfigValidationError. Validation is idempotent.
    """
    t, r, f = config.tdp, config.rodp, config.tariff
    problems: list[ConfigError] = []

    fields = {
        "tdp.alpha_h": t.alpha_h,
        "tdp.beta_h": t.beta_h,
        "tdp.w_min": t.w_min,
        "tdp.w_max": t.w_max,
        "tdp.cost_a": t.cost_a,
        "tdp.cost_b": t.cost_b,
        "tdp.cost_c": t.cost_c,
        "rodp.alpha_r": r.alpha_r,
        "rodp.w_min": r.w_min,
        "rodp.w_max": r.w_max,
        "tariff.pi_plus": f.pi_plus,
        "tariff.pi_minus": f.pi_minus,
        "tariff.pi_w": f.pi_w,
        "tariff.pi_zero": f.pi_zero,
        "water_demand": config.water_demand,
        "interval_hours": config.interval_hours,
    }
    if not all(_finite(problems, name, value) for name, value in fields.items()):
        raise ConfigValidationError(problems) if len(problems) > 1 else problems[0]

    if t.alpha_h <= 0:
        problems.append(NegativeParameter("tdp.alpha_h must be positive"))
    if t.beta_h <= 0:
        problems.append(NegativeParameter("tdp.beta_h must be positive"))
    if t.cost_a <= 0:
        problems.append(NonConvexCost("tdp.cost_a must be positive (strictly convex fuel cost)"))
    if t.cost_b < 0:
        problems.append(NegativeParameter("tdp.cost_b must be nonnegative"))
    if t.w_min < 0:
        problems.append(NegativeParameter("tdp.w_min must be nonnegative"))
    if t.w_max < t.w_min:
        problems.append(BoundsViolation("tdp.w_max must be at least tdp.w_min"))

    if r.alpha_r <= 0:
        problems.append(NegativeParameter("rodp.alpha_r must be positive"))
    if r.w_min < 0:
        problems.append(NegativeParameter("rodp.w_min must be nonnegative"))
    if r.w_max < r.w_min:
        problems.append(BoundsViolation("rodp.w_max must be at least rodp.w_min"))

    if f.pi_minus < 0:
        problems.append(NegativeParameter("tariff.pi_minus must be nonnegative"))
    if f.pi_w < 0:
        problems.append(NegativeParameter("tariff.pi_w must be nonnegative"))
    if f.pi_plus < f.pi_minus:
        problems.append(TariffViolation("tariff.pi_plus must be at least tariff.pi_minus"))

    if config.water_demand < 0:
        problems.append(NegativeParameter("water_demand must be nonnegative"))
    if config.interval_hours <= 0:
        problems.append(NegativeParameter("interval_hours must be positive"))

    if t.w_min + r.w_min < config.water_demand:
        problems.append(
            SizingViolation(
                "minimum plant output cannot meet water demand: "
                f"{t.w_min} + {r.w_min} < {config.water_demand}"
            )
        )

    if problems:
        raise problems[0] if len(problems) == 1 else ConfigValidationError(problems)
    return config


def config_to_dict(config: PlantConfig) -> dict:
    """Plain-dict form of a config, suitable for JSON serialization."""
    return {
        "tdp": dataclasses.asdict(config.tdp),
        "rodp": dataclasses.asdict(config.rodp),
        "tariff": dataclasses.asdict(config.tariff),
        "water_demand": config.water_demand,
        "interval_hours": config.interval_hours,
    }


_SECTION_TYPES = {"tdp": TdpParams, "rodp": RodpParams, "tariff": Tariff}


def config_from_dict(data: dict) -> PlantConfig:
    """Build a PlantConfig from nested dicts, rejecting unknown keys.

    Does not validate parameter values; call validate_config on the result.
    """
    if not isinstance(data, dict):
        raise ConfigError(f"config must be a JSON object, got {type(data).__name__}")
    known = set(_SECTION_TYPES) | {"water_demand", "interval_hours"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    sections = {}
    for name, cls in _SECTION_TYPES.items():
        if name not in data:
            raise ConfigError(f"missing config section: {name!r}")
        section = data[name]
        if not isinstance(section, dict):
            raise ConfigError(f"config section {name!r} must be an object")
        field_names = {f.name for f in dataclasses.fields(cls)}
        extra = set(section) - field_names
        if extra:
            raise ConfigError(f"unknown keys in {name!r}: {sorted(extra)}")
        required = {
            f.name for f in dataclasses.fields(cls)
            if f.default is dataclasses.MISSING
        }
        missing = required - set(section)
        if missing:
            raise ConfigError(f"missing keys in {name!r}: {sorted(missing)}")
        try:
            sections[name] = cls(**{k: float(v) for k, v in section.items()})
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value in section {name!r}: {exc}") from exc

    return PlantConfig(
        tdp=sections["tdp"],
        rodp=sections["rodp"],
        tariff=sections["tariff"],
        water_demand=float(data.get("water_demand", 0.0)),
        interval_hours=float(data.get("interval_hours", 1.0)),
    )


def config_fingerprint(config: PlantConfig) -> str:
    """Short stable hash of the full parameterization, for report provenance."""
    canonical = json.dumps(config_to_dict(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def get_param(config: PlantConfig, name: str) -> float:
    """Read one of the sweepable tariff/technology parameters by name."""
    if name in ("pi_plus", "pi_minus", "pi_w"):
        return getattr(config.tariff, name)
    if name == "alpha_r":
        return config.rodp.alpha_r
    if name in ("alpha_h", "beta_h"):
        return getattr(config.tdp, name)
    raise KeyError(f"unknown parameter {name!r}; expected one of {SWEEPABLE_PARAMS}")


def with_param(config: PlantConfig, name: str, value: float) -> PlantConfig:
    """Copy of the config with one sweepable parameter replaced."""
    if name in ("pi_plus", "pi_minus", "pi_w"):
        return dataclasses.replace(config, tariff=dataclasses.replace(config.tariff, **{name: value}))
    if name == "alpha_r":
        return dataclasses.replace(config, rodp=dataclasses.replace(config.rodp, alpha_r=value))
    if name in ("alpha_h", "beta_h"):
        return dataclasses.replace(config, tdp=dataclasses.replace(config.tdp, **{name: value}))
    raise KeyError(f"unknown parameter {name!r}; expected one of {SWEEPABLE_PARAMS}")
