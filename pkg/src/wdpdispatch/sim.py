"""Time-series harness: profiles, per-interval dispatch, daily aggregation.

The interval model has no time coupling, so a day is simulated by applying
the chosen algorithm independently per interval and summing. Totals use
exact summation, which makes reports deterministic and invariant to
reordering of the profile.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass
from typing import Callable, Iterable, TextIO

from wdpdispatch import benchmarks, economics, engine
from wdpdispatch.model import (
    Dispatch,
    PlantConfig,
    ProfitBreakdown,
    SWEEPABLE_PARAMS,
    config_fingerprint,
    validate_config,
    with_param,
)


class ParseError(ValueError):
    """A profile file could not be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class NegativeGeneration(ParseError):
    """A profile row carries negative renewable generation."""


class UnknownAlgorithm(ValueError):
    """Requested dispatch algorithm is not registered."""


ALGORITHMS: dict[str, Callable[[float, PlantConfig], Dispatch]] = {
    "optimal": engine.dispatch,
    "max-rodp": benchmarks.max_rodp_dispatch,
    "passive-tdp": benchmarks.passive_tdp_dispatch,
}


def resolve_algorithm(name: str) -> Callable[[float, PlantConfig], Dispatch]:
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise UnknownAlgorithm(
            f"unknown algorithm {name!r}; expected one of {sorted(ALGORITHMS)}"
        ) from None


@dataclass(frozen=True)
class RenewableProfile:
    """Ordered renewable-output series, one entry per dispatch interval."""

    label: str
    intervals: tuple[tuple[int, float], ...]

    def generation(self) -> tuple[float, ...]:
        return tuple(g for _, g in self.intervals)


def profile_from_pairs(label: str, pairs: Iterable[tuple[int, float]]) -> RenewableProfile:
    """Validated profile constructor: indices strictly increasing, g >= 0."""
    entries = tuple((int(i), float(g)) for i, g in pairs)
    if not entries:
        raise ParseError("profile has no intervals")
    previous = None
    for index, g in entries:
        if g < 0:
            raise NegativeGeneration(f"negative generation {g} at interval {index}")
        if previous is not None and index <= previous:
            raise ParseError(f"interval indices must be strictly increasing at {index}")
        previous = index
    return RenewableProfile(label=label, intervals=entries)


def _looks_numeric(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_profile(path: str, format: str = "csv") -> RenewableProfile:
    """Read a renewable profile from a CSV of (interval_index, g_mwh) rows.

    A single non-numeric first row is accepted as a header. Malformed rows
    are reported with their 1-based file line number.
    """
    if format != "csv":
        raise ParseError(f"unsupported profile format {format!r}")
    label = os.path.splitext(os.path.basename(path))[0]
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))

    pairs: list[tuple[int, float]] = []
    previous_index: int | None = None
    header_allowed = True
    for lineno, row in enumerate(rows, 1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if header_allowed and not _looks_numeric(row[0]):
            header_allowed = False
            continue
        header_allowed = False
        if len(row) < 2:
            raise ParseError("expected two columns: interval_index, g_mwh", line=lineno)
        try:
            index = int(row[0])
        except ValueError:
            raise ParseError(f"bad interval index {row[0]!r}", line=lineno) from None
        try:
            g = float(row[1])
        except ValueError:
            raise ParseError(f"bad generation value {row[1]!r}", line=lineno) from None
        if g < 0:
            raise NegativeGeneration(f"negative generation {g}", line=lineno)
        if previous_index is not None and index <= previous_index:
            raise ParseError("interval indices must be strictly increasing", line=lineno)
        previous_index = index
        pairs.append((index, g))

    if not pairs:
        raise ParseError(f"no data rows in profile {path!r}")
    return RenewableProfile(label=label, intervals=tuple(pairs))


@dataclass(frozen=True)
class IntervalResult:
    index: int
    g: float
    dispatch: Dispatch
    breakdown: ProfitBreakdown


@dataclass(frozen=True)
class SimulationReport:
    """Per-interval dispatch and profit plus daily aggregates."""

    algorithm: str
    config_fingerprint: str
    profile_label: str
    intervals: tuple[IntervalResult, ...]
    total_water: float
    total_import: float
    total_export: float
    total_net_exchange: float
    totals: ProfitBreakdown


def simulate(
    profile: RenewableProfile, config: PlantConfig, algorithm: str = "optimal"
) -> SimulationReport:
    """Dispatch every interval with the chosen algorithm and aggregate."""
    policy = resolve_algorithm(algorithm)
    validate_config(config)

    results = []
    for index, g in profile.intervals:
        point = policy(g, config)
        results.append(IntervalResult(index, g, point, economics.profit(point, g, config)))

    revenue = math.fsum(r.breakdown.water_revenue for r in results)
    payment = math.fsum(r.breakdown.electricity_payment for r in results)
    cost = math.fsum(r.breakdown.tdp_cost for r in results)
    totals = ProfitBreakdown(
        water_revenue=revenue,
        electricity_payment=payment,
        tdp_cost=cost,
        profit=revenue - payment - cost,
    )
    return SimulationReport(
        algorithm=algorithm,
        config_fingerprint=config_fingerprint(config),
        profile_label=profile.label,
        intervals=tuple(results),
        total_water=math.fsum(r.dispatch.w_h + r.dispatch.w_r for r in results),
        total_import=math.fsum(max(0.0, r.dispatch.z) for r in results),
        total_export=math.fsum(max(0.0, -r.dispatch.z) for r in results),
        total_net_exchange=math.fsum(r.dispatch.z for r in results),
        totals=totals,
    )


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter sweep: which parameter, which values, which algorithms."""

    parameter: str
    values: tuple[float, ...]
    algorithms: tuple[str, ...] = ("optimal",)


@dataclass(frozen=True)
class SweepRow:
    parameter: str
    value: float
    algorithm: str
    daily_profit: float


def sweep(
    spec: SweepSpec, profile: RenewableProfile, config: PlantConfig
) -> tuple[SweepRow, ...]:
    """Re-simulate the profile for every (value, algorithm) grid point.

    Each grid point is a full re-optimization; configuration errors at a
    grid point (for example a swept export price exceeding the import
    price) propagate to the caller.
    """
    if spec.parameter not in SWEEPABLE_PARAMS:
        raise KeyError(
            f"unknown parameter {spec.parameter!r}; expected one of {SWEEPABLE_PARAMS}"
        )
    if not spec.values:
        raise ValueError("sweep grid is empty")
    if not spec.algorithms:
        raise ValueError("sweep needs at least one algorithm")
    for name in spec.algorithms:
        resolve_algorithm(name)

    rows = []
    for value in spec.values:
        swept = validate_config(with_param(config, spec.parameter, value))
        for name in spec.algorithms:
            report = simulate(profile, swept, name)
            rows.append(SweepRow(spec.parameter, value, name, report.totals.profit))
    return tuple(rows)


REPORT_COLUMNS = (
    "interval_index",
    "g_mwh",
    "w_h_m3",
    "w_r_m3",
    "q_h_mwh",
    "q_r_mwh",
    "p_h_mbtu",
    "z_mwh",
    "mode",
    "water_revenue",
    "electricity_payment",
    "tdp_cost",
    "profit",
)


def report_rows(report: SimulationReport) -> list[dict]:
    """Per-interval rows with every dispatch and profit field, full precision."""
    rows = []
    for r in report.intervals:
        d, b = r.dispatch, r.breakdown
        rows.append(
            {
                "interval_index": r.index,
                "g_mwh": r.g,
                "w_h_m3": d.w_h,
                "w_r_m3": d.w_r,
                "q_h_mwh": d.q_h,
                "q_r_mwh": d.q_r,
                "p_h_mbtu": d.p_h,
                "z_mwh": d.z,
                "mode": d.mode.value,
                "water_revenue": b.water_revenue,
                "electricity_payment": b.electricity_payment,
                "tdp_cost": b.tdp_cost,
                "profit": b.profit,
            }
        )
    return rows


def write_report_csv(report: SimulationReport, stream: TextIO) -> None:
    """One CSV row per interval with all dispatch and profit fields."""
    writer = csv.DictWriter(stream, fieldnames=REPORT_COLUMNS)
    writer.writeheader()
    for row in report_rows(report):
        writer.writerow({key: repr(v) if isinstance(v, float) else v for key, v in row.items()})


def report_to_json_dict(report: SimulationReport) -> dict:
    """JSON document: the CSV content plus totals and config provenance."""
    return {
        "algorithm": report.algorithm,
        "config_fingerprint": report.config_fingerprint,
        "profile_label": report.profile_label,
        "intervals": report_rows(report),
        "totals": {
            "water_m3": report.total_water,
            "import_mwh": report.total_import,
            "export_mwh": report.total_export,
            "net_exchange_mwh": report.total_net_exchange,
            "water_revenue": report.totals.water_revenue,
            "electricity_payment": report.totals.electricity_payment,
            "tdp_cost": report.totals.tdp_cost,
            "profit": report.totals.profit,
        },
    }


def write_report_json(report: SimulationReport, stream: TextIO) -> None:
    json.dump(report_to_json_dict(report), stream, indent=2)
    stream.write("\n")
