"""Command-line interface.

Subcommands: thresholds, dispatch, simulate, sweep, perturb, verify. The
CLI performs no computation of its own; every output is produced by the
library and is equally reachable through it. Human output uses fixed
4-decimal formatting; json and csv outputs carry full precision.

Exit codes: 0 success, 2 usage error, 3 validation error, 4 verification
discrepancy. Set WDP_LOG=DEBUG (or INFO, WARNING, ERROR) for diagnostics.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import os
import sys

import numpy as np

from wdpdispatch import __version__, economics, engine, model, oracle, sim

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_VERIFY = 4

PERTURB_DEFAULT_FACTORS = (0.5, -0.5)

logger = logging.getLogger(__name__)


def load_config(path: str) -> model.PlantConfig:
    """Parse and validate a JSON plant configuration file."""
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as exc:
        raise model.ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise model.ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    return model.validate_config(model.config_from_dict(data))


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


@contextlib.contextmanager
def _output_stream(args):
    if getattr(args, "out", None):
        with open(args.out, "w", newline="") as handle:
            yield handle
    else:
        yield sys.stdout


def _emit(rows: list[dict], args) -> None:
    """Write rows as aligned human text, JSON, or CSV per --output."""
    with _output_stream(args) as stream:
        if args.output == "json":
            json.dump(rows if len(rows) != 1 else rows[0], stream, indent=2)
            stream.write("\n")
        elif args.output == "csv":
            writer = csv.DictWriter(stream, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            for row in rows:
                writer.writerow(
                    {k: repr(v) if isinstance(v, float) else v for k, v in row.items()}
                )
        else:
            for row in rows:
                width = max(len(k) for k in row)
                for key, value in row.items():
                    stream.write(f"{key:<{width}} : {_fmt(value)}\n")
                if row is not rows[-1]:
                    stream.write("\n")


def cmd_thresholds(args) -> int:
    config = load_config(args.config)
    th = engine.compute_thresholds(config)
    sp = engine.compute_setpoints(config)
    _emit(
        [
            {
                "tariff_regime": th.tariff_regime.value,
                "gamma_im": th.gamma_im,
                "gamma_nz1": th.gamma_nz1,
                "gamma_nz2": th.gamma_nz2,
                "gamma_ex": th.gamma_ex,
                "w_h_im": sp.w_h_im,
                "w_h_nz": sp.w_h_nz,
                "w_h_ex": sp.w_h_ex,
                "delta_im": sp.delta_im,
                "delta_nz": sp.delta_nz,
                "delta_ex": sp.delta_ex,
            }
        ],
        args,
    )
    return EXIT_OK


def cmd_dispatch(args) -> int:
    config = load_config(args.config)
    policy = sim.resolve_algorithm(args.algorithm)
    point = policy(args.g, config)
    breakdown = economics.profit(point, args.g, config)
    _emit(
        [
            {
                "g_mwh": args.g,
                "algorithm": args.algorithm,
                "w_h_m3": point.w_h,
                "w_r_m3": point.w_r,
                "q_h_mwh": point.q_h,
                "q_r_mwh": point.q_r,
                "p_h_mbtu": point.p_h,
                "z_mwh": point.z,
                "mode": point.mode.value,
                "water_revenue": breakdown.water_revenue,
                "electricity_payment": breakdown.electricity_payment,
                "tdp_cost": breakdown.tdp_cost,
                "profit": breakdown.profit,
            }
        ],
        args,
    )
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    profile = sim.load_profile(args.profile)
    report = sim.simulate(profile, config, args.algorithm)
    with _output_stream(args) as stream:
        if args.output == "csv":
            sim.write_report_csv(report, stream)
        elif args.output == "json":
            sim.write_report_json(report, stream)
        else:
            totals = report.totals
            stream.write(f"profile            : {report.profile_label}\n")
            stream.write(f"algorithm          : {report.algorithm}\n")
            stream.write(f"config_fingerprint : {report.config_fingerprint}\n")
            stream.write(f"intervals          : {len(report.intervals)}\n")
            stream.write(f"water_m3           : {report.total_water:.4f}\n")
            stream.write(f"import_mwh         : {report.total_import:.4f}\n")
            stream.write(f"export_mwh         : {report.total_export:.4f}\n")
            stream.write(f"water_revenue      : {totals.water_revenue:.4f}\n")
            stream.write(f"electricity_payment: {totals.electricity_payment:.4f}\n")
            stream.write(f"tdp_cost           : {totals.tdp_cost:.4f}\n")
            stream.write(f"profit             : {totals.profit:.4f}\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = load_config(args.config)
    profile = sim.load_profile(args.profile)
    spec = sim.SweepSpec(
        parameter=args.param,
        values=tuple(args.values),
        algorithms=tuple(args.algorithms.split(",")),
    )
    rows = sim.sweep(spec, profile, config)
    _emit(
        [
            {
                "parameter": row.parameter,
                "value": row.value,
                "algorithm": row.algorithm,
                "daily_profit": row.daily_profit,
            }
            for row in rows
        ],
        args,
    )
    return EXIT_OK


def cmd_perturb(args) -> int:
    config = load_config(args.config)
    profile = sim.load_profile(args.profile)
    params = [args.param] if args.param else list(model.SWEEPABLE_PARAMS)
    factors = [args.factor] if args.factor is not None else list(PERTURB_DEFAULT_FACTORS)
    explicit = args.param is not None and args.factor is not None

    rows = []
    for name in params:
        for factor in factors:
            try:
                d = economics.perturbation_decomposition(
                    config, profile, name, factor, algorithm=args.algorithm
                )
            except economics.PerturbationInfeasible:
                if explicit:
                    raise
                logger.warning("skipping infeasible perturbation %s x %g", name, 1 + factor)
                continue
            rows.append(
                {
                    "parameter": d.parameter,
                    "factor": d.factor,
                    "base_value": d.base_value,
                    "perturbed_value": d.perturbed_value,
                    "d_water_revenue": d.d_water_revenue,
                    "d_electricity_revenue": d.d_electricity_revenue,
                    "d_tdp_cost": d.d_tdp_cost,
                    "d_profit": d.d_profit,
                }
            )
    if not rows:
        raise economics.PerturbationInfeasible("every requested perturbation was infeasible")
    _emit(rows, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    config = load_config(args.config)
    grid = np.linspace(0.0, args.g_max, args.steps)
    rows = []
    failures = 0
    for g in grid:
        report = oracle.compare(
            float(g), config, resolution=args.resolution, rel_tol=args.rel_tol
        )
        failures += 0 if report.ok else 1
        rows.append(
            {
                "g_mwh": report.g,
                "profit_engine": report.profit_engine,
                "profit_regions": report.profit_regions,
                "profit_grid": report.profit_grid,
                "rel_gap_regions": report.rel_gap_regions,
                "grid_shortfall": report.grid_shortfall,
                "best_label": report.region_best_label,
                "ok": report.ok,
            }
        )
    _emit(rows, args)
    if failures:
        print(f"verify: {failures}/{len(rows)} points exceeded tolerance", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wdp",
        description="Threshold dispatch of a hybrid desalination plant "
        "(thermal + reverse osmosis + renewables) under net metering.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, profile=False):
        p.add_argument("--config", required=True, help="JSON plant configuration")
        if profile:
            p.add_argument("--profile", required=True, help="renewable profile CSV")
        p.add_argument(
            "--output", choices=("human", "json", "csv"), default="human",
            help="output format (default: human)",
        )
        p.add_argument("--out", help="write output to this file instead of stdout")

    p = sub.add_parser("thresholds", help="print mode breakpoints, setpoints, and regime")
    common(p)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("dispatch", help="dispatch a single renewable level")
    common(p)
    p.add_argument("--g", type=float, required=True, help="renewable generation (MWh)")
    p.add_argument("--algorithm", choices=sorted(sim.ALGORITHMS), default="optimal")
    p.set_defaults(func=cmd_dispatch)

    p = sub.add_parser("simulate", help="run a profile and report dispatch and profits")
    common(p, profile=True)
    p.add_argument("--algorithm", choices=sorted(sim.ALGORITHMS), default="optimal")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="daily profit across a parameter grid")
    common(p, profile=True)
    p.add_argument("--param", required=True, choices=model.SWEEPABLE_PARAMS)
    p.add_argument("--values", required=True, type=_float_list, help="comma-separated grid")
    p.add_argument(
        "--algorithms", default="optimal",
        help="comma-separated algorithm names (default: optimal)",
    )
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("perturb", help="profit decomposition under scaled parameters")
    common(p, profile=True)
    p.add_argument("--param", choices=model.SWEEPABLE_PARAMS, help="default: all")
    p.add_argument("--factor", type=float, help="relative change, default +0.5 and -0.5")
    p.add_argument("--algorithm", choices=sorted(sim.ALGORITHMS), default="optimal")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("verify", help="check the policy against both oracles over a g grid")
    common(p)
    p.add_argument("--g-max", type=float, default=50.0)
    p.add_argument("--steps", type=int, default=51)
    p.add_argument("--resolution", type=int, default=1000, help="grid points per axis")
    p.add_argument("--rel-tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    level = os.environ.get("WDP_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))

    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "g", None) is not None and args.g < 0:
        parser.error("--g must be nonnegative")
    if getattr(args, "steps", None) is not None and args.steps < 1:
        parser.error("--steps must be at least 1")
    try:
        return args.func(args)
    except (model.ConfigError, sim.ParseError, sim.UnknownAlgorithm,
            economics.PerturbationInfeasible, KeyError, OSError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
