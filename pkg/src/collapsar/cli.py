"""Command line front end.

Exit codes: 0 success, 2 argument or validation errors, 3 numerical
failures (overflowing squeezing, missing sign change, stalled iteration).
All output is byte deterministic for a fixed argument list: CSV floats are
rendered at 17 significant digits, JSON documents with a fixed key order.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .entanglement import (
    CSV_HEADER,
    EntropyReport,
    crossover,
    entropy_report,
    format_float,
    report_csv_row,
    report_json_dict,
    sweep,
    temperature_ratio_fit,
)
from .errors import NoSignChangeError, SqueezingOverflowError
from .fock import mean_occupation, partial_trace
from .geometry import (
    FOUR_PI,
    BlackHoleParams,
    ModeChannel,
    Statistics,
    X_MIN_DEFAULT,
    dimensionless_x,
    squeezing_for,
)
from .states import EPS_TAIL_DEFAULT, build_boson_state, build_fermion_state


@dataclass(frozen=True)
class RunConfig:
    """Options shared by every subcommand run."""

    mass: float
    v0: float = 0.0
    eps_tail: float = EPS_TAIL_DEFAULT
    x_min: float = X_MIN_DEFAULT
    fmt: str = "csv"
    output: str | None = None


def _config_from(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        mass=args.mass,
        v0=getattr(args, "v0", 0.0),
        eps_tail=getattr(args, "eps_tail", EPS_TAIL_DEFAULT),
        x_min=getattr(args, "x_min", X_MIN_DEFAULT),
        fmt=getattr(args, "format", "csv"),
        output=getattr(args, "output", None),
    )


def _emit(config: RunConfig, text: str) -> None:
    if config.output:
        with open(config.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _channel_omega(config: RunConfig, args: argparse.Namespace) -> float:
    if args.x is not None:
        x = args.x
        if not (math.isfinite(x) and x > 0.0):
            raise ValueError(f"x must be a finite positive real, got {x!r}")
        return x / (FOUR_PI * config.mass)
    return args.omega


def _stats_list(value: str) -> tuple[Statistics, ...]:
    if value == "both":
        return (Statistics.BOSON, Statistics.FERMION)
    return (Statistics(value),)


def _reports_text(config: RunConfig, reports: list[EntropyReport]) -> str:
    if config.fmt == "json":
        return json.dumps([report_json_dict(r) for r in reports], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in reports:
        writer.writerow(report_csv_row(r))
    return buf.getvalue()


def cmd_entropy(args: argparse.Namespace) -> int:
    config = _config_from(args)
    params = BlackHoleParams(mass=config.mass, v0=config.v0)
    omega = _channel_omega(config, args)
    reports = [
        entropy_report(
            params,
            ModeChannel(omega=omega, statistics=st),
            eps_tail=config.eps_tail,
            keep=args.keep,
            x_min=config.x_min,
        )
        for st in _stats_list(args.stats)
    ]
    _emit(config, _reports_text(config, reports))
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _config_from(args)
    params = BlackHoleParams(mass=config.mass, v0=config.v0)
    if args.points < 2:
        raise ValueError(f"points must be at least 2, got {args.points}")
    if not (0.0 < args.omega_min < args.omega_max):
        raise ValueError(
            f"need 0 < omega-min < omega-max, got {args.omega_min!r}, {args.omega_max!r}"
        )
    if args.grid == "log":
        omegas = np.geomspace(args.omega_min, args.omega_max, args.points)
    else:
        omegas = np.linspace(args.omega_min, args.omega_max, args.points)
    reports = sweep(
        params,
        [float(o) for o in omegas],
        statistics=_stats_list(args.stats),
        eps_tail=config.eps_tail,
        keep=args.keep,
        x_min=config.x_min,
    )
    _emit(config, _reports_text(config, reports))
    if all(r.error is not None for r in reports):
        return 3
    return 0


def cmd_crossover(args: argparse.Namespace) -> int:
    config = _config_from(args)
    params = BlackHoleParams(mass=config.mass, v0=config.v0)
    result = crossover(lo=args.lo, hi=args.hi, tol=args.tol)
    omega_star = result.x_star / (FOUR_PI * params.mass)
    lines = [
        f"x_star = {format_float(result.x_star)}",
        f"omega_star = {format_float(omega_star)}",
        f"residual = {format_float(result.residual)}",
        f"iterations = {result.iterations}",
    ]
    _emit(config, "\n".join(lines) + "\n")
    return 0


def _json_num(value: float):
    v = float(value)
    return v if math.isfinite(v) else None


def _reduced_document(config: RunConfig, args: argparse.Namespace, spectrum: bool) -> dict:
    params = BlackHoleParams(mass=config.mass, v0=config.v0)
    omega = _channel_omega(config, args)
    channel = ModeChannel(omega=omega, statistics=Statistics(args.stats))
    sq = squeezing_for(params, channel, x_min=config.x_min)
    if sq.statistics is Statistics.BOSON:
        state = build_boson_state(sq, eps_tail=config.eps_tail, x_min=config.x_min)
    else:
        state = build_fermion_state(sq)
    rho = partial_trace(state, keep=args.keep)
    doc = {"squeezing": sq.to_json_dict(), **rho.to_json_dict()}
    if spectrum:
        doc["mean_occ"] = _json_num(mean_occupation(rho, "particle"))
        doc["T_ratio"] = _json_num(
            temperature_ratio_fit(rho, dimensionless_x(params, channel))
        )
    return doc


def cmd_state(args: argparse.Namespace) -> int:
    config = _config_from(args)
    doc = _reduced_document(config, args, spectrum=False)
    _emit(config, json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_spectrum(args: argparse.Namespace) -> int:
    config = _config_from(args)
    doc = _reduced_document(config, args, spectrum=True)
    _emit(config, json.dumps(doc, indent=2) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    geom = argparse.ArgumentParser(add_help=False)
    geom.add_argument("--mass", type=float, required=True, help="shell mass m > 0")
    geom.add_argument("--v0", type=float, default=0.0, help="collapse time offset")

    mode = argparse.ArgumentParser(add_help=False)
    group = mode.add_mutually_exclusive_group(required=True)
    group.add_argument("--omega", type=float, help="mode frequency omega > 0")
    group.add_argument(
        "--x", type=float, help="dimensionless 4 pi m omega, overrides --omega"
    )

    trunc = argparse.ArgumentParser(add_help=False)
    trunc.add_argument(
        "--eps-tail",
        type=float,
        default=EPS_TAIL_DEFAULT,
        help="ceiling on the truncated tail bound (default %(default)g)",
    )
    trunc.add_argument(
        "--x-min",
        type=float,
        default=X_MIN_DEFAULT,
        help="infrared floor on x (default %(default)g)",
    )
    trunc.add_argument(
        "--keep",
        choices=["out", "hor"],
        default="out",
        help="which side of the pair to keep (default %(default)s)",
    )

    outp = argparse.ArgumentParser(add_help=False)
    outp.add_argument(
        "--format", choices=["csv", "json"], default="csv", help="report format"
    )
    outp.add_argument("--output", help="write to this path instead of stdout")

    parser = argparse.ArgumentParser(
        prog="collapsar",
        description="Entanglement entropy of radiation pairs from gravitational collapse",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pe = sub.add_parser(
        "entropy",
        parents=[geom, mode, trunc, outp],
        help="closed-form and numerical entropy of one mode",
    )
    pe.add_argument("--stats", choices=["boson", "fermion", "both"], default="both")
    pe.set_defaults(func=cmd_entropy)

    ps = sub.add_parser(
        "sweep",
        parents=[geom, trunc, outp],
        help="entropy reports over a frequency grid",
    )
    ps.add_argument("--omega-min", type=float, required=True)
    ps.add_argument("--omega-max", type=float, required=True)
    ps.add_argument("--points", type=int, required=True)
    ps.add_argument("--grid", choices=["log", "linear"], default="log")
    ps.add_argument("--stats", choices=["boson", "fermion", "both"], default="both")
    ps.set_defaults(func=cmd_sweep)

    pc = sub.add_parser(
        "crossover",
        parents=[geom],
        help="x where the fermionic entropy overtakes the bosonic one",
    )
    pc.add_argument("--lo", type=float, default=0.1)
    pc.add_argument("--hi", type=float, default=1.0)
    pc.add_argument("--tol", type=float, default=1e-8)
    pc.add_argument("--output", help="write to this path instead of stdout")
    pc.set_defaults(func=cmd_crossover)

    pst = sub.add_parser(
        "state",
        parents=[geom, mode, trunc],
        help="reduced density operator of one mode, as JSON",
    )
    pst.add_argument("--stats", choices=["boson", "fermion"], required=True)
    pst.add_argument("--output", help="write to this path instead of stdout")
    pst.set_defaults(func=cmd_state)

    psp = sub.add_parser(
        "spectrum",
        parents=[geom, mode, trunc],
        help="reduced state plus occupation and fitted temperature",
    )
    psp.add_argument("--stats", choices=["boson", "fermion"], required=True)
    psp.add_argument("--output", help="write to this path instead of stdout")
    psp.set_defaults(func=cmd_spectrum)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SqueezingOverflowError, NoSignChangeError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
