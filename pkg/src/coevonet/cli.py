"""Command-line front end: `run`, `sweep`, and `dist` subcommands.

Exit codes: 0 success, 2 config/usage error (unknown key, malformed
value, bad sweep spec), 3 parameter out of range, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys

from .config import (
    ConfigError,
    build_params,
    merge_settings,
    parse_config_file,
    parse_sweep_axis,
)
from .core import ParameterError, validate_params
from .csvio import open_output, write_dist_csv, write_run_csv, write_sweep_csv
from .engine import run
from .sweep import SweepSpec, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RANGE = 3
EXIT_IO = 4


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--topology", choices=["hl", "sl", "xl", "ws"], default=None,
                     help="relationship-layer graph (default sl)")
    sub.add_argument("--n", type=int, default=None,
                     help="node count; a perfect square for lattices (default 2500)")
    sub.add_argument("--b", type=float, default=None, help="temptation payoff in [1,2]")
    sub.add_argument("--m", type=float, default=None, help="payoff damping factor in [0,1]")
    sub.add_argument("--p", type=float, default=None, help="interaction probability in [0,1]")
    sub.add_argument("--gamma", type=float, default=None,
                     help="relationship threshold in [0,1]")
    sub.add_argument("--delta", type=float, default=None, help="weight step in [0,1]")
    sub.add_argument("--kappa", type=float, default=None, help="selection noise, > 0")
    sub.add_argument("--steps", type=int, default=None, help="MC steps (default 10000)")
    sub.add_argument("--window", type=int, default=None,
                     help="stationary-average window in steps (default 1000)")
    sub.add_argument("--seed", type=int, default=None, help="master seed (default 1)")
    sub.add_argument("--ws-degree", dest="ws_degree", type=int, default=None,
                     help="ws ring degree, even (default 10)")
    sub.add_argument("--ws-rewire", dest="ws_rewire", type=float, default=None,
                     help="ws rewiring probability (default 0.5)")
    sub.add_argument("--workers", type=int, default=None,
                     help="worker processes for replicas/grid points (default 1)")
    sub.add_argument("--config", default=None, help="key=value config file")
    sub.add_argument("--out", default=None, help="output CSV path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coevonet",
        description="Coevolving relationship weights and weak prisoner's dilemma "
                    "strategies on multiplex networks.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_run = subs.add_parser("run", help="single run, per-step time series CSV")
    _add_common_flags(p_run)

    p_sweep = subs.add_parser("sweep", help="grid sweep, one aggregated row per point")
    _add_common_flags(p_sweep)
    p_sweep.add_argument(
        "--sweep", action="append", default=None, metavar="PARAM:START:STOP:POINTS",
        help="sweep axis over b, m, p or gamma; may be given at most twice "
             "(first axis is the slow one)",
    )
    p_sweep.add_argument("--replicas", type=int, default=None,
                         help="independent replicas per grid point (default 5)")

    p_dist = subs.add_parser(
        "dist", help="single run, per-node initial/final relationship-index CSV"
    )
    _add_common_flags(p_dist)
    return parser


_FLAG_KEYS = (
    "topology", "n", "b", "m", "p", "gamma", "delta", "kappa", "steps",
    "window", "seed", "ws_degree", "ws_rewire", "workers", "out",
)


def _settings_from_args(args: argparse.Namespace) -> dict:
    file_values = parse_config_file(args.config) if args.config else {}
    flag_values = {key: getattr(args, key) for key in _FLAG_KEYS}
    if getattr(args, "replicas", None) is not None:
        flag_values["replicas"] = args.replicas
    if getattr(args, "sweep", None):
        flag_values["sweep"] = list(args.sweep)
    return merge_settings(file_values, flag_values)


def cmd_run(settings: dict) -> None:
    params = build_params(settings)
    validate_params(params)
    result = run(params)
    with open_output(settings["out"]) as fh:
        write_run_csv(fh, result)


def cmd_dist(settings: dict) -> None:
    params = build_params(settings)
    validate_params(params)
    result = run(params)
    with open_output(settings["out"]) as fh:
        write_dist_csv(fh, result)


def cmd_sweep(settings: dict) -> None:
    sweeps = settings["sweep"]
    if len(sweeps) > 2:
        raise ConfigError(f"{len(sweeps)} sweep axes given, at most 2 allowed")
    axes = tuple(parse_sweep_axis(text) for text in sweeps)
    spec = SweepSpec(
        base=build_params(settings), axes=axes, replicas=int(settings["replicas"])
    )
    rows = run_sweep(spec, workers=int(settings["workers"]))
    with open_output(settings["out"]) as fh:
        write_sweep_csv(fh, spec, rows)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = _settings_from_args(args)
        if args.command == "run":
            cmd_run(settings)
        elif args.command == "dist":
            cmd_dist(settings)
        else:
            cmd_sweep(settings)
    except ConfigError as exc:
        print(f"coevonet: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParameterError as exc:
        print(f"coevonet: parameter out of range: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except OSError as exc:
        print(f"coevonet: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
