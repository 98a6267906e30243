"""Command-line front end: `heatmap`, `lines`, and `density` subcommands.

Each subcommand reads simulator CSVs and writes one PNG.  Exit codes: 0
success, 2 schema violation or bad usage, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys

from .csvread import SchemaError, read_csv
from .figures import plot_density, plot_heatmap, plot_lines

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coevoplot",
        description="Render figures from coevonet CSV outputs.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_heat = subs.add_parser("heatmap", help="two-axis sweep CSV to a cell heatmap")
    p_heat.add_argument("csv", help="two-axis sweep CSV")
    p_heat.add_argument("--x", default="b", help="column for the x axis (default b)")
    p_heat.add_argument("--y", default="m", help="column for the y axis (default m)")
    p_heat.add_argument("--value", default="f_c_mean",
                        help="cell value column (default f_c_mean)")
    p_heat.add_argument("--out", required=True, help="output PNG path")

    p_lines = subs.add_parser(
        "lines", help="single-axis sweep CSVs to one curve per file"
    )
    p_lines.add_argument("csvs", nargs="+", help="single-axis sweep CSVs, shared grid")
    p_lines.add_argument("--y", default="f_c_mean",
                         help="y column, e.g. f_c_mean or A_mean (default f_c_mean)")
    p_lines.add_argument("--out", required=True, help="output PNG path")

    p_dens = subs.add_parser(
        "density", help="distribution CSVs to initial/final density curves"
    )
    p_dens.add_argument("csvs", nargs="+", help="dist CSVs, one per m value")
    p_dens.add_argument("--bandwidth", type=float, default=None,
                        help="KDE smoothing factor (default Scott's rule)")
    p_dens.add_argument("--out", required=True, help="output PNG path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "heatmap":
            doc = read_csv(args.csv)
            plot_heatmap(doc, args.x, args.y, args.value, args.out)
        elif args.command == "lines":
            docs = [read_csv(path) for path in args.csvs]
            plot_lines(docs, args.y, args.out)
        else:
            docs = [read_csv(path) for path in args.csvs]
            plot_density(docs, args.out, bandwidth=args.bandwidth)
    except SchemaError as exc:
        print(f"coevoplot: schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except OSError as exc:
        print(f"coevoplot: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
