"""Command-line entry: plot --in results.csv --out fig2.png."""

from __future__ import annotations

import argparse
import sys

from .plotting import EmptyDataError, PlotRequest, SchemaError, render_figure


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render a benchmark CSV into the four error curves.",
    )
    parser.add_argument("--in", dest="input_csv", required=True)
    parser.add_argument("--out", dest="output_image", required=True)
    parser.add_argument("--agg", choices=("median", "mean"), default="median")
    parser.add_argument("--linear-x", action="store_true")
    parser.add_argument("--linear-y", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    request = PlotRequest(
        input_csv=args.input_csv,
        output_image=args.output_image,
        aggregate=args.agg,
        log_x=not args.linear_x,
        log_y=not args.linear_y,
    )
    try:
        render_figure(request)
    except (SchemaError, EmptyDataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
