"""Aggregate benchmark records and render the four error curves.

Strict CSV consumer: it never recomputes estimates, only aggregates the
metric columns per samples-per-bin value and draws one labeled curve per
metric (log-log by default).
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

EXPECTED_HEADER = [
    "run_id",
    "samples_per_bin",
    "seed",
    "avg_deviation",
    "p_err",
    "q_err",
    "w_err",
]
METRIC_COLUMNS = ["avg_deviation", "p_err", "q_err", "w_err"]
AGGREGATES = ("median", "mean")


class SchemaError(ValueError):
    """The CSV does not carry the expected benchmark header."""


class EmptyDataError(ValueError):
    """The CSV holds no data rows."""


@dataclass
class PlotRequest:
    input_csv: str
    output_image: str
    aggregate: str = "median"
    log_x: bool = True
    log_y: bool = True

    def validate(self) -> "PlotRequest":
        if self.aggregate not in AGGREGATES:
            raise ValueError(
                f"aggregate must be one of {AGGREGATES}, got {self.aggregate!r}"
            )
        return self


def load_records(path) -> list[dict]:
    """Read benchmark rows, enforcing the exact header."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != EXPECTED_HEADER:
            raise SchemaError(
                f"unexpected header {reader.fieldnames} in {path}; "
                f"expected {EXPECTED_HEADER}"
            )
        rows = [
            {
                "samples_per_bin": int(row["samples_per_bin"]),
                **{col: float(row[col]) for col in METRIC_COLUMNS},
            }
            for row in reader
        ]
    if not rows:
        raise EmptyDataError(f"{path} holds no data rows")
    return rows


def aggregate_curves(rows, aggregate="median") -> tuple[list[int], dict]:
    """Per-metric aggregate values at each samples-per-bin point."""
    agg = {"median": statistics.median, "mean": statistics.fmean}[aggregate]
    xs = sorted({row["samples_per_bin"] for row in rows})
    curves = {}
    for col in METRIC_COLUMNS:
        curves[col] = [
            agg([row[col] for row in rows if row["samples_per_bin"] == x])
            for x in xs
        ]
    return xs, curves


def render_figure(request: PlotRequest) -> tuple[list[int], dict]:
    """Write the figure for a request; returns the plotted aggregates."""
    request.validate()
    rows = load_records(request.input_csv)
    xs, curves = aggregate_curves(rows, request.aggregate)
    fig, ax = plt.subplots(figsize=(7, 5))
    for col in METRIC_COLUMNS:
        ax.plot(xs, curves[col], marker="o", label=col)
    if request.log_x:
        ax.set_xscale("log")
    if request.log_y:
        ax.set_yscale("log")
    ax.set_xlabel("samples per bin")
    ax.set_ylabel(f"{request.aggregate} error")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(request.output_image)
    plt.close(fig)
    return xs, curves
