"""Render benchmark CSVs into error-versus-sample-size figures."""

from .plotting import (
    EmptyDataError,
    PlotRequest,
    SchemaError,
    aggregate_curves,
    load_records,
    render_figure,
)

__all__ = [
    "EmptyDataError",
    "PlotRequest",
    "SchemaError",
    "aggregate_curves",
    "load_records",
    "render_figure",
]
