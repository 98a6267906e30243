"""Figure rendering for coevonet simulation CSVs."""

from .csvread import CsvDoc, SchemaError, axis_spec, column, read_csv
from .figures import (
    density_curves,
    heatmap_grid,
    line_series,
    plot_density,
    plot_heatmap,
    plot_lines,
)

__all__ = [
    "CsvDoc",
    "SchemaError",
    "axis_spec",
    "column",
    "read_csv",
    "density_curves",
    "heatmap_grid",
    "line_series",
    "plot_density",
    "plot_heatmap",
    "plot_lines",
]

__version__ = "0.1.0"
