"""Figure construction from parsed CSVs.

The grid/series/density helpers are pure data transformations so tests can
check them without touching image files; the plot_* functions wrap them in
fixed matplotlib styling and write PNGs.  Styling carries no volatile
state (timestamps, versions), so identical inputs give identical bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from scipy.stats import gaussian_kde

from .csvread import CsvDoc, SchemaError, axis_spec, column, require_rows

SAVEFIG_KW = dict(dpi=150, metadata={"Software": None})
DENSITY_POINTS = 512


def heatmap_grid(doc: CsvDoc, x: str, y: str, value: str):
    """Value matrix over the (x, y) grid; every cell exactly once.

    Returns (x_values, y_values, matrix) with matrix[i, j] the value at
    y_values[i], x_values[j].
    """
    require_rows(doc)
    xs = column(doc, x)
    ys = column(doc, y)
    vs = column(doc, value)
    cells = {}
    for xv, yv, vv in zip(xs, ys, vs):
        key = (xv, yv)
        if key in cells:
            raise SchemaError(f"{doc.path}: duplicate grid cell {x}={xv:g}, {y}={yv:g}")
        cells[key] = vv
    ux = np.unique(xs)
    uy = np.unique(ys)
    matrix = np.empty((uy.size, ux.size))
    for i, yv in enumerate(uy):
        for j, xv in enumerate(ux):
            if (xv, yv) not in cells:
                raise SchemaError(
                    f"{doc.path}: missing grid cell {x}={xv:g}, {y}={yv:g}"
                )
            matrix[i, j] = cells[(xv, yv)]
    return ux, uy, matrix


def _value_limits(value: str, matrix: np.ndarray):
    # cooperation fractions live on [0, 1]; index averages start at 0
    if value.startswith("f_c"):
        return 0.0, 1.0
    return 0.0, float(max(matrix.max(), 1e-12))


def plot_heatmap(doc: CsvDoc, x: str, y: str, value: str, out: str) -> np.ndarray:
    ux, uy, matrix = heatmap_grid(doc, x, y, value)
    vmin, vmax = _value_limits(value, matrix)
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    mesh = ax.imshow(
        matrix,
        origin="lower",
        aspect="auto",
        interpolation="nearest",
        extent=(float(ux[0]), float(ux[-1]), float(uy[0]), float(uy[-1])),
        vmin=vmin,
        vmax=vmax,
        cmap="viridis",
    )
    fig.colorbar(mesh, ax=ax, label=value)
    ax.set_xlabel(x)
    ax.set_ylabel(y)
    fig.tight_layout()
    fig.savefig(out, **SAVEFIG_KW)
    plt.close(fig)
    return matrix


def line_series(docs: list, y: str):
    """Shared x grid plus one (label, y-values) series per single-axis sweep."""
    if not docs:
        raise SchemaError("no input CSVs given")
    param = None
    x_ref = None
    series = []
    for doc in docs:
        axis = axis_spec(doc, 1)
        if axis is None:
            raise SchemaError(f"{doc.path}: not a sweep CSV (no axis1 metadata)")
        if axis_spec(doc, 2) is not None:
            raise SchemaError(f"{doc.path}: two-axis sweep, expected a single axis")
        require_rows(doc)
        if param is None:
            param = axis.param
        elif axis.param != param:
            raise SchemaError(
                f"{doc.path}: sweeps axis {axis.param!r}, other inputs sweep {param!r}"
            )
        xs = column(doc, param)
        if x_ref is None:
            x_ref = xs
        elif xs.size != x_ref.size or not np.array_equal(xs, x_ref):
            raise SchemaError(
                f"{doc.path}: x grid mismatch: {np.array2string(xs, precision=6)} "
                f"vs {np.array2string(x_ref, precision=6)}"
            )
        label = doc.meta.get("topology", doc.path)
        series.append((label, column(doc, y)))
    return param, x_ref, series


def plot_lines(docs: list, y: str, out: str):
    param, xs, series = line_series(docs, y)
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    for label, ys in series:
        ax.plot(xs, ys, marker="o", markersize=3.5, label=label)
    ax.set_xlabel(param)
    ax.set_ylabel(y)
    if y.startswith("f_c"):
        ax.set_ylim(0.0, 1.0)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, **SAVEFIG_KW)
    plt.close(fig)
    return param, xs, series


def _kernel_density(values: np.ndarray, grid: np.ndarray, bw) -> np.ndarray:
    if np.ptp(values) == 0.0:
        # zero-spread sample (every index saturated at the same value); the
        # KDE covariance would be singular, so draw a narrow spike instead
        scale = max(float(grid[-1]) * 0.005, 1e-6)
        z = (grid - float(values[0])) / scale
        return np.exp(-0.5 * z * z) / (scale * np.sqrt(2.0 * np.pi))
    return gaussian_kde(values, bw_method=bw)(grid)


def density_curves(docs: list, bandwidth: float | None = None):
    """KDE curves: the first file's initial snapshot plus one final per file.

    Returns (grid, initial_curve, [(label, final_curve), ...]).  Scott's
    rule by default; ``bandwidth`` overrides the KDE smoothing factor.
    Samples with zero spread are rendered as a narrow Gaussian spike.
    """
    if not docs:
        raise SchemaError("no input CSVs given")
    for doc in docs:
        require_rows(doc)
    initial = column(docs[0], "A_initial")
    finals = []
    top = float(initial.max())
    for doc in docs:
        values = column(doc, "A_final")
        label = f"m = {doc.meta['m']}" if "m" in doc.meta else doc.path
        finals.append((label, values))
        top = max(top, float(values.max()))
    grid = np.linspace(0.0, top * 1.05 + 1e-9, DENSITY_POINTS)
    bw = bandwidth if bandwidth is not None else "scott"
    initial_curve = _kernel_density(initial, grid, bw)
    final_curves = [
        (label, _kernel_density(values, grid, bw)) for label, values in finals
    ]
    return grid, initial_curve, final_curves


def plot_density(docs: list, out: str, bandwidth: float | None = None):
    grid, initial_curve, final_curves = density_curves(docs, bandwidth)
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.plot(grid, initial_curve, "r--", label="initial")
    for label, curve in final_curves:
        ax.plot(grid, curve, label=label)
    ax.set_xlabel("A")
    ax.set_ylabel("density")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, **SAVEFIG_KW)
    plt.close(fig)
    return grid, initial_curve, final_curves
