"""Grid, series, and density construction plus PNG rendering behavior."""

from pathlib import Path

import numpy as np
import pytest

from coevoplot import figures
from coevoplot.csvread import SchemaError, column, read_csv
from coevoplot.figures import (
    DENSITY_POINTS,
    density_curves,
    heatmap_grid,
    line_series,
    plot_density,
    plot_heatmap,
    plot_lines,
)

FIXTURES = Path(__file__).parent / "fixtures"

TOPO_FILES = ["sweep_b_hl.csv", "sweep_b_sl.csv", "sweep_b_xl.csv", "sweep_b_ws.csv"]
DIST_FILES = ["dist_m0.0.csv", "dist_m0.5.csv", "dist_m1.0.csv"]


def load(name):
    return read_csv(str(FIXTURES / name))


def edited_copy(tmp_path, name, drop_row=None, dup_row=None, keep_rows=None):
    """Copy a fixture with selected data rows dropped or duplicated."""
    lines = (FIXTURES / name).read_text().splitlines()
    meta = [l for l in lines if l.startswith("#")]
    body = [l for l in lines if not l.startswith("#")]
    header, rows = body[0], body[1:]
    if drop_row is not None:
        rows = rows[:drop_row] + rows[drop_row + 1:]
    if dup_row is not None:
        rows = rows + [rows[dup_row]]
    if keep_rows is not None:
        rows = rows[:keep_rows]
    path = tmp_path / name
    path.write_text("\n".join(meta + [header] + rows) + "\n")
    return str(path)


# --- heatmap ---------------------------------------------------------------


def test_heatmap_grid_shape_and_values():
    doc = load("sweep_bm.csv")
    ux, uy, matrix = heatmap_grid(doc, "b", "m", "f_c_mean")
    assert np.array_equal(ux, np.linspace(1.0, 2.0, 6))
    assert np.array_equal(uy, np.linspace(0.0, 1.0, 5))
    assert matrix.shape == (5, 6)
    assert matrix.size == doc.n_rows  # one cell per data row
    # spot check: matrix[i, j] must hold the row with (b = ux[j], m = uy[i])
    bs, ms, vs = (column(doc, k) for k in ("b", "m", "f_c_mean"))
    for k in (0, 7, 29):
        i = int(np.searchsorted(uy, ms[k]))
        j = int(np.searchsorted(ux, bs[k]))
        assert matrix[i, j] == vs[k]


def test_heatmap_transpose_symmetry():
    doc = load("sweep_bm.csv")
    _, _, mat = heatmap_grid(doc, "b", "m", "f_c_mean")
    _, _, mat_t = heatmap_grid(doc, "m", "b", "f_c_mean")
    assert np.array_equal(mat_t, mat.T)


def test_heatmap_missing_cell_aborts(tmp_path):
    # data row 7 is the (b=1.2, m=0.5) cell; dropping it must be caught
    path = edited_copy(tmp_path, "sweep_bm.csv", drop_row=7)
    with pytest.raises(SchemaError, match=r"missing grid cell b=1\.2, m=0\.5"):
        heatmap_grid(read_csv(path), "b", "m", "f_c_mean")


def test_heatmap_duplicate_cell_aborts(tmp_path):
    path = edited_copy(tmp_path, "sweep_bm.csv", dup_row=3)
    with pytest.raises(SchemaError, match="duplicate grid cell"):
        heatmap_grid(read_csv(path), "b", "m", "f_c_mean")


def test_heatmap_empty_body_aborts(tmp_path):
    path = edited_copy(tmp_path, "sweep_bm.csv", keep_rows=0)
    with pytest.raises(SchemaError, match="0 data rows"):
        heatmap_grid(read_csv(path), "b", "m", "f_c_mean")


def test_heatmap_uniform_field_renders(tmp_path):
    # an all-zero value field must render without error
    path = tmp_path / "flat.csv"
    path.write_text(
        "# topology = sl\nb,m,f_c_mean\n1,0,0\n2,0,0\n1,1,0\n2,1,0\n"
    )
    out = tmp_path / "flat.png"
    matrix = plot_heatmap(read_csv(str(path)), "b", "m", "f_c_mean", str(out))
    assert np.array_equal(matrix, np.zeros((2, 2)))
    assert out.stat().st_size > 0


def test_plot_heatmap_returns_matrix_and_writes(tmp_path):
    doc = load("sweep_bm.csv")
    out = tmp_path / "heat.png"
    matrix = plot_heatmap(doc, "b", "m", "f_c_mean", str(out))
    assert matrix.shape == (5, 6)
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


# --- lines -----------------------------------------------------------------


def test_line_series_four_topologies():
    docs = [load(name) for name in TOPO_FILES]
    param, xs, series = line_series(docs, "f_c_mean")
    assert param == "b"
    assert np.array_equal(xs, np.linspace(1.0, 2.0, 6))
    assert [label for label, _ in series] == ["hl", "sl", "xl", "ws"]
    for _, ys in series:
        assert ys.shape == (6,)
        assert np.all((ys >= 0.0) & (ys <= 1.0))


def test_line_series_single_input():
    param, xs, series = line_series([load("sweep_b_sl.csv")], "A_mean")
    assert param == "b"
    assert len(series) == 1
    assert series[0][0] == "sl"
    assert np.all(series[0][1] > 0.0)


def test_line_series_grid_mismatch_aborts(tmp_path):
    truncated = edited_copy(tmp_path, "sweep_b_sl.csv", keep_rows=5)
    docs = [load("sweep_b_hl.csv"), read_csv(truncated)]
    with pytest.raises(SchemaError, match="x grid mismatch"):
        line_series(docs, "f_c_mean")


def test_line_series_rejects_two_axis_sweep():
    with pytest.raises(SchemaError, match="two-axis sweep"):
        line_series([load("sweep_bm.csv")], "f_c_mean")


def test_line_series_rejects_non_sweep():
    with pytest.raises(SchemaError, match="not a sweep CSV"):
        line_series([load("dist_m0.0.csv")], "f_c_mean")


def test_line_series_rejects_empty_body(tmp_path):
    path = edited_copy(tmp_path, "sweep_b_xl.csv", keep_rows=0)
    with pytest.raises(SchemaError, match="0 data rows"):
        line_series([read_csv(path)], "f_c_mean")


def test_plot_lines_fixes_fraction_axis(tmp_path, monkeypatch):
    captured = {}
    real_subplots = figures.plt.subplots

    def capture(*args, **kwargs):
        fig, ax = real_subplots(*args, **kwargs)
        captured["ax"] = ax
        return fig, ax

    monkeypatch.setattr(figures.plt, "subplots", capture)
    out = tmp_path / "lines.png"
    plot_lines([load("sweep_b_ws.csv")], "f_c_mean", str(out))
    assert captured["ax"].get_ylim() == (0.0, 1.0)
    assert out.stat().st_size > 0


# --- density ---------------------------------------------------------------


def test_density_curves_one_final_per_file():
    docs = [load(name) for name in DIST_FILES]
    grid, initial, finals = density_curves(docs)
    assert grid.shape == (DENSITY_POINTS,)
    assert initial.shape == (DENSITY_POINTS,)
    assert [label for label, _ in finals] == ["m = 0", "m = 0.5", "m = 1"]
    assert all(curve.shape == (DENSITY_POINTS,) for _, curve in finals)


def test_density_initial_snapshot_structure():
    grid, initial, _ = density_curves([load("dist_m0.0.csv")])
    # initial indices are sums of four uniform weights: mode near 2,
    # support inside [0, 4], total mass close to 1 on the grid
    mode = grid[int(np.argmax(initial))]
    assert 1.5 < mode < 2.5
    assert abs(np.trapezoid(initial, grid) - 1.0) < 0.05


def test_density_shared_initial_snapshot():
    # same base seed, so every m run starts from the same weight draw
    cols = [column(load(name), "A_initial") for name in DIST_FILES]
    assert np.array_equal(cols[0], cols[1])
    assert np.array_equal(cols[0], cols[2])


def test_density_degenerate_final_becomes_spike():
    # the m = 0 run saturates every weight, so A_final is 4 at all nodes;
    # the curve must be a narrow spike there instead of a KDE crash
    doc = load("dist_m0.0.csv")
    assert np.ptp(column(doc, "A_final")) == 0.0
    grid, _, finals = density_curves([doc])
    spike = finals[0][1]
    assert abs(grid[int(np.argmax(spike))] - 4.0) < 0.05
    assert abs(np.trapezoid(spike, grid) - 1.0) < 0.05


def test_density_frozen_run_curves_coincide():
    grid, initial, finals = density_curves([load("dist_frozen.csv")])
    assert len(finals) == 1
    assert np.array_equal(initial, finals[0][1])


def test_density_bandwidth_override():
    docs = [load("dist_m0.5.csv")]
    _, default_curve, _ = density_curves(docs)
    _, wide_curve, _ = density_curves(docs, bandwidth=1.0)
    _, wide_again, _ = density_curves(docs, bandwidth=1.0)
    assert np.array_equal(wide_curve, wide_again)
    assert not np.array_equal(default_curve, wide_curve)


def test_plot_density_writes_png(tmp_path):
    out = tmp_path / "dens.png"
    grid, initial, finals = plot_density([load(n) for n in DIST_FILES], str(out))
    assert len(finals) == 3
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


# --- determinism -----------------------------------------------------------


def test_renders_are_byte_identical(tmp_path):
    heat_doc = load("sweep_bm.csv")
    line_docs = [load(name) for name in TOPO_FILES]
    dist_docs = [load(name) for name in DIST_FILES]
    pairs = []
    for tag in ("one", "two"):
        h = tmp_path / f"heat_{tag}.png"
        l = tmp_path / f"lines_{tag}.png"
        d = tmp_path / f"dens_{tag}.png"
        plot_heatmap(heat_doc, "b", "m", "f_c_mean", str(h))
        plot_lines(line_docs, "f_c_mean", str(l))
        plot_density(dist_docs, str(d))
        pairs.append((h.read_bytes(), l.read_bytes(), d.read_bytes()))
    assert pairs[0] == pairs[1]
