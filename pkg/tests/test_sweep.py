"""Sweep grid construction and replica-averaged rows."""

from dataclasses import replace

import numpy as np
import pytest

from coevonet import seeding
from coevonet.core import ParameterError, SimParams
from coevonet.engine import run
from coevonet.sweep import (
    SWEEPABLE,
    SweepAxis,
    SweepSpec,
    grid_points,
    run_sweep,
    validate_spec,
)
from coevonet.topology import Topology, TopologyKind


def tiny_base(**kw):
    base = SimParams(
        topology=Topology(kind=TopologyKind.SQUARE, side_length=6),
        mc_steps=40,
        measure_window=10,
        seed=77,
    )
    return replace(base, **kw)


def test_sweepable_axes():
    assert SWEEPABLE == ("b", "m", "p", "gamma")


def test_grid_cardinality_two_axes():
    spec = SweepSpec(
        base=tiny_base(),
        axes=(SweepAxis("b", 1.0, 2.0, 11), SweepAxis("gamma", 0.0, 1.0, 11)),
    )
    pts = grid_points(spec)
    assert len(pts) == 121


def test_grid_order_first_axis_slowest():
    spec = SweepSpec(
        base=tiny_base(),
        axes=(SweepAxis("b", 1.0, 2.0, 3), SweepAxis("gamma", 0.0, 1.0, 2)),
    )
    pts = grid_points(spec)
    got = [(pt.b, pt.gamma) for pt in pts]
    assert got == [
        (1.0, 0.0), (1.0, 1.0),
        (1.5, 0.0), (1.5, 1.0),
        (2.0, 0.0), (2.0, 1.0),
    ]


def test_grid_values_are_linspace():
    spec = SweepSpec(base=tiny_base(), axes=(SweepAxis("m", 0.0, 1.0, 5),))
    pts = grid_points(spec)
    assert [pt.m for pt in pts] == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])
    assert len(pts) == 5


def test_grid_point_seeds_derive_from_coordinates():
    spec = SweepSpec(
        base=tiny_base(),
        axes=(SweepAxis("b", 1.0, 2.0, 3), SweepAxis("gamma", 0.0, 1.0, 2)),
    )
    pts = grid_points(spec)
    assert pts[0].seed == seeding.derive_seed(77, 0, 0)
    assert pts[1].seed == seeding.derive_seed(77, 0, 1)
    assert pts[5].seed == seeding.derive_seed(77, 2, 1)
    assert len({pt.seed for pt in pts}) == len(pts)


def test_empty_axes_single_point():
    spec = SweepSpec(base=tiny_base())
    pts = grid_points(spec)
    assert len(pts) == 1
    assert pts[0].seed == seeding.derive_seed(77)


def test_validation_rejects_bad_specs():
    with pytest.raises(ParameterError):
        validate_spec(SweepSpec(base=tiny_base(), axes=(
            SweepAxis("b", 1.0, 2.0, 2), SweepAxis("m", 0.0, 1.0, 2),
            SweepAxis("p", 0.0, 1.0, 2),
        )))
    with pytest.raises(ParameterError):
        validate_spec(SweepSpec(base=tiny_base(), axes=(SweepAxis("delta", 0.0, 1.0, 2),)))
    with pytest.raises(ParameterError):
        validate_spec(SweepSpec(base=tiny_base(), axes=(SweepAxis("kappa", 0.1, 1.0, 2),)))
    with pytest.raises(ParameterError):
        validate_spec(SweepSpec(base=tiny_base(), axes=(SweepAxis("b", 0.5, 2.0, 2),)))
    with pytest.raises(ParameterError):
        validate_spec(SweepSpec(base=tiny_base(), axes=(SweepAxis("b", 1.0, 2.0, 0),)))
    with pytest.raises(ParameterError):
        validate_spec(SweepSpec(base=tiny_base(), replicas=0))


def test_rows_reproduce_and_ignore_worker_count():
    spec = SweepSpec(
        base=tiny_base(),
        axes=(SweepAxis("b", 1.0, 2.0, 2), SweepAxis("gamma", 0.0, 0.8, 2)),
        replicas=2,
    )
    rows_a = run_sweep(spec, workers=1)
    rows_b = run_sweep(spec, workers=1)
    rows_c = run_sweep(spec, workers=3)
    assert len(rows_a) == 4
    for a, b, c in zip(rows_a, rows_b, rows_c):
        assert a == b == c


def test_row_statistics_match_direct_replica_runs():
    # a row's mean/std must equal a ddof=0 recompute over its replica runs,
    # each of which is a plain run at seed derived (point seed, replica idx)
    spec = SweepSpec(base=tiny_base(), axes=(SweepAxis("m", 0.0, 1.0, 3),),
                     replicas=3)
    rows = run_sweep(spec)
    pts = grid_points(spec)
    for row, pt in zip(rows, pts):
        assert row.params == pt
        fc = []
        aa = []
        for r in range(spec.replicas):
            res = run(replace(pt, seed=seeding.derive_seed(pt.seed, r)))
            fc.append(res.f_c_stationary)
            aa.append(res.A_stationary)
        assert row.replicas == 3
        assert row.f_c_mean == pytest.approx(np.mean(fc), abs=1e-12)
        assert row.f_c_std == pytest.approx(np.std(fc), abs=1e-12)
        assert row.A_mean == pytest.approx(np.mean(aa), abs=1e-12)
        assert row.A_std == pytest.approx(np.std(aa), abs=1e-12)


def test_single_replica_std_zero():
    spec = SweepSpec(base=tiny_base(), axes=(SweepAxis("b", 1.0, 2.0, 2),),
                     replicas=1)
    rows = run_sweep(spec)
    assert all(row.f_c_std == 0.0 and row.A_std == 0.0 for row in rows)
