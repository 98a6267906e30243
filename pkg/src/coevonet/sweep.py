"""Grid sweeps over (b, m, p, gamma) with replica averaging.

Grid points are laid out in lexicographic order with the first-listed axis
slowest, so downstream heatmap reshaping is unambiguous.  Every grid point
gets a deterministic seed derived from (base seed, grid coordinates);
replicas below it derive from (point seed, replica index) exactly as
``run_replicas`` does.
"""

from __future__ import annotations

import concurrent.futures as cf
from dataclasses import dataclass, replace

import numpy as np

from . import seeding
from .core import ParameterError, SimParams, validate_params
from .engine import run

SWEEPABLE = ("b", "m", "p", "gamma")


@dataclass(frozen=True)
class SweepAxis:
    param: str
    start: float
    stop: float
    points: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepSpec:
    base: SimParams
    axes: tuple[SweepAxis, ...] = ()
    replicas: int = 5


@dataclass(frozen=True)
class SweepRow:
    params: SimParams        # the grid point's parameter set, seed included
    replicas: int
    f_c_mean: float
    f_c_std: float
    A_mean: float
    A_std: float


def validate_spec(spec: SweepSpec) -> None:
    validate_params(spec.base)
    if len(spec.axes) > 2:
        raise ParameterError(f"{len(spec.axes)} sweep axes given, at most 2 allowed")
    if spec.replicas < 1:
        raise ParameterError(f"replicas={spec.replicas} must be >= 1")
    for axis in spec.axes:
        if axis.param not in SWEEPABLE:
            raise ParameterError(
                f"sweep axis {axis.param!r} not one of {', '.join(SWEEPABLE)}"
            )
        if axis.points < 1:
            raise ParameterError(f"sweep axis {axis.param}: points={axis.points} must be >= 1")
        # every grid value must satisfy the SimParams bounds
        for value in (axis.start, axis.stop):
            validate_params(replace(spec.base, **{axis.param: float(value)}))


def grid_points(spec: SweepSpec) -> list[SimParams]:
    """Parameter set per grid point, lexicographic order, derived seeds."""
    axes = spec.axes
    if not axes:
        coords = [()]
    elif len(axes) == 1:
        coords = [(i,) for i in range(axes[0].points)]
    else:
        coords = [
            (i, j) for i in range(axes[0].points) for j in range(axes[1].points)
        ]
    points = []
    for c in coords:
        overrides = {
            axes[k].param: float(axes[k].values()[idx]) for k, idx in enumerate(c)
        }
        overrides["seed"] = seeding.derive_seed(spec.base.seed, *c)
        points.append(replace(spec.base, **overrides))
    return points


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """One SweepRow per grid point; output identical for any worker count."""
    validate_spec(spec)
    points = grid_points(spec)
    jobs = [
        replace(pt, seed=seeding.derive_seed(pt.seed, r))
        for pt in points
        for r in range(spec.replicas)
    ]
    if workers <= 1 or len(jobs) <= 1:
        results = [_stationary_pair(job) for job in jobs]
    else:
        with cf.ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_stationary_pair, jobs, chunksize=1))

    rows = []
    for k, pt in enumerate(points):
        chunk = results[k * spec.replicas:(k + 1) * spec.replicas]
        fc = np.array([r[0] for r in chunk])
        aa = np.array([r[1] for r in chunk])
        rows.append(
            SweepRow(
                params=pt,
                replicas=spec.replicas,
                f_c_mean=float(fc.mean()),
                f_c_std=float(fc.std()),
                A_mean=float(aa.mean()),
                A_std=float(aa.std()),
            )
        )
    return rows


def _stationary_pair(params: SimParams) -> tuple[float, float]:
    result = run(params)
    return result.f_c_stationary, result.A_stationary
