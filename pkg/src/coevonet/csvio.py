"""CSV emission: `#` metadata headers, 6-significant-digit bodies, LF only.

Every file embeds the complete parameter set that produced it (delta and
kappa included), so no row is ambiguous about the constants in effect.
Seeds are echoed verbatim; nothing volatile (timestamps, hostnames, worker
counts) is written, keeping reruns byte-identical.
"""

from __future__ import annotations

import sys
from contextlib import contextmanager
from typing import IO, Iterable

from .core import SimParams
from .engine import RunResult
from .sweep import SweepRow, SweepSpec
from .topology import TopologyKind


def fmt(x: float) -> str:
    return format(float(x), ".6g")


def params_metadata(params: SimParams) -> list[str]:
    topo = params.topology
    lines = [
        f"topology = {topo.kind.value}",
        f"n = {topo.node_count}",
    ]
    if topo.kind is TopologyKind.WATTS_STROGATZ:
        lines += [
            f"ws_degree = {topo.ws_degree}",
            f"ws_rewire = {fmt(topo.ws_rewire_prob)}",
        ]
    lines += [
        f"b = {fmt(params.b)}",
        f"m = {fmt(params.m)}",
        f"p = {fmt(params.p)}",
        f"gamma = {fmt(params.gamma)}",
        f"delta = {fmt(params.delta)}",
        f"kappa = {fmt(params.kappa)}",
        f"steps = {params.mc_steps}",
        f"window = {params.measure_window}",
        f"seed = {params.seed}",
    ]
    return lines


def _write_header(fh: IO[str], command: str, meta: Iterable[str]) -> None:
    fh.write(f"# coevonet {command}\n")
    for line in meta:
        fh.write(f"# {line}\n")


@contextmanager
def open_output(path: str | None):
    """Open ``path`` for writing, or hand back stdout when path is None."""
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def write_run_csv(fh: IO[str], result: RunResult) -> None:
    _write_header(fh, "run", params_metadata(result.params))
    fh.write("t,f_c,mean_A\n")
    for t, (fc, ma) in enumerate(zip(result.f_c, result.mean_A)):
        fh.write(f"{t},{fmt(fc)},{fmt(ma)}\n")


def write_dist_csv(fh: IO[str], result: RunResult) -> None:
    _write_header(fh, "dist", params_metadata(result.params))
    fh.write("node_id,A_initial,A_final\n")
    for node, (a0, a1) in enumerate(
        zip(result.A_snapshot_initial, result.A_snapshot_final)
    ):
        fh.write(f"{node},{fmt(a0)},{fmt(a1)}\n")


SWEEP_COLUMNS = (
    "topology,N,b,m,p,gamma,delta,kappa,mc_steps,measure_window,replicas,seed,"
    "f_c_mean,f_c_std,A_mean,A_std"
)


def write_sweep_csv(fh: IO[str], spec: SweepSpec, rows: list[SweepRow]) -> None:
    meta = params_metadata(spec.base)
    meta.append(f"replicas = {spec.replicas}")
    for k, axis in enumerate(spec.axes, start=1):
        meta.append(
            f"axis{k} = {axis.param}:{fmt(axis.start)}:{fmt(axis.stop)}:{axis.points}"
        )
    _write_header(fh, "sweep", meta)
    fh.write(SWEEP_COLUMNS + "\n")
    for row in rows:
        p = row.params
        fh.write(
            ",".join(
                [
                    p.topology.kind.value,
                    str(p.topology.node_count),
                    fmt(p.b),
                    fmt(p.m),
                    fmt(p.p),
                    fmt(p.gamma),
                    fmt(p.delta),
                    fmt(p.kappa),
                    str(p.mc_steps),
                    str(p.measure_window),
                    str(row.replicas),
                    str(p.seed),
                    fmt(row.f_c_mean),
                    fmt(row.f_c_std),
                    fmt(row.A_mean),
                    fmt(row.A_std),
                ]
            )
            + "\n"
        )
