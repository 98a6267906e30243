"""Full-run driver: MC loop, observable series, stationary averages.

Observables are recorded after the imitation phase of each step; the t=0
record and the initial relationship-index snapshot describe the state
before any dynamics.  Replica runs derive independent seeds from
(base seed, replica index) and are bitwise reproducible regardless of how
many worker processes execute them.
"""

from __future__ import annotations

import concurrent.futures as cf
from dataclasses import dataclass, replace

import numpy as np

from . import seeding
from .core import (
    MultiplexState,
    SimParams,
    cooperator_fraction,
    init_state,
    relationship_indices,
    validate_params,
)
from .fastpath import step_fast
from .topology import Graph, build_graph


@dataclass(frozen=True)
class StepRecord:
    t: int
    f_c: float
    mean_A: float


@dataclass
class RunResult:
    params: SimParams            # echo of everything actually used
    f_c: np.ndarray              # [mc_steps + 1], index = step
    mean_A: np.ndarray           # [mc_steps + 1]
    f_c_stationary: float        # mean of f_c over the final window
    A_stationary: float          # mean of mean_A over the same window
    A_snapshot_initial: np.ndarray  # per-node A at t = 0
    A_snapshot_final: np.ndarray    # per-node A at t = mc_steps

    def records(self) -> list[StepRecord]:
        return [
            StepRecord(t, float(fc), float(ma))
            for t, (fc, ma) in enumerate(zip(self.f_c, self.mean_A))
        ]


def run(params: SimParams, initial_strategies: np.ndarray | None = None) -> RunResult:
    """Execute one full run; ``initial_strategies`` overrides the random
    coin flips (testing hook for forced homogeneous starts)."""
    validate_params(params)
    seed = params.seed
    graph = build_graph(params.topology, seeding.stream(seed, seeding.STREAM_TOPOLOGY))
    state = init_state(
        graph,
        seeding.stream(seed, seeding.STREAM_INIT_WEIGHTS),
        seeding.stream(seed, seeding.STREAM_INIT_STRATEGIES),
    )
    if initial_strategies is not None:
        state.strategies = np.asarray(initial_strategies, dtype=np.int8).copy()

    steps = params.mc_steps
    f_c = np.empty(steps + 1)
    mean_a = np.empty(steps + 1)
    a0 = relationship_indices(state, graph)
    inv_n = 1.0 / graph.n
    f_c[0] = cooperator_fraction(state)
    # every unit of weight contributes to the A of both endpoints
    mean_a[0] = 2.0 * state.weights.sum() * inv_n

    dyn = seeding.stream(seed, seeding.STREAM_DYNAMICS)
    for t in range(1, steps + 1):
        step_fast(state, graph, params, dyn)
        f_c[t] = cooperator_fraction(state)
        mean_a[t] = 2.0 * state.weights.sum() * inv_n

    window = params.measure_window
    return RunResult(
        params=params,
        f_c=f_c,
        mean_A=mean_a,
        f_c_stationary=float(f_c[-window:].mean()),
        A_stationary=float(mean_a[-window:].mean()),
        A_snapshot_initial=a0,
        A_snapshot_final=relationship_indices(state, graph),
    )


def replica_params(params: SimParams, index: int) -> SimParams:
    return replace(params, seed=seeding.derive_seed(params.seed, index))


def run_replicas(
    params: SimParams, n_replicas: int, workers: int = 1
) -> list[RunResult]:
    """Independent replicas with derived seeds, ordered by replica index."""
    if n_replicas < 1:
        raise ValueError(f"n_replicas={n_replicas} must be >= 1")
    jobs = [replica_params(params, i) for i in range(n_replicas)]
    return run_jobs(jobs, workers)


def run_jobs(jobs: list[SimParams], workers: int = 1) -> list[RunResult]:
    """Run a list of parameter sets, preserving input order in the output."""
    if workers <= 1 or len(jobs) <= 1:
        return [run(p) for p in jobs]
    with cf.ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(run, jobs))


def build_run_graph(params: SimParams) -> Graph:
    """The exact graph a run with these params would use (same stream)."""
    return build_graph(
        params.topology, seeding.stream(params.seed, seeding.STREAM_TOPOLOGY)
    )


def initial_state_of(params: SimParams, graph: Graph | None = None) -> MultiplexState:
    """The exact t=0 state of a run with these params."""
    if graph is None:
        graph = build_run_graph(params)
    return init_state(
        graph,
        seeding.stream(params.seed, seeding.STREAM_INIT_WEIGHTS),
        seeding.stream(params.seed, seeding.STREAM_INIT_STRATEGIES),
    )
