"""Coevolving relationship weights and weak prisoner's dilemma strategies
on multiplex networks: deterministic Monte Carlo simulator, sweep CLI."""

from .core import (
    COOPERATE,
    DEFECT,
    InteractionSet,
    MultiplexState,
    ParameterError,
    SimParams,
    best_neighbor,
    fermi_adopt_prob,
    fitness,
    init_state,
    relationship_index,
    relationship_indices,
    sample_interactions,
    select_model,
    step,
    validate_params,
)
from .engine import RunResult, StepRecord, run, run_replicas
from .sweep import SweepAxis, SweepRow, SweepSpec, run_sweep
from .topology import (
    Graph,
    Topology,
    TopologyError,
    TopologyKind,
    build_graph,
    build_lattice,
    build_watts_strogatz,
    write_edge_list,
)

__all__ = [
    "COOPERATE", "DEFECT", "InteractionSet", "MultiplexState", "ParameterError",
    "SimParams", "best_neighbor", "fermi_adopt_prob", "fitness", "init_state",
    "relationship_index", "relationship_indices", "sample_interactions",
    "select_model", "step", "validate_params",
    "RunResult", "StepRecord", "run", "run_replicas",
    "SweepAxis", "SweepRow", "SweepSpec", "run_sweep",
    "Graph", "Topology", "TopologyError", "TopologyKind", "build_graph",
    "build_lattice", "build_watts_strogatz", "write_edge_list",
]
