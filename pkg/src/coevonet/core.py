"""One Monte Carlo step of the coupled relationship/game dynamics.

A step consists of four phases in fixed order: reset payoffs, sample the
interaction set (threshold rule plus recommendations), play the weak
prisoner's dilemma on every sampled dyad, adapt the relationship weights of
the dyads that are relationship edges, then a synchronous fitness-driven
imitation pass over all agents.

The per-step random draw layout is fixed regardless of state, so a
trajectory depends only on (parameters, seed): E uniforms for the direct
phase, 2E for the two recommendation directions per edge, then N selection
and N adoption uniforms for the imitation phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .topology import Graph, Topology, TopologyKind

# strategy encoding used across all arrays
COOPERATE = 1
DEFECT = 0

DIRECT = 0
RECOMMENDED = 1


class ParameterError(ValueError):
    """Raised when a SimParams bound is violated; message names the bound."""


@dataclass(frozen=True)
class SimParams:
    """All model constants of one run.

    ``delta`` (weight step) and ``kappa`` (selection noise) have no
    canonical values; the 0.1 defaults are explicit choices and are
    echoed into every output.
    """

    b: float = 1.5
    m: float = 0.5
    p: float = 0.9
    gamma: float = 0.2
    delta: float = 0.1
    kappa: float = 0.1
    topology: Topology = field(
        default_factory=lambda: Topology(kind=TopologyKind.SQUARE, side_length=50)
    )
    mc_steps: int = 10000
    measure_window: int = 1000
    seed: int = 1


def validate_params(params: SimParams) -> None:
    if not 1.0 <= params.b <= 2.0:
        raise ParameterError(f"b={params.b} outside [1, 2]")
    if not 0.0 <= params.m <= 1.0:
        raise ParameterError(f"m={params.m} outside [0, 1]")
    if not 0.0 <= params.p <= 1.0:
        raise ParameterError(f"p={params.p} outside [0, 1]")
    if not 0.0 <= params.gamma <= 1.0:
        raise ParameterError(f"gamma={params.gamma} outside [0, 1]")
    # delta=0 is the frozen-weights limit used by invariance checks
    if not 0.0 <= params.delta <= 1.0:
        raise ParameterError(f"delta={params.delta} outside [0, 1]")
    if not params.kappa > 0.0:
        raise ParameterError(f"kappa={params.kappa} must be > 0")
    if params.mc_steps < 1:
        raise ParameterError(f"mc_steps={params.mc_steps} must be >= 1")
    if not 1 <= params.measure_window <= params.mc_steps:
        raise ParameterError(
            f"measure_window={params.measure_window} outside [1, mc_steps={params.mc_steps}]"
        )
    if not 0 <= params.seed < 2**64:
        raise ParameterError(f"seed={params.seed} outside [0, 2**64)")
    params.topology.validate()


@dataclass
class MultiplexState:
    """Edge weights, per-agent strategies, and the current step's payoffs."""

    weights: np.ndarray    # float64 [E], each in [0, 1]
    strategies: np.ndarray  # int8 [N], COOPERATE or DEFECT
    payoffs: np.ndarray    # float64 [N], reset at the start of each step

    def copy(self) -> "MultiplexState":
        return MultiplexState(
            self.weights.copy(), self.strategies.copy(), self.payoffs.copy()
        )


@dataclass
class InteractionSet:
    """The dyads that play this step; unordered pairs, each at most once.

    ``edge_id[d]`` is the relationship-layer edge index of dyad d, or -1
    for recommended dyads between non-adjacent agents.
    """

    u: np.ndarray        # int64, u < v
    v: np.ndarray
    origin: np.ndarray   # uint8, DIRECT or RECOMMENDED
    edge_id: np.ndarray  # int64, -1 when the dyad is not an edge

    def __len__(self) -> int:
        return int(self.u.size)

    def pairs(self) -> set[tuple[int, int]]:
        return {(int(a), int(b)) for a, b in zip(self.u, self.v)}


def init_state(
    graph: Graph,
    weight_rng: np.random.Generator,
    strategy_rng: np.random.Generator | None = None,
) -> MultiplexState:
    """Uniform[0,1] weights, fair-coin strategies, zero payoffs."""
    if strategy_rng is None:
        strategy_rng = weight_rng
    weights = weight_rng.random(graph.edge_count)
    strategies = (strategy_rng.random(graph.n) < 0.5).astype(np.int8)
    payoffs = np.zeros(graph.n)
    return MultiplexState(weights, strategies, payoffs)


# ---------------------------------------------------------------------------
# relationship index, fitness, partner selection
# ---------------------------------------------------------------------------

def relationship_indices(state: MultiplexState, graph: Graph) -> np.ndarray:
    """A_i = sum of node i's incident weights, for all nodes at once."""
    w = state.weights
    return np.bincount(graph.eu, weights=w, minlength=graph.n) + np.bincount(
        graph.ev, weights=w, minlength=graph.n
    )


def relationship_index(state: MultiplexState, graph: Graph, i: int) -> float:
    return float(state.weights[graph.incident_edges(i)].sum())


def fitness_all(state: MultiplexState, graph: Graph, m: float) -> np.ndarray:
    return m * state.payoffs + relationship_indices(state, graph)


def fitness(state: MultiplexState, graph: Graph, i: int, m: float) -> float:
    return m * float(state.payoffs[i]) + relationship_index(state, graph, i)


def best_neighbors(state: MultiplexState, graph: Graph) -> np.ndarray:
    """Strongest-tie neighbor of every node; ties break to the lowest id.

    Returns -1 for isolated nodes (cannot occur on the built-in topologies).
    """
    if graph.max_degree == 0:
        return np.full(graph.n, -1, dtype=np.int64)
    dense = graph._w_dense
    dense.fill(0.0)
    dense[graph._slot_flat] = state.weights[graph.nbr_edge]
    # a node's slots are its neighbors in ascending id order followed by
    # zero padding, so the first argmax hit is the lowest-id strongest tie
    # (all-zero weights inclusive) and padding is never preferred
    cols = np.argmax(dense.reshape(graph.n, graph.max_degree), axis=1)
    return graph._nbr_dense[np.arange(graph.n), cols]


def best_neighbor(state: MultiplexState, graph: Graph, x: int) -> int:
    nbrs = graph.neighbors(x)
    if nbrs.size == 0:
        return -1
    w = state.weights[graph.incident_edges(x)]
    return int(nbrs[np.argmax(w)])


def selection_probs(state: MultiplexState, graph: Graph, i: int) -> np.ndarray:
    """W(i,j)/A_i over node i's neighbors; zeros when A_i = 0."""
    w = state.weights[graph.incident_edges(i)]
    total = w.sum()
    if total <= 0.0:
        return np.zeros_like(w)
    return w / total


def select_model(
    state: MultiplexState, graph: Graph, i: int, rng: np.random.Generator
) -> int | None:
    """Sample a neighbor with probability W(i,j)/A_i; None when A_i = 0."""
    nbrs = graph.neighbors(i)
    if nbrs.size == 0:
        return None
    w = state.weights[graph.incident_edges(i)]
    c = np.cumsum(w)
    total = c[-1]
    if total <= 0.0:
        return None
    pos = int(np.searchsorted(c, rng.random() * total, side="right"))
    return int(nbrs[min(pos, nbrs.size - 1)])


def fermi_adopt_prob(f_i, f_j, kappa: float):
    """Adoption probability 1 / (1 + exp((f_i - f_j)/kappa)), overflow-safe."""
    return expit((np.asarray(f_j, dtype=float) - f_i) / kappa)


# ---------------------------------------------------------------------------
# step phases
# ---------------------------------------------------------------------------

# dense n*n dedup scratch is only worth its memory up to this many cells
_PAIR_MARK_LIMIT = 16_000_000


def _dense_scratch(graph: Graph):
    """(pair-mark, edge-lookup) n*n scratches, lazily built and cached on the
    graph; None when the graph is too large for them.  The mark array is
    all-zeros between uses; the lookup maps pair key -> edge id + 1."""
    n = graph.n
    if n * n > _PAIR_MARK_LIMIT:
        return None
    if graph._pair_mark is None:
        graph._pair_mark = np.zeros(n * n, dtype=np.int32)
    if graph._edge_lookup is None:
        lut = np.zeros(n * n, dtype=np.int32)
        lut[graph.edge_key] = np.arange(1, graph.edge_count + 1, dtype=np.int32)
        graph._edge_lookup = lut
    return graph._pair_mark, graph._edge_lookup


def _dedup_recommendations(
    graph: Graph, rec_keys: np.ndarray, direct_keys: np.ndarray
) -> np.ndarray:
    """Mask over rec candidates keeping the last occurrence of each pair key,
    minus any key already drawn directly.  Linear-time scatter on a dense
    scratch when the graph is small enough, sort-based otherwise; both paths
    return identical masks."""
    n = graph.n
    scratch = _dense_scratch(graph)
    if scratch is not None:
        mark = scratch[0]
        pos = np.arange(1, rec_keys.size + 1, dtype=np.int32)
        mark[rec_keys] = pos       # duplicate keys: the last write survives
        mark[direct_keys] = -1     # a direct draw outranks any recommendation
        keep = mark[rec_keys] == pos
        mark[rec_keys] = 0         # restore the scratch to all zeros
        mark[direct_keys] = 0
        return keep
    order = np.argsort(rec_keys, kind="stable")
    sk = rec_keys[order]
    last = np.empty(sk.size, dtype=bool)
    if sk.size:
        last[-1] = True
        np.not_equal(sk[1:], sk[:-1], out=last[:-1])
    uniq_idx = order[last]
    uniq_keys = sk[last]
    # direct_keys ascend (edge keys in edge-id order), so membership is a search
    ins = np.searchsorted(direct_keys, uniq_keys)
    ins_c = np.minimum(ins, max(direct_keys.size - 1, 0))
    if direct_keys.size:
        dup = direct_keys[ins_c] == uniq_keys
    else:
        dup = np.zeros(uniq_keys.size, dtype=bool)
    keep = np.zeros(rec_keys.size, dtype=bool)
    keep[uniq_idx[~dup]] = True
    return keep


def sample_interactions(
    state: MultiplexState, graph: Graph, params: SimParams, rng: np.random.Generator
) -> InteractionSet:
    """Threshold-gated direct games plus strongest-tie recommendations.

    Direct phase: each edge (x,y) enters with probability p when
    W(x,y) > gamma, otherwise with probability 1-p.  Recommendation phase:
    along every edge with W > gamma, each endpoint x independently (with
    probability p) proposes its strongest-tie neighbor z as a partner for
    the other endpoint y; {z,y} joins unless z == y or the pair is already
    in the set.  Set semantics: a dyad drawn directly keeps the direct tag.
    """
    n = graph.n
    w = state.weights
    u_direct = rng.random(w.size)
    u_rec = rng.random((2, w.size))
    if w.size == 0:
        i64 = np.empty(0, dtype=np.int64)
        return InteractionSet(i64, i64.copy(), np.empty(0, np.uint8), i64.copy())

    above = w > params.gamma
    direct_eid = np.flatnonzero(u_direct < np.where(above, params.p, 1.0 - params.p))
    d_lo = graph.eu[direct_eid]
    d_hi = graph.ev[direct_eid]

    best = best_neighbors(state, graph)
    fire = (u_rec < params.p) & above
    f0 = np.flatnonzero(fire[0])    # eu recommends best[eu] to ev
    f1 = np.flatnonzero(fire[1])    # ev recommends best[ev] to eu
    cand_a = np.concatenate([best[graph.eu[f0]], best[graph.ev[f1]]])
    cand_b = np.concatenate([graph.ev[f0], graph.eu[f1]])
    not_self = cand_a != cand_b
    cand_a = cand_a[not_self]
    cand_b = cand_b[not_self]
    r_lo = np.minimum(cand_a, cand_b)
    r_hi = np.maximum(cand_a, cand_b)

    keep = _dedup_recommendations(
        graph, r_lo * n + r_hi, graph.edge_key[direct_eid]
    )
    r_lo = r_lo[keep]
    r_hi = r_hi[keep]

    rec_keys = r_lo * n + r_hi
    if graph._edge_lookup is not None:
        rec_eid = graph._edge_lookup[rec_keys].astype(np.int64) - 1
    else:
        pos = np.searchsorted(graph.edge_key, rec_keys)
        pos_c = np.minimum(pos, graph.edge_count - 1)
        rec_eid = np.where(graph.edge_key[pos_c] == rec_keys, pos_c, -1)

    dy_u = np.concatenate([d_lo, r_lo])
    dy_v = np.concatenate([d_hi, r_hi])
    origin = np.zeros(dy_u.size, dtype=np.uint8)
    origin[d_lo.size:] = RECOMMENDED
    edge_id = np.concatenate([direct_eid, rec_eid])
    return InteractionSet(dy_u, dy_v, origin, edge_id)


def play_games(state: MultiplexState, interactions: InteractionSet, b: float) -> None:
    """Accumulate weak-PD payoffs: (C,C) -> 1 each, defector vs cooperator -> b."""
    s = state.strategies
    su = s[interactions.u]
    sv = s[interactions.v]
    # per-endpoint payoff by strategy pair (mine, theirs):
    # (D,D) -> 0, (D,C) -> b, (C,D) -> 0, (C,C) -> 1
    lut = np.array([0.0, b, 0.0, 1.0])
    mine = np.concatenate([su, sv])
    theirs = np.concatenate([sv, su])
    pays = lut[(mine << 1) | theirs]
    ends = np.concatenate([interactions.u, interactions.v])
    state.payoffs += np.bincount(ends, weights=pays, minlength=state.payoffs.size)


def weight_update_rule(w, s_i, s_j, delta):
    """W' per played dyad: +delta when both cooperate, -delta when both
    defect, unchanged otherwise; clamped to [0, 1].  Vectorized."""
    w = np.asarray(w, dtype=float)
    both_c = np.logical_and(np.equal(s_i, COOPERATE), np.equal(s_j, COOPERATE))
    both_d = np.logical_and(np.equal(s_i, DEFECT), np.equal(s_j, DEFECT))
    shift = delta * (both_c.astype(float) - both_d.astype(float))
    return np.clip(w + shift, 0.0, 1.0)


def update_weights(
    state: MultiplexState, interactions: InteractionSet, delta: float
) -> None:
    """Apply the weight rule to every played dyad that is a relationship edge.

    Mixed dyads and unplayed edges are left bit-identical; recommended dyads
    without an edge carry payoffs only and never touch weights.
    """
    on_edge = interactions.edge_id >= 0
    eids = interactions.edge_id[on_edge]
    if eids.size == 0:
        return
    su = state.strategies[interactions.u[on_edge]].astype(np.int64)
    sv = state.strategies[interactions.v[on_edge]]
    # su+sv-1 is +1 for both-C, 0 for mixed, -1 for both-D: the shift sign.
    # A mixed dyad gets shift exactly 0.0, which leaves its weight bit-equal.
    shift = delta * (su + sv - 1)
    w = state.weights
    w[eids] = np.clip(w[eids] + shift, 0.0, 1.0)


def _select_models_batch(
    state: MultiplexState, graph: Graph, draws: np.ndarray
) -> np.ndarray:
    """One weighted-neighbor draw per node from precomputed uniforms; -1
    where the node's incident weight mass is zero.

    Works on the dense per-node weight matrix: a row cumsum turns each draw
    into a slot index via counting, equivalent to a right-bisect of the
    node's own cumulative weights.  Zero padding never attracts a draw.
    """
    if graph.max_degree == 0:
        return np.full(graph.n, -1, dtype=np.int64)
    dense = graph._w_dense
    dense.fill(0.0)
    dense[graph._slot_flat] = state.weights[graph.nbr_edge]
    cum = np.cumsum(dense.reshape(graph.n, graph.max_degree), axis=1)
    total = cum[:, -1]
    targets = draws * total
    cols = np.sum(cum <= targets[:, None], axis=1)
    cols = np.minimum(cols, np.maximum(graph.deg - 1, 0))  # fp boundary guard
    chosen = graph._nbr_dense[np.arange(graph.n), cols]
    return np.where(total > 0.0, chosen, -1)


def imitation_phase(
    state: MultiplexState, graph: Graph, params: SimParams, rng: np.random.Generator
) -> None:
    """Synchronous imitation sweep.

    Every agent draws a model neighbor with probability W(i,j)/A_i (skipped
    when A_i = 0) and adopts its strategy with the Fermi probability on the
    fitness gap.  All reads use the pre-phase strategies and fitnesses; the
    new strategies land atomically at the end.  Draw layout: N selection
    uniforms in node order, then N adoption uniforms in node order.
    """
    a = relationship_indices(state, graph)
    f = params.m * state.payoffs + a
    sel_draws = rng.random(graph.n)
    model = _select_models_batch(state, graph, sel_draws)
    adopt_draws = rng.random(graph.n)
    valid = model >= 0
    safe = np.where(valid, model, 0)
    prob = expit((f[safe] - f) / params.kappa)
    adopt = valid & (adopt_draws < prob)
    state.strategies = np.where(adopt, state.strategies[safe], state.strategies)


def step(
    state: MultiplexState, graph: Graph, params: SimParams, rng: np.random.Generator
) -> InteractionSet:
    """One full MC step; returns the interaction set that was played."""
    state.payoffs.fill(0.0)
    interactions = sample_interactions(state, graph, params, rng)
    play_games(state, interactions, params.b)
    update_weights(state, interactions, params.delta)
    imitation_phase(state, graph, params, rng)
    return interactions


def cooperator_fraction(state: MultiplexState) -> float:
    return np.count_nonzero(state.strategies) / state.strategies.size
