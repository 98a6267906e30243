"""Relationship-layer graphs: periodic lattices and Watts-Strogatz small worlds.

All four builders return the same immutable :class:`Graph` structure: a
canonical edge list (lexicographically sorted, u < v) plus a CSR-style
neighbor table sorted by neighbor id.  Node indexing is row-major over the
L x L grid for lattices and 0..n-1 around the ring for the small-world
graph, so the same (kind, size, seed) always yields byte-identical
adjacency.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


class TopologyKind(str, Enum):
    HONEYCOMB = "hl"
    SQUARE = "sl"
    TRIANGULAR = "xl"
    WATTS_STROGATZ = "ws"


LATTICE_DEGREE = {
    TopologyKind.HONEYCOMB: 3,
    TopologyKind.SQUARE: 4,
    TopologyKind.TRIANGULAR: 6,
}

# give up on a rewire target after this many collisions and keep the ring edge
MAX_REWIRE_RETRIES = 100


class TopologyError(ValueError):
    """Raised for topology parameters the builders cannot honor."""


@dataclass(frozen=True)
class Topology:
    """Parameters selecting one relationship-layer graph.

    ``side_length`` applies to the three lattices (N = side_length**2);
    ``ws_nodes``, ``ws_degree`` and ``ws_rewire_prob`` apply to the
    small-world graph.  ``ws_rewire_prob`` is the structural rewiring
    probability (0.5 in the reference setting), unrelated to the
    interaction probability of the game dynamics.
    """

    kind: TopologyKind
    side_length: int | None = None
    ws_nodes: int | None = None
    ws_degree: int = 10
    ws_rewire_prob: float = 0.5

    @property
    def node_count(self) -> int:
        if self.kind is TopologyKind.WATTS_STROGATZ:
            if self.ws_nodes is None:
                raise TopologyError("ws topology requires ws_nodes")
            return self.ws_nodes
        if self.side_length is None:
            raise TopologyError(f"{self.kind.value} topology requires side_length")
        return self.side_length * self.side_length

    def validate(self) -> None:
        if self.kind is TopologyKind.WATTS_STROGATZ:
            n, k, beta = self.ws_nodes, self.ws_degree, self.ws_rewire_prob
            if n is None or n < 2:
                raise TopologyError(f"ws_nodes={n} must be >= 2")
            if k <= 0 or k % 2 != 0:
                raise TopologyError(f"ws_degree={k} must be even and positive")
            if k >= n:
                raise TopologyError(f"ws_degree={k} must be < ws_nodes={n}")
            if not 0.0 <= beta <= 1.0:
                raise TopologyError(f"ws_rewire_prob={beta} outside [0, 1]")
        else:
            side = self.side_length
            if side is None or side < 4:
                raise TopologyError(f"side_length={side} must be >= 4")
            if self.kind is TopologyKind.HONEYCOMB and side % 2 != 0:
                raise TopologyError(
                    f"side_length={side} must be even for the honeycomb lattice"
                )


class Graph:
    """Undirected simple graph with a fixed canonical representation.

    Edges are stored as parallel arrays (eu[e], ev[e]) with eu < ev, sorted
    lexicographically; ``edge_key = eu * n + ev`` is therefore ascending and
    supports binary-search pair lookup.  The neighbor table (indptr, nbr,
    nbr_edge) lists each node's neighbors in ascending id order, which fixes
    deterministic tie-breaking for argmax scans.
    """

    __slots__ = (
        "n", "eu", "ev", "edge_key", "indptr", "nbr", "nbr_edge", "deg",
        "max_degree", "_slot_flat", "_nbr_dense", "_w_dense", "_pair_mark",
        "_edge_lookup",
    )

    def __init__(self, n: int, eu: np.ndarray, ev: np.ndarray):
        self.n = int(n)
        self.eu = eu
        self.ev = ev
        self.edge_key = eu.astype(np.int64) * n + ev

        ends = np.concatenate([eu, ev])
        other = np.concatenate([ev, eu])
        eids = np.tile(np.arange(eu.size, dtype=np.int64), 2)
        order = np.lexsort((other, ends))
        self.deg = np.bincount(ends, minlength=n).astype(np.int64)
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(self.deg, out=self.indptr[1:])
        self.nbr = other[order].astype(np.int64)
        self.nbr_edge = eids[order]
        self.max_degree = int(self.deg.max()) if n else 0

        # dense scratch for batched per-node scans (neighbor ids padded with
        # -1; the weight scratch is zero-filled before each use)
        rows = ends[order].astype(np.int64)
        cols = np.arange(rows.size, dtype=np.int64) - self.indptr[rows]
        self._slot_flat = rows * self.max_degree + cols
        self._nbr_dense = np.full(n * self.max_degree, -1, dtype=np.int64)
        self._nbr_dense[self._slot_flat] = self.nbr
        self._nbr_dense = self._nbr_dense.reshape(n, self.max_degree)
        self._w_dense = np.zeros(n * self.max_degree)
        # lazily allocated n*n scratches: dyad dedup marks and edge-id lookup
        self._pair_mark = None
        self._edge_lookup = None

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build from an iterable of (u, v) pairs; rejects self-loops and duplicates."""
        arr = np.asarray(list(edges), dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        u, v = arr[:, 0], arr[:, 1]
        if np.any(u == v):
            raise ValueError("self-loop in edge list")
        if np.any((u < 0) | (u >= n) | (v < 0) | (v >= n)):
            raise ValueError("edge endpoint out of range")
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        order = np.lexsort((hi, lo))
        lo, hi = lo[order], hi[order]
        key = lo * n + hi
        if key.size and np.any(key[1:] == key[:-1]):
            raise ValueError("duplicate edge in edge list")
        return cls(n, lo, hi)

    @property
    def node_count(self) -> int:
        return self.n

    @property
    def edge_count(self) -> int:
        return int(self.eu.size)

    def neighbors(self, i: int) -> np.ndarray:
        return self.nbr[self.indptr[i]:self.indptr[i + 1]]

    def incident_edges(self, i: int) -> np.ndarray:
        return self.nbr_edge[self.indptr[i]:self.indptr[i + 1]]

    def edge_id(self, i: int, j: int) -> int:
        """Edge index of {i, j}, or -1 if the pair is not an edge."""
        if i == j:
            return -1
        lo, hi = (i, j) if i < j else (j, i)
        key = lo * self.n + hi
        pos = int(np.searchsorted(self.edge_key, key))
        if pos < self.edge_key.size and self.edge_key[pos] == key:
            return pos
        return -1

    def has_edge(self, i: int, j: int) -> bool:
        return self.edge_id(i, j) >= 0

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        if self.eu.size == 0:
            return self.n == 1
        data = np.ones(2 * self.eu.size, dtype=np.int8)
        rows = np.concatenate([self.eu, self.ev])
        cols = np.concatenate([self.ev, self.eu])
        m = coo_matrix((data, (rows, cols)), shape=(self.n, self.n))
        n_comp, _ = connected_components(m, directed=False)
        return int(n_comp) == 1


def build_lattice(kind: TopologyKind, side_length: int) -> Graph:
    """Periodic lattice on an L x L torus, row-major node order.

    Square: 4 von Neumann neighbors.  Triangular (degree 6): square plus the
    NE/SW diagonal pair.  Honeycomb (degree 3): brick-wall mapping where each
    node keeps both horizontal neighbors and a single vertical neighbor,
    down when (row + column) is even and up otherwise; L must be even so the
    parity pattern closes over the row wrap.
    """
    if kind not in LATTICE_DEGREE:
        raise TopologyError(f"{kind} is not a lattice kind")
    L = side_length
    if L < 4:
        raise TopologyError(f"side_length={L} must be >= 4")
    if kind is TopologyKind.HONEYCOMB and L % 2 != 0:
        raise TopologyError(f"side_length={L} must be even for the honeycomb lattice")

    ids = np.arange(L * L, dtype=np.int64).reshape(L, L)
    right = np.roll(ids, -1, axis=1)
    down = np.roll(ids, -1, axis=0)

    pairs = [(ids, right)]
    if kind is TopologyKind.HONEYCOMB:
        r, c = np.divmod(ids, L)
        mask = (r + c) % 2 == 0
        pairs.append((ids[mask], down[mask]))
    else:
        pairs.append((ids, down))
        if kind is TopologyKind.TRIANGULAR:
            ne = np.roll(np.roll(ids, 1, axis=0), -1, axis=1)  # (r-1, c+1)
            pairs.append((ids, ne))

    edges = np.concatenate(
        [np.stack([a.ravel(), b.ravel()], axis=1) for a, b in pairs]
    )
    return Graph.from_edges(L * L, edges)


def build_watts_strogatz(n: int, k: int, beta: float, rng: np.random.Generator) -> Graph:
    """Watts-Strogatz ring with per-edge rewiring; edge count stays n*k/2.

    Each node starts connected to its k/2 nearest neighbors on each side.
    Every ring edge's far endpoint is rewired with probability ``beta`` to a
    uniform target, redrawing on self-loops and existing edges; after
    MAX_REWIRE_RETRIES failed draws the original edge is kept.
    """
    if k <= 0 or k % 2 != 0:
        raise TopologyError(f"ws_degree={k} must be even and positive")
    if k >= n:
        raise TopologyError(f"ws_degree={k} must be < node count {n}")
    if not 0.0 <= beta <= 1.0:
        raise TopologyError(f"ws_rewire_prob={beta} outside [0, 1]")

    def canon(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    edge_set: set[tuple[int, int]] = set()
    for offset in range(1, k // 2 + 1):
        for i in range(n):
            edge_set.add(canon(i, (i + offset) % n))

    for offset in range(1, k // 2 + 1):
        for i in range(n):
            if rng.random() >= beta:
                continue
            old = canon(i, (i + offset) % n)
            if old not in edge_set:
                continue  # already rewired away by an earlier pass
            for _ in range(MAX_REWIRE_RETRIES):
                t = int(rng.integers(0, n))
                if t == i:
                    continue
                new = canon(i, t)
                if new in edge_set:
                    continue
                edge_set.remove(old)
                edge_set.add(new)
                break

    return Graph.from_edges(n, sorted(edge_set))


def build_graph(topology: Topology, rng: np.random.Generator) -> Graph:
    """Materialize the graph for a Topology; rng is consumed only by the ws kind."""
    topology.validate()
    if topology.kind is TopologyKind.WATTS_STROGATZ:
        return build_watts_strogatz(
            topology.ws_nodes, topology.ws_degree, topology.ws_rewire_prob, rng
        )
    return build_lattice(topology.kind, topology.side_length)


def write_edge_list(graph: Graph, path) -> None:
    """Plain-text export, one ``i j`` pair per line, ascending i then j."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for u, v in zip(graph.eu, graph.ev):
            fh.write(f"{u} {v}\n")
