"""Jitted single-call implementation of one MC step.

The numpy phase functions in :mod:`coevonet.core` are the reference
implementation; this module collapses a whole step into one compiled kernel
for the run driver's hot loop.  The kernel consumes the exact same random
draw layout (E direct + 2E recommendation + N selection + N adoption
uniforms) and reproduces every floating-point operation of the reference in
the same order, so trajectories are bit-identical between the two paths.
That equivalence is asserted by the test suite; anything that cannot take
the fast path (oversized graph, numba missing) falls back transparently.
"""

from __future__ import annotations

import math

import numpy as np

from .core import MultiplexState, SimParams, _dense_scratch, step
from .topology import Graph

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional accelerator
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True)
def _step_kernel(
    n,
    eu,
    ev,
    indptr,
    nbr,
    nbr_edge,
    edge_lookup,
    mark,
    weights,
    strategies,
    payoffs,
    u_direct,
    u_rec0,
    u_rec1,
    sel_draws,
    adopt_draws,
    b,
    m,
    p,
    gamma,
    delta,
    kappa,
):
    n_edges = eu.shape[0]

    # strongest-tie neighbor per node; strict > keeps the lowest id on ties
    best = np.empty(n, np.int64)
    for i in range(n):
        bi = -1
        bw = -1.0
        for k in range(indptr[i], indptr[i + 1]):
            w = weights[nbr_edge[k]]
            if w > bw:
                bw = w
                bi = nbr[k]
        best[i] = bi

    du = np.empty(3 * n_edges, np.int64)
    dv = np.empty(3 * n_edges, np.int64)
    de = np.empty(3 * n_edges, np.int64)

    # direct phase
    cnt = 0
    for e in range(n_edges):
        q = p if weights[e] > gamma else 1.0 - p
        if u_direct[e] < q:
            du[cnt] = eu[e]
            dv[cnt] = ev[e]
            de[cnt] = e
            cnt += 1
    n_direct = cnt

    # recommendation candidates, in the same order as the reference:
    # all eu-side proposals by edge id, then all ev-side ones
    ca = np.empty(2 * n_edges, np.int64)
    cb = np.empty(2 * n_edges, np.int64)
    r = 0
    for e in range(n_edges):
        if weights[e] > gamma and u_rec0[e] < p:
            z = best[eu[e]]
            y = ev[e]
            if z != y:
                if z < y:
                    ca[r] = z
                    cb[r] = y
                else:
                    ca[r] = y
                    cb[r] = z
                r += 1
    for e in range(n_edges):
        if weights[e] > gamma and u_rec1[e] < p:
            z = best[ev[e]]
            y = eu[e]
            if z != y:
                if z < y:
                    ca[r] = z
                    cb[r] = y
                else:
                    ca[r] = y
                    cb[r] = z
                r += 1

    # dedup: last duplicate candidate survives, any direct draw outranks it
    for t in range(r):
        mark[ca[t] * n + cb[t]] = t + 1
    for d in range(n_direct):
        mark[du[d] * n + dv[d]] = -1
    for t in range(r):
        key = ca[t] * n + cb[t]
        if mark[key] == t + 1:
            du[cnt] = ca[t]
            dv[cnt] = cb[t]
            de[cnt] = edge_lookup[key] - 1
            cnt += 1
    for t in range(r):
        mark[ca[t] * n + cb[t]] = 0
    for d in range(n_direct):
        mark[du[d] * n + dv[d]] = 0

    # payoffs: all u-side contributions first, then all v-side, matching the
    # reference accumulation order exactly
    for i in range(n):
        payoffs[i] = 0.0
    for d in range(cnt):
        su = strategies[du[d]]
        sv = strategies[dv[d]]
        if su == 1:
            if sv == 1:
                payoffs[du[d]] += 1.0
        elif sv == 1:
            payoffs[du[d]] += b
    for d in range(cnt):
        su = strategies[du[d]]
        sv = strategies[dv[d]]
        if sv == 1:
            if su == 1:
                payoffs[dv[d]] += 1.0
        elif su == 1:
            payoffs[dv[d]] += b

    # weight adaptation on played relationship edges
    for d in range(cnt):
        e = de[d]
        if e >= 0:
            shift = delta * (strategies[du[d]] + strategies[dv[d]] - 1)
            w = weights[e] + shift
            if w < 0.0:
                w = 0.0
            elif w > 1.0:
                w = 1.0
            weights[e] = w

    # relationship indices as (u-side sum) + (v-side sum), like the reference
    a_u = np.zeros(n)
    a_v = np.zeros(n)
    for e in range(n_edges):
        a_u[eu[e]] += weights[e]
    for e in range(n_edges):
        a_v[ev[e]] += weights[e]
    fit = np.empty(n)
    for i in range(n):
        fit[i] = m * payoffs[i] + (a_u[i] + a_v[i])

    # synchronous imitation
    new_s = np.empty(n, strategies.dtype)
    for i in range(n):
        new_s[i] = strategies[i]
        total = 0.0
        for k in range(indptr[i], indptr[i + 1]):
            total += weights[nbr_edge[k]]
        if total <= 0.0:
            continue
        target = sel_draws[i] * total
        acc = 0.0
        col = 0
        for k in range(indptr[i], indptr[i + 1]):
            acc += weights[nbr_edge[k]]
            if acc <= target:
                col += 1
        deg = indptr[i + 1] - indptr[i]
        if col > deg - 1:
            col = deg - 1
        j = nbr[indptr[i] + col]
        prob = 1.0 / (1.0 + math.exp((fit[i] - fit[j]) / kappa))
        if adopt_draws[i] < prob:
            new_s[i] = strategies[j]
    for i in range(n):
        strategies[i] = new_s[i]


def step_fast(
    state: MultiplexState, graph: Graph, params: SimParams, rng: np.random.Generator
) -> None:
    """One MC step via the compiled kernel; falls back to the reference
    pipeline when the kernel cannot be used.  Mutates ``state`` in place and
    does not materialize the interaction set."""
    scratch = _dense_scratch(graph) if HAVE_NUMBA else None
    if scratch is None:
        step(state, graph, params, rng)
        return
    mark, edge_lookup = scratch
    n_edges = graph.edge_count
    u_direct = rng.random(n_edges)
    u_rec = rng.random((2, n_edges))
    sel_draws = rng.random(graph.n)
    adopt_draws = rng.random(graph.n)
    _step_kernel(
        graph.n,
        graph.eu,
        graph.ev,
        graph.indptr,
        graph.nbr,
        graph.nbr_edge,
        edge_lookup,
        mark,
        state.weights,
        state.strategies,
        state.payoffs,
        u_direct,
        u_rec[0],
        u_rec[1],
        sel_draws,
        adopt_draws,
        float(params.b),
        float(params.m),
        float(params.p),
        float(params.gamma),
        float(params.delta),
        float(params.kappa),
    )
