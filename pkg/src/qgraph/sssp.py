"""Single-source shortest paths with a power-of-two partition of the Dijkstra tree."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graphmodel import INF, ArrayOracle, ContractViolation, MatrixOracle, Oracle, QueryLedger, as_weight
from .minfind import BUDGET_CONSTANT, find_smallest_of_types
from .qprimitives import CostModel, setup


@dataclass
class ShortestPathTree:
    source: int
    dist: list
    parent: list[int]
    edges: list[tuple[int, int]] = field(default_factory=list)


@dataclass(frozen=True)
class BorderEdge:
    cost: float
    target: int
    source: int
    slot: int


class _Slots:
    """CSR view of out-edges; the matrix model uses every off-diagonal pair."""

    def __init__(self, oracle: Oracle):
        if isinstance(oracle, ArrayOracle):
            self.offsets, self.targets, self.weights = oracle.offsets, oracle.targets, oracle.weights
            self.sources = oracle.sources
        else:
            n = oracle.n
            src, dst = np.nonzero(~np.eye(n, dtype=bool))
            self.sources, self.targets = src, dst
            self.weights = oracle.weights[src, dst]
            self.offsets = np.arange(n + 1) * (n - 1)

    def of(self, vertices) -> np.ndarray:
        parts = [np.arange(self.offsets[v], self.offsets[v + 1]) for v in vertices]
        return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def border_edges_for_set(P, dist, in_tree, slots: _Slots, *, budget: float | None = None,
                         model: CostModel | None = None, ledger: QueryLedger | None = None,
                         rng=None) -> list[BorderEdge]:
    """Up to ``|P|`` cheapest border edges leaving ``P``, with pairwise distinct targets.

    An edge ``(u, v)`` costs ``dist[u] + w(u, v)``; edges into the tree count
    as infinite.  Ties are broken by (cost, target, slot).
    """
    model, ledger, rng = setup(model, ledger, rng)
    s = slots.of(P)
    if len(s) == 0:
        return []
    tgt = slots.targets[s]
    cost = np.asarray(dist, dtype=float)[slots.sources[s]] + slots.weights[s]
    order = np.lexsort((s, tgt, cost))
    key = np.empty(len(s), dtype=float)
    key[order] = np.arange(len(s))
    f = np.where(in_tree[tgt] | ~np.isfinite(cost), np.inf, key)
    sel = find_smallest_of_types(f, tgt, len(s), len(P), budget=budget,
                                 model=model, ledger=ledger, rng=rng)
    return [BorderEdge(float(cost[i]), int(tgt[i]), int(slots.sources[s[i]]), int(s[i]))
            for i in sel.indices() if np.isfinite(f[i])]


def check_stack(sizes: list[int]) -> None:
    """Sizes must be powers of two in strictly decreasing order."""
    for a in sizes:
        assert a > 0 and a & (a - 1) == 0, f"set size {a} is not a power of two"
    for a, b in zip(sizes, sizes[1:]):
        assert a > b, f"sizes not strictly decreasing: {sizes}"


def sssp(oracle: Oracle, v0: int = 0, *, model: CostModel | None = None,
         ledger: QueryLedger | None = None, rng=None, trace: list | None = None) -> ShortestPathTree:
    """Dijkstra where the cheapest border edge comes from cached per-set minima.

    The tree's vertices are split into sets ``P_1 .. P_l`` of strictly
    decreasing power-of-two sizes; each set keeps its ``|P_i|`` cheapest
    border edges with distinct targets.  The newest set's cache is
    recomputed every step, then the cheapest cached edge leaving the tree is
    accepted and equal-size trailing sets are merged.  ``trace`` receives one
    dict per accepted edge.
    """
    if isinstance(oracle, MatrixOracle) and not oracle.weighted:
        raise ContractViolation("shortest paths need a weighted graph")
    model, ledger, rng = setup(model, ledger, rng)
    n = oracle.n
    slots = _Slots(oracle)
    dist = np.full(n, np.inf)
    dist[v0] = 0
    parent = [-1] * n
    in_tree = np.zeros(n, dtype=bool)
    in_tree[v0] = True
    tree = ShortestPathTree(v0, [], parent)
    P: list[list[int]] = [[v0]]
    A: list[list[BorderEdge]] = [[]]
    budget_mult = None
    if not model.exact:
        # per-call failure at most 1/(2 n log n)
        budget_mult = math.log2(2 * n * max(math.log2(n), 1))
    step = 0
    while in_tree.sum() < n:
        step += 1
        budget = None
        if budget_mult is not None:
            N = int(sum(slots.offsets[v + 1] - slots.offsets[v] for v in P[-1]))
            budget = budget_mult * BUDGET_CONSTANT * model.c1 * math.sqrt(len(P[-1]) * max(N, 1))
        with ledger.phase(f"size-{len(P[-1])}"):
            A[-1] = border_edges_for_set(P[-1], dist, in_tree, slots, budget=budget,
                                         model=model, ledger=ledger, rng=rng)
        live = [e for cache in A for e in cache if not in_tree[e.target]]
        if not live:
            break
        best = min(live, key=lambda e: (e.cost, e.target, e.slot))
        if trace is not None:
            trace.append({"tree": np.flatnonzero(in_tree).tolist(), "edge": best})
        v = best.target
        dist[v] = best.cost
        parent[v] = best.source
        in_tree[v] = True
        tree.edges.append((best.source, v))
        P.append([v])
        A.append([])
        while len(P) >= 2 and len(P[-2]) == len(P[-1]):
            P[-2].extend(P.pop())
            A.pop()
        sizes = [len(p) for p in P]
        check_stack(sizes)
        if trace is not None:
            trace[-1]["sizes"] = sizes
    tree.dist = [as_weight(x) if np.isfinite(x) else INF for x in dist]
    return tree
