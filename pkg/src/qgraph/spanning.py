"""Spanning forests: quantum Borůvka MST, connectivity in both models, bipartiteness."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .graphmodel import (ArrayOracle, ContractViolation, MatrixOracle, Oracle, QueryLedger,
                         as_weight, neighbor)
from .minfind import BUDGET_CONSTANT, find_smallest_of_types
from .qprimitives import CostModel, search_expected, search_highconf, setup


class UnionFind:
    """Disjoint sets over ``0..n-1`` with union by size and path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True

    def labels(self) -> np.ndarray:
        return np.array([self.find(i) for i in range(len(self.parent))], dtype=np.int64)

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return sorted(out.values())


@dataclass
class Forest:
    """Accepted tree edges over ``n`` vertices; ``k`` is the number of trees."""

    n: int
    edges: list[tuple[int, int]] = field(default_factory=list)
    weights: list = field(default_factory=list)
    rounds: int = 0
    round_trees: list[int] = field(default_factory=list)

    def __post_init__(self):
        self.uf = UnionFind(self.n)
        for u, v in self.edges:
            self.uf.union(u, v)

    def add(self, u: int, v: int, w=1) -> bool:
        if not self.uf.union(u, v):
            return False
        self.edges.append((min(u, v), max(u, v)))
        self.weights.append(w)
        return True

    @property
    def k(self) -> int:
        return self.uf.count

    @property
    def total_weight(self):
        return sum(self.weights)

    def components(self) -> list[list[int]]:
        return self.uf.groups()


class Disconnected(Exception):
    """The graph has more than one component; ``forest`` spans each of them."""

    def __init__(self, components: list[list[int]], forest: Forest):
        super().__init__(f"graph is disconnected ({len(components)} components)")
        self.components = components
        self.forest = forest


def _require_undirected(oracle: Oracle) -> None:
    if oracle.directed:
        raise ContractViolation("algorithm needs an undirected graph")


def _slots(oracle: Oracle):
    """Directed edge slots ``(src, dst, weight)``.

    The matrix model is treated as an array instance over all n(n-1)
    off-diagonal pairs, non-edges carrying infinite weight.
    """
    if isinstance(oracle, ArrayOracle):
        return oracle.sources, oracle.targets, oracle.weights
    n = oracle.n
    src, dst = np.nonzero(~np.eye(n, dtype=bool))
    return src, dst, oracle.weights[src, dst]


def _edge_order(src, dst, w) -> np.ndarray:
    """Dense rank of each slot under (weight, low endpoint, high endpoint).

    Both directions of an undirected edge share one rank, so all trees agree
    on a single strict order of edges.
    """
    lo, hi = np.minimum(src, dst), np.maximum(src, dst)
    order = np.lexsort((hi, lo, w))
    key = np.stack([w[order], lo[order], hi[order]])
    new = np.ones(len(order), dtype=bool)
    new[1:] = np.any(key[:, 1:] != key[:, :-1], axis=0)
    dense = np.empty(len(order), dtype=float)
    dense[order] = np.cumsum(new) - 1
    return dense


def mst_boruvka(oracle: Oracle, *, model: CostModel | None = None,
                ledger: QueryLedger | None = None, rng=None,
                budget_constant: float | None = None, trace: list | None = None) -> Forest:
    """Minimum spanning forest by Borůvka rounds of typed minima finding.

    Round ``l`` looks for the cheapest leaving edge of each of the ``k``
    trees at once: ``f`` is the edge rank when the endpoints lie in
    different trees (else infinity) and ``g`` the tree of the source.  In
    stochastic mode each round is interrupted after
    ``(l + 2) * c * sqrt(k * N)`` charge, ``N`` being the number of slots.
    ``trace`` receives ``(round, trees_before, trees_after)`` tuples.
    """
    _require_undirected(oracle)
    model, ledger, rng = setup(model, ledger, rng)
    c = (budget_constant or BUDGET_CONSTANT) * model.c1
    src, dst, w = _slots(oracle)
    N = len(src)
    rank = _edge_order(src, dst, w)
    finite = np.isfinite(w)
    forest = Forest(oracle.n)
    level = 0
    while forest.k > 1 and N:
        labels = forest.uf.labels()
        leaving = finite & (labels[src] != labels[dst])
        if not leaving.any():
            break
        level += 1
        k = forest.k
        f = np.where(leaving, rank, np.inf)
        budget = None if model.exact else (level + 2) * c * math.sqrt(k * N)
        with ledger.phase(f"round-{level}"):
            sel = find_smallest_of_types(f, labels[src], N, k, budget=budget,
                                         model=model, ledger=ledger, rng=rng)
        for i in sel.indices():
            if leaving[i]:
                forest.add(int(src[i]), int(dst[i]), as_weight(w[i]))
        forest.round_trees.append(k)
        if trace is not None:
            trace.append((level, k, forest.k))
    forest.rounds = level
    return forest


def connectivity_matrix(oracle: MatrixOracle, *, model: CostModel | None = None,
                        ledger: QueryLedger | None = None, rng=None) -> Forest:
    """Spanning tree by repeatedly searching all n^2 entries for an edge between components.

    Raises :class:`Disconnected` (carrying the spanning forest) when no such
    edge is left while more than one component remains.
    """
    _require_undirected(oracle)
    model, ledger, rng = setup(model, ledger, rng)
    n = oracle.n
    us, vs = np.nonzero(oracle.adjacency)
    labels = np.arange(n)
    members = {i: [i] for i in range(n)}
    forest = Forest(n)
    while forest.k > 1:
        good = labels[us] != labels[vs]
        if not good.any():
            raise Disconnected(forest.components(), forest)
        hit = search_expected(n * n, marked=us[good] * n + vs[good],
                              model=model, ledger=ledger, rng=rng)
        u, v = divmod(hit.index, n)
        forest.add(u, v)
        a, b = labels[u], labels[v]
        if len(members[a]) < len(members[b]):
            a, b = b, a
        labels[members[b]] = a
        members[a].extend(members.pop(b))
    return forest


@dataclass
class ComponentCover:
    """Components built by the classical preprocessing, with their total degrees."""

    components: list[list[int]]
    degree_sums: list[int]
    edges: list[tuple[int, int]]
    probes: int

    @property
    def k(self) -> int:
        return len(self.components)


def components_preprocess(oracle: ArrayOracle, ledger: QueryLedger | None = None) -> ComponentCover:
    """Classical grouping into components with total degree at most size squared.

    Repeatedly takes the unplaced vertex of highest degree (lowest id on
    ties) and walks its neighbour list, absorbing unplaced neighbours, until
    the list ends (new component) or a placed neighbour is met (join its
    component through that edge).  Uses exactly ``n - k`` probes.
    """
    _require_undirected(oracle)
    ledger = ledger if ledger is not None else QueryLedger()
    before = ledger.probes
    n = oracle.n
    deg = oracle.degrees
    comp_of = [-1] * n
    components: list[list[int]] = []
    edges: list[tuple[int, int]] = []
    for v in sorted(range(n), key=lambda x: (-deg[x], x)):
        if comp_of[v] >= 0:
            continue
        group, joined = [v], -1
        for j in range(int(deg[v])):
            w, _ = neighbor(oracle, v, j, ledger)
            edges.append((v, w))
            if comp_of[w] >= 0:
                joined = comp_of[w]
                break
            group.append(w)
        if joined < 0:
            joined = len(components)
            components.append([])
        for x in group:
            comp_of[x] = joined
        components[joined].extend(group)
    degree_sums = [int(deg[c].sum()) for c in components]
    return ComponentCover([sorted(c) for c in components], degree_sums, edges,
                          ledger.probes - before)


def connectivity_array(oracle: ArrayOracle, *, model: CostModel | None = None,
                       ledger: QueryLedger | None = None, rng=None,
                       cover: ComponentCover | None = None) -> Forest:
    """Spanning tree in the array model using O(n) expected queries.

    After the preprocessing, the component with the smallest total degree
    ``m_C`` searches its ``m_C`` edge slots for an edge to another component.
    """
    _require_undirected(oracle)
    model, ledger, rng = setup(model, ledger, rng)
    if cover is None:
        cover = components_preprocess(oracle, ledger)
    n = oracle.n
    forest = Forest(n)
    for u, v in cover.edges:
        forest.add(u, v)
    labels = np.empty(n, dtype=np.int64)
    members: dict[int, np.ndarray] = {}
    slots: dict[int, np.ndarray] = {}
    mass: dict[int, int] = {}
    heap = []
    for cid, comp in enumerate(cover.components):
        comp = np.array(comp, dtype=np.int64)
        labels[comp] = cid
        members[cid] = comp
        slots[cid] = np.concatenate([np.arange(oracle.offsets[x], oracle.offsets[x + 1])
                                     for x in comp]) if len(comp) else np.empty(0, np.int64)
        mass[cid] = cover.degree_sums[cid]
        heap.append((mass[cid], cid))
    heapq.heapify(heap)
    closed = 0
    while forest.k - closed > 1:
        m_c, cid = heapq.heappop(heap)
        if cid not in mass or mass[cid] != m_c:
            continue
        cs = slots[cid]
        out = np.flatnonzero(labels[oracle.targets[cs]] != cid)
        if len(out) == 0:
            # a whole component; keep growing the others so the forest spans them
            del mass[cid]
            closed += 1
            continue
        hit = search_expected(len(cs), marked=out, model=model, ledger=ledger, rng=rng)
        s = cs[hit.index]
        u, v = int(oracle.sources[s]), int(oracle.targets[s])
        forest.add(u, v)
        other = int(labels[v])
        big, small = (cid, other) if len(members[cid]) >= len(members[other]) else (other, cid)
        labels[members[small]] = big
        members[big] = np.concatenate([members[big], members.pop(small)])
        slots[big] = np.concatenate([slots[big], slots.pop(small)])
        mass[big] = mass[big] + mass.pop(small)
        heapq.heappush(heap, (mass[big], big))
    if forest.k > 1:
        raise Disconnected(forest.components(), forest)
    return forest


def spanning_forest(oracle: Oracle, **kw) -> Forest:
    """Spanning forest via the model-appropriate connectivity algorithm."""
    try:
        if isinstance(oracle, MatrixOracle):
            return connectivity_matrix(oracle, **kw)
        return connectivity_array(oracle, **kw)
    except Disconnected as exc:
        return exc.forest


@dataclass(frozen=True)
class BipartiteResult:
    bipartite: bool
    edge: tuple[int, int] | None
    coloring: tuple[int, ...]


def two_color(forest: Forest) -> list[int]:
    adj: list[list[int]] = [[] for _ in range(forest.n)]
    for u, v in forest.edges:
        adj[u].append(v)
        adj[v].append(u)
    color = [-1] * forest.n
    for s in range(forest.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    stack.append(v)
    return color


def bipartite_test(oracle: Oracle, *, eps: float = 0.1, model: CostModel | None = None,
                   ledger: QueryLedger | None = None, rng=None) -> BipartiteResult:
    """Two-colour a spanning forest, then search for an edge with equally coloured ends."""
    _require_undirected(oracle)
    model, ledger, rng = setup(model, ledger, rng)
    forest = spanning_forest(oracle, model=model, ledger=ledger, rng=rng)
    color = np.array(two_color(forest))
    if isinstance(oracle, MatrixOracle):
        n = oracle.n
        us, vs = np.nonzero(oracle.adjacency)
        bad = color[us] == color[vs]
        hit = search_highconf(n * n, eps=eps, marked=us[bad] * n + vs[bad],
                              model=model, ledger=ledger, rng=rng)
        edge = divmod(hit.index, n) if hit.found else None
    else:
        bad = np.flatnonzero(color[oracle.sources] == color[oracle.targets])
        hit = search_highconf(max(oracle.m, 1), eps=eps, marked=bad,
                              model=model, ledger=ledger, rng=rng)
        edge = (int(oracle.sources[hit.index]), int(oracle.targets[hit.index])) if hit.found else None
    if edge is not None:
        edge = (int(edge[0]), int(edge[1]))
    return BipartiteResult(edge is None, edge, tuple(int(c) for c in color))
