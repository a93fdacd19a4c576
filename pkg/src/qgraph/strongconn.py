"""Strong connectivity: reach trees by stack search, by doubling sets, and certificates."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .graphmodel import ArrayOracle, ContractViolation, MatrixOracle, Oracle, QueryLedger
from .minfind import BUDGET_CONSTANT, find_smallest_of_types
from .qprimitives import CostModel, find_minimum, search_highconf, setup


@dataclass
class ReachTree:
    """Directed tree rooted at ``root``; ``order`` lists vertices by discovery."""

    root: int
    n: int
    edges: list[tuple[int, int]] = field(default_factory=list)
    order: list[int] = field(default_factory=list)
    searches: int = 0
    iterations: int = 0
    partition: "DoublingPartition | None" = None

    @property
    def covered(self) -> set[int]:
        return set(self.order)

    def out_degrees(self) -> list[int]:
        b = [0] * self.n
        for u, _ in self.edges:
            b[u] += 1
        return b

    @property
    def spanning(self) -> bool:
        return len(self.order) == self.n


class NotStronglyConnected(Exception):
    """``witness`` is a vertex the certificate could not connect to the root."""

    def __init__(self, witness: int, edges: list[tuple[int, int]] | None = None):
        super().__init__(f"not strongly connected (witness vertex {witness})")
        self.witness = witness
        self.edges = edges or []


def _require_directed(oracle: Oracle) -> None:
    if not oracle.directed:
        raise ContractViolation("algorithm needs a directed graph")


def _row(oracle: Oracle, u: int) -> np.ndarray:
    """Out-neighbour per search slot of ``u`` (-1 where the matrix has no edge)."""
    if isinstance(oracle, MatrixOracle):
        return np.where(oracle.adjacency[u], np.arange(oracle.n), -1)
    return oracle.targets[oracle.offsets[u]:oracle.offsets[u + 1]]


def reach_tree_stack(oracle: Oracle, v0: int = 0, *, model: CostModel | None = None,
                     ledger: QueryLedger | None = None, rng=None,
                     eps: float | None = None) -> ReachTree:
    """Depth-first reach tree from ``v0`` driven by high-confidence searches.

    The top of the stack searches its out-slots for a vertex not yet reached,
    with failure probability ``1/(20 n)``, paying ``sqrt(d/t)`` scaled when
    ``t`` fresh neighbours exist; found vertices are pushed, and the top is
    popped when nothing is found.
    """
    model, ledger, rng = setup(model, ledger, rng)
    n = oracle.n
    eps = eps or 1 / (20 * n)
    reached = np.zeros(n, dtype=bool)
    reached[v0] = True
    tree = ReachTree(v0, n, order=[v0])
    stack = [v0]
    rows: dict[int, np.ndarray] = {}
    while stack:
        u = stack[-1]
        row = rows.get(u)
        if row is None:
            row = rows[u] = _row(oracle, u)
        if len(row) == 0:
            stack.pop()
            continue
        fresh = np.flatnonzero((row >= 0) & ~reached[np.maximum(row, 0)])
        hit = search_highconf(len(row), eps=eps, marked=fresh, model=model, ledger=ledger, rng=rng,
                              t_aware=True)
        tree.searches += 1
        if hit.found:
            v = int(row[hit.index])
            tree.edges.append((u, v))
            tree.order.append(v)
            reached[v] = True
            stack.append(v)
        else:
            stack.pop()
    return tree


def _reaches_all(n: int, edges, root: int, reverse: bool = False) -> int | None:
    """First vertex (by id) not reachable from ``root`` over ``edges``, or None."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        if reverse:
            u, v = v, u
        adj[u].append(v)
    seen = [False] * n
    seen[root] = True
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                queue.append(v)
    for i, s in enumerate(seen):
        if not s:
            return i
    return None


def strongly_connected_edges(n: int, edges, root: int = 0) -> int | None:
    """Classical check of an explicit edge set; returns a witness vertex or None."""
    miss = _reaches_all(n, edges, root)
    if miss is None:
        miss = _reaches_all(n, edges, root, reverse=True)
    return miss


def strongconn_matrix(oracle: MatrixOracle, v0: int = 0, *, model: CostModel | None = None,
                      ledger: QueryLedger | None = None, rng=None,
                      method: str = "stack") -> list[tuple[int, int]]:
    """Certificate of at most ``2(n-1)`` edges: reach trees on the matrix and its transpose.

    ``method`` selects the tree builder, ``"stack"`` or ``"doubling"``.
    Raises :class:`NotStronglyConnected` with the first uncovered vertex.
    """
    _require_directed(oracle)
    model, ledger, rng = setup(model, ledger, rng)
    build = {"stack": reach_tree_stack, "doubling": reach_tree_doubling}[method]
    with ledger.phase("forward"):
        fwd = build(oracle, v0, model=model, ledger=ledger, rng=rng)
    if not fwd.spanning:
        raise NotStronglyConnected(min(set(range(oracle.n)) - fwd.covered), fwd.edges)
    with ledger.phase("backward"):
        back = build(oracle.transpose(), v0, model=model, ledger=ledger, rng=rng)
    cert = fwd.edges + [(v, u) for u, v in back.edges]
    if not back.spanning:
        raise NotStronglyConnected(min(set(range(oracle.n)) - back.covered), cert)
    return cert


def strongconn_array(oracle: ArrayOracle, v0: int = 0, *, model: CostModel | None = None,
                     ledger: QueryLedger | None = None, rng=None,
                     per_vertex: bool = False,
                     stage_budget: float = 3.0) -> list[tuple[int, int]]:
    """Edge set ``A ∪ B`` certifying strong connectivity in the array model.

    ``A`` is a depth-first reach tree from ``v0``; ``B`` holds, for every
    vertex, the out-edge to the earliest-discovered neighbour, found by one
    typed minima search over all edge slots (``per_vertex`` runs a separate
    minimum finding per vertex instead).  The graph is strongly connected iff
    ``(V, A ∪ B)`` is, which is decided classically at no charge.  In
    stochastic mode the minima stage is cut off after ``stage_budget`` times
    the base charge budget.
    """
    _require_directed(oracle)
    model, ledger, rng = setup(model, ledger, rng)
    n = oracle.n
    with ledger.phase("tree"):
        tree = reach_tree_stack(oracle, v0, model=model, ledger=ledger, rng=rng)
    if not tree.spanning:
        raise NotStronglyConnected(min(set(range(n)) - tree.covered), tree.edges)
    disc = np.empty(n, dtype=float)
    disc[tree.order] = np.arange(n)
    back: list[tuple[int, int]] = []
    with ledger.phase("backward"):
        if per_vertex:
            for u in range(n):
                lo, hi = oracle.offsets[u], oracle.offsets[u + 1]
                if hi > lo:
                    j = find_minimum(disc[oracle.targets[lo:hi]], int(hi - lo),
                                     model=model, ledger=ledger, rng=rng)
                    back.append((u, int(oracle.targets[lo + j])))
        elif oracle.m:
            m = oracle.m
            f = disc[oracle.targets]
            budget = None
            if not model.exact:
                budget = stage_budget * BUDGET_CONSTANT * model.c1 * math.sqrt(n * m)
            sel = find_smallest_of_types(f, oracle.sources, m, n, budget=budget,
                                         model=model, ledger=ledger, rng=rng)
            back = [(int(oracle.sources[i]), int(oracle.targets[i])) for i in sel.indices()]
    edges = tree.edges + back
    witness = strongly_connected_edges(n, edges, v0)
    if witness is not None:
        raise NotStronglyConnected(witness, edges)
    return edges


@dataclass
class DoublingPartition:
    """Sets ``T_0 .. T_q`` of covered vertices, ordered by discovery inside each set."""

    n: int
    sets: list[list[int]]

    @property
    def q(self) -> int:
        return len(self.sets) - 1

    def check(self) -> None:
        """Assert the loop-boundary invariants."""
        nonempty = [j for j, s in enumerate(self.sets) if s]
        assert nonempty, "partition lost every vertex"
        k, last = nonempty[0], nonempty[-1]
        assert 2 * len(self.sets[last]) >= 2 ** last, f"|T_{last}| < 2^{last - 1}"
        running = 0
        for j in range(last):
            running += len(self.sets[j])
            if j >= k:
                assert running >= 2 ** j, f"t_{j} = {running} < 2^{j}"
        seen = [v for s in self.sets for v in s]
        assert len(seen) == len(set(seen)), "sets overlap"


def reach_tree_doubling(oracle: MatrixOracle, v0: int = 0, *, model: CostModel | None = None,
                        ledger: QueryLedger | None = None, rng=None,
                        trace: list | None = None) -> ReachTree:
    """Reach tree from ``v0`` using confidence-stratified vertex sets.

    Always works on the smallest ``i`` with ``|T_i| >= 2^i``, taking ``R``
    as all of ``T_i`` or its ``2^i`` earliest members, and searches the
    ``|R| * n`` pairs for an edge leaving the tree with failure probability
    ``2^-sqrt(2^(i+2))``.  On success ``R`` and the new vertex go to ``T_0``,
    otherwise ``R`` moves up to ``T_{i+1}``.  Every loop-boundary partition
    is checked and, when given, copied into ``trace``.
    """
    _require_directed(oracle)
    model, ledger, rng = setup(model, ledger, rng)
    n = oracle.n
    adj = oracle.adjacency
    q = int(math.floor(math.log2(n))) + 1
    part = DoublingPartition(n, [[v0]] + [[] for _ in range(q)])
    reached = np.zeros(n, dtype=bool)
    reached[v0] = True
    tree = ReachTree(v0, n, order=[v0])
    disc = {v0: 0}
    while True:
        part.check()
        if trace is not None:
            trace.append([list(s) for s in part.sets])
        i = next((j for j, s in enumerate(part.sets) if len(s) >= 2 ** j), None)
        if i is None:
            break
        block = part.sets[i]
        take = len(block) if len(block) < 2 ** (i + 1) else 2 ** i
        R, part.sets[i] = block[:take], block[take:]
        rows = np.array(R)
        hits = adj[rows] & ~reached[None, :]
        marked = np.flatnonzero(hits.ravel())
        eps = 2.0 ** -math.sqrt(2 ** (i + 2))
        hit = search_highconf(len(R) * n, eps=eps, marked=marked,
                              model=model, ledger=ledger, rng=rng)
        tree.searches += 1
        tree.iterations += 1
        if hit.found:
            r, v = divmod(hit.index, n)
            u = R[r]
            tree.edges.append((u, v))
            tree.order.append(v)
            reached[v] = True
            disc[v] = len(disc)
            part.sets[0] = sorted(part.sets[0] + R + [v], key=disc.__getitem__)
        else:
            part.sets[i + 1] = sorted(part.sets[i + 1] + R, key=disc.__getitem__)
    tree.partition = part
    return tree
