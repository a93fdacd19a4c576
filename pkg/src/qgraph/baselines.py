"""Exact classical algorithms that read the graph only through counted probes."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Any

from .graphmodel import (INF, ArrayOracle, MatrixOracle, Oracle, QueryLedger, entry, neighbor)
from .spanning import UnionFind


@dataclass
class BaselineResult:
    answer: Any
    probes: int


def _out_edges(oracle: Oracle, u: int, ledger: QueryLedger):
    """Yield ``(v, w)`` for every out-edge of ``u``, probing the oracle."""
    if isinstance(oracle, MatrixOracle):
        for v in range(oracle.n):
            x = entry(oracle, u, v, ledger)
            if oracle.weighted:
                if x != INF:
                    yield v, x
            elif x:
                yield v, 1
    else:
        for j in range(int(oracle.degrees[u])):
            yield neighbor(oracle, u, j, ledger)


def _undirected_edges(oracle: Oracle, ledger: QueryLedger):
    """Each undirected edge once as ``(u, v, w)`` with ``u < v``."""
    if isinstance(oracle, MatrixOracle):
        for u in range(oracle.n):
            for v in range(u + 1, oracle.n):
                x = entry(oracle, u, v, ledger)
                if oracle.weighted and x != INF:
                    yield u, v, x
                elif not oracle.weighted and x:
                    yield u, v, 1
    else:
        for u in range(oracle.n):
            for v, w in _out_edges(oracle, u, ledger):
                if u < v:
                    yield u, v, w


def kruskal(oracle: Oracle) -> BaselineResult:
    """Minimum spanning forest under the (weight, min endpoint, max endpoint) order."""
    ledger = QueryLedger()
    edges = sorted(_undirected_edges(oracle, ledger), key=lambda e: (e[2], e[0], e[1]))
    uf = UnionFind(oracle.n)
    tree = [e for e in edges if uf.union(e[0], e[1])]
    return BaselineResult(tree, ledger.probes)


def bfs_components(oracle: Oracle) -> BaselineResult:
    """Connected components, each sorted, listed by smallest vertex."""
    ledger = QueryLedger()
    seen = [False] * oracle.n
    comps = []
    for s in range(oracle.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, frontier = [s], [s]
        while frontier:
            u = frontier.pop()
            for v, _ in _out_edges(oracle, u, ledger):
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    frontier.append(v)
        comps.append(sorted(comp))
    return BaselineResult(comps, ledger.probes)


def scc(oracle: Oracle) -> BaselineResult:
    """Strongly connected components by iterative Tarjan."""
    ledger = QueryLedger()
    n = oracle.n
    adj = [[v for v, _ in _out_edges(oracle, u, ledger)] for u in range(n)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        while work:
            u, i = work.pop()
            if i == 0:
                index[u] = low[u] = counter
                counter += 1
                stack.append(u)
                on_stack[u] = True
            recurse = False
            while i < len(adj[u]):
                v = adj[u][i]
                i += 1
                if index[v] < 0:
                    work.append((u, i))
                    work.append((v, 0))
                    recurse = True
                    break
                if on_stack[v]:
                    low[u] = min(low[u], index[v])
            if recurse:
                continue
            if low[u] == index[u]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == u:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[u])
    comps.sort()
    return BaselineResult(comps, ledger.probes)


def dijkstra(oracle: Oracle, v0: int = 0) -> BaselineResult:
    """Distances from ``v0``; unreachable vertices get ``INF``."""
    ledger = QueryLedger()
    dist: list[float] = [INF] * oracle.n
    dist[v0] = 0
    done = [False] * oracle.n
    heap = [(0, v0)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in _out_edges(oracle, u, ledger):
            if d + w < dist[v]:
                dist[v] = d + w
                heapq.heappush(heap, (d + w, v))
    return BaselineResult(dist, ledger.probes)


def parity_scan(oracle: ArrayOracle, start: int = 0) -> BaselineResult:
    """Count the cycles of an out-degree-1 graph on 2p vertices (one or two).

    Walks from ``start`` until it returns; a walk covering every vertex means
    one cycle, otherwise the remaining vertices form the second one.
    """
    ledger = QueryLedger()
    length, u = 0, start
    while True:
        u, _ = neighbor(oracle, u, 0, ledger)
        length += 1
        if u == start:
            break
    return BaselineResult(1 if length == oracle.n else 2, ledger.probes)


def two_colorable(oracle: Oracle) -> BaselineResult:
    """Whether the undirected graph is bipartite, by BFS two-colouring."""
    ledger = QueryLedger()
    color = [-1] * oracle.n
    for s in range(oracle.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        frontier = [s]
        while frontier:
            u = frontier.pop()
            for v, _ in _out_edges(oracle, u, ledger):
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    frontier.append(v)
                elif color[v] == color[u]:
                    return BaselineResult(False, ledger.probes)
    return BaselineResult(True, ledger.probes)
