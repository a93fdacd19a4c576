"""Seeded random instance families used by the sweeps and the test corpus."""

from __future__ import annotations

import numpy as np

from .adversarial import gen_cycle_split, gen_parity, gen_regular_hard, gen_star_reduction
from .graphmodel import ArrayOracle, MatrixOracle


def _weights(rng, count: int, weighted: bool, max_weight: int):
    if not weighted:
        return [None] * count
    return [int(w) for w in rng.integers(1, max_weight + 1, count)]


def random_connected(n: int, m_per_n: float = 2.0, *, seed=None, weighted: bool = False,
                     max_weight: int | None = None) -> set | list:
    """Undirected connected graph: a random recursive tree plus uniform extra edges.

    Returns ``(u, v)`` or ``(u, v, w)`` tuples with about ``m_per_n * n`` edges.
    """
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    edges: dict[tuple[int, int], None] = {}
    for i in range(1, n):
        a, b = int(perm[i]), int(perm[rng.integers(i)])
        edges[(min(a, b), max(a, b))] = None
    target = min(int(round(m_per_n * n)), n * (n - 1) // 2)
    while len(edges) < target:
        a, b = rng.integers(n, size=2)
        if a != b:
            edges[(int(min(a, b)), int(max(a, b)))] = None
    ws = _weights(rng, len(edges), weighted, max_weight or 10 * n)
    return [(u, v) if w is None else (u, v, w) for (u, v), w in zip(edges, ws)]


def random_undirected(n: int, p: float, *, seed=None, weighted: bool = False,
                      max_weight: int = 20) -> list:
    """Erdős–Rényi G(n, p), possibly disconnected."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    ws = _weights(rng, int(keep.sum()), weighted, max_weight)
    return [(int(u), int(v)) if w is None else (int(u), int(v), w)
            for u, v, w in zip(iu[keep], ju[keep], ws)]


def random_digraph(n: int, m_per_n: float = 4.0, *, seed=None, weighted: bool = False,
                   strongly_connected: bool = False, max_weight: int | None = None) -> list:
    """Directed graph with about ``m_per_n * n`` arcs; optionally seeded with a Hamiltonian cycle."""
    rng = np.random.default_rng(seed)
    arcs: dict[tuple[int, int], None] = {}
    if strongly_connected and n > 1:
        perm = rng.permutation(n)
        for i in range(n):
            arcs[(int(perm[i]), int(perm[(i + 1) % n]))] = None
    target = min(int(round(m_per_n * n)), n * (n - 1))
    while len(arcs) < target:
        a, b = rng.integers(n, size=2)
        if a != b:
            arcs[(int(a), int(b))] = None
    ws = _weights(rng, len(arcs), weighted, max_weight or 10 * n)
    return [(u, v) if w is None else (u, v, w) for (u, v), w in zip(arcs, ws)]


def make(family: str, *, model: str = "array", seed=None, **params):
    """Build ``(oracle, label)`` for a named family.

    Graph families: ``connected`` (undirected), ``gnp`` (undirected),
    ``digraph``, ``sc-digraph``, ``path``, ``cycle-split``, ``parity``,
    ``regular-hard``, ``star-reduction``.
    """
    label: dict = {"family": family, "seed": seed}
    n = params.get("n")
    weighted = bool(params.get("weighted", False))
    if family == "connected":
        edges = random_connected(n, params.get("m_per_n", 2.0), seed=seed, weighted=weighted)
        directed = False
    elif family == "gnp":
        edges = random_undirected(n, params.get("p", 0.1), seed=seed, weighted=weighted)
        directed = False
    elif family in ("digraph", "sc-digraph"):
        edges = random_digraph(n, params.get("m_per_n", 4.0), seed=seed, weighted=weighted,
                               strongly_connected=family == "sc-digraph")
        directed = True
    elif family == "path":
        edges = [(i, i + 1, 1) if weighted else (i, i + 1) for i in range(n - 1)]
        directed = bool(params.get("directed", False))
    elif family == "cycle-split":
        split = params.get("split")
        lab = gen_cycle_split(n, tuple(split) if split else None, seed=seed)
        return _convert(lab.oracle, model), lab.label
    elif family == "parity":
        rng = np.random.default_rng(seed)
        x = params.get("x")
        if x is None:
            p = params.get("p", max(n // 2, 2) if n else 8)
            x = rng.integers(0, 2, p).tolist()
        lab = gen_parity(x, seed=seed, undirected=bool(params.get("undirected", False)))
        return _convert(lab.oracle, model), lab.label
    elif family == "regular-hard":
        rng = np.random.default_rng(seed)
        p, k = params["p"], params.get("k", 3)
        bits = params.get("bits") or rng.integers(0, 2, p).tolist()
        lab = gen_regular_hard(p, k, bits, params.get("slots"), seed=seed)
        return _convert(lab.oracle, model), lab.label
    elif family == "star-reduction":
        rng = np.random.default_rng(seed)
        M = params.get("M")
        if M is None:
            M = rng.integers(1, params.get("max_weight", 50) + 1,
                             (params.get("rows", 8), params.get("cols", 4)))
        lab = gen_star_reduction(M, seed=seed)
        return _convert(lab.oracle, model), lab.label
    else:
        raise ValueError(f"unknown family {family!r}")
    cls = MatrixOracle if model == "matrix" else ArrayOracle
    oracle = cls.from_edges(n, edges, directed=directed, weighted=weighted)
    label.update(n=n)
    return oracle, label


def _convert(oracle, model: str):
    if model == "matrix" and isinstance(oracle, ArrayOracle):
        return oracle.to_matrix()
    if model == "array" and isinstance(oracle, MatrixOracle):
        return oracle.to_array()
    return oracle
