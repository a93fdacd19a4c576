"""Lower-bound instance families, emitted together with their ground-truth labels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .graphmodel import ArrayOracle, ContractViolation, MatrixOracle


@dataclass
class Labeled:
    """A generated instance and its ground truth."""

    oracle: Any
    label: dict


def _perm(n: int, seed: int | None) -> np.ndarray:
    if seed is None:
        return np.arange(n)
    return np.random.default_rng(seed).permutation(n)


def _relabel(adjacency: list[list], perm: np.ndarray) -> list[list]:
    """Move vertex ``i`` to ``perm[i]``, keeping each vertex's slot order."""
    out: list[list] = [[] for _ in adjacency]
    for i, row in enumerate(adjacency):
        out[perm[i]] = [(int(perm[v]), w) for v, w in row]
    return out


def gen_parity(x: Sequence[int], *, seed: int | None = None,
               undirected: bool = False) -> Labeled:
    """Out-degree-1 graph on ``2p`` vertices with one cycle iff ``x`` has odd parity.

    ``v_{2i} -> v_{2i+2+b}`` and ``v_{2i+1} -> v_{2i+3-b}`` with ``b = x_i``,
    indices mod ``2p``.  ``seed`` permutes vertex labels; ``undirected`` drops
    edge directions.
    """
    x = [int(b) for b in x]
    p = len(x)
    if p < 1 or any(b not in (0, 1) for b in x):
        raise ContractViolation("x must be a nonempty bit vector")
    n = 2 * p
    succ = [0] * n
    for i, b in enumerate(x):
        succ[2 * i] = (2 * i + 2 + b) % n
        succ[2 * i + 1] = (2 * i + 3 - b) % n
    if any(succ[v] == v for v in range(n)):
        raise ContractViolation("p = 1 with x = (0,) would need self-loops")
    cycles = 1 if sum(x) % 2 else 2
    perm = _perm(n, seed)
    if undirected:
        pairs = {(min(v, succ[v]), max(v, succ[v])) for v in range(n)}
        edges = [(int(perm[u]), int(perm[v])) for u, v in sorted(pairs)]
        oracle = ArrayOracle.from_edges(n, edges, directed=False, weighted=False)
    else:
        adj = _relabel([[(succ[v], 1)] for v in range(n)], perm)
        oracle = ArrayOracle.from_lists(adj, directed=True, weighted=False)
    label = {"family": "parity", "x": x, "cycles": cycles, "parity": sum(x) % 2,
             "connected": cycles == 1, "strongly_connected": cycles == 1,
             "v0": int(perm[0]), "seed": seed}
    return Labeled(oracle, label)


def gen_regular_hard(p: int, k: int, bits: Sequence[int], slots: Sequence[tuple[int, int]] | None = None,
                     *, seed: int | None = None) -> Labeled:
    """Directed graph of out-degree ``k`` that is strongly connected iff ``bits`` has odd parity.

    Vertices ``v_0 .. v_{2p-1}`` are followed by a clique ``u_0 .. u_{k-1}``
    with ``f(u_i, 0) = v_0`` and ``f(u_i, j) = u_{i+j}``.  At level ``i`` the
    forward edges sit in slots ``slots[i] = (j0, j1)`` and cross when
    ``bits[i] = 1``; every other slot ``j`` of a ``v`` vertex points to ``u_j``.
    When ``slots`` is omitted they are drawn from ``seed`` (default all zero).
    """
    bits = [int(b) for b in bits]
    if p < 1 or k < 2 or len(bits) != p:
        raise ContractViolation("need p >= 1, k >= 2 and p crossing bits")
    rng = np.random.default_rng(seed)
    if slots is None:
        slots = [(0, 0)] * p if seed is None else [tuple(rng.integers(0, k, 2)) for _ in range(p)]
    if len(slots) != p or any(not (0 <= j < k) for pair in slots for j in pair):
        raise ContractViolation("slots must give (j0, j1) in [k] for every level")
    nv = 2 * p
    n = nv + k
    u = lambda i: nv + (i % k)
    adj: list[list] = [[] for _ in range(n)]
    for i in range(k):
        adj[u(i)] = [(0, 1)] + [(u(i + j), 1) for j in range(1, k)]
    for i, (b, (j0, j1)) in enumerate(zip(bits, slots)):
        a, c = (2 * i + 2 + b) % nv, (2 * i + 3 - b) % nv
        if a == 2 * i or c == 2 * i + 1:
            raise ContractViolation("forward edge would be a self-loop")
        adj[2 * i] = [((a if j == j0 else u(j)), 1) for j in range(k)]
        adj[2 * i + 1] = [((c if j == j1 else u(j)), 1) for j in range(k)]
    perm = _perm(n, seed)
    oracle = ArrayOracle.from_lists(_relabel(adj, perm), directed=True, weighted=False)
    odd = sum(bits) % 2 == 1
    label = {"family": "regular_hard", "p": p, "k": k, "bits": bits,
             "slots": [list(map(int, s)) for s in slots], "strongly_connected": odd,
             "v0": int(perm[0]), "v1": int(perm[1]), "seed": seed}
    return Labeled(oracle, label)


def gen_cycle_split(n: int, split: tuple[int, int] | None = None, *, seed: int | None = None) -> Labeled:
    """A single ``n``-cycle (``split=None``) or two disjoint cycles of the given lengths.

    Both lengths must lie in ``[n/3, 2n/3]`` and sum to ``n``.  Vertex labels
    are a random permutation drawn from ``seed``.
    """
    if split is None:
        lengths = [n]
    else:
        a, b = split
        if a + b != n or not all(3 * x >= n and 3 * x <= 2 * n for x in (a, b)):
            raise ContractViolation("cycle lengths must sum to n and lie in [n/3, 2n/3]")
        lengths = [a, b]
    if min(lengths) < 3:
        raise ContractViolation("cycles need at least 3 vertices")
    order = np.random.default_rng(seed).permutation(n)
    edges, start = [], 0
    for length in lengths:
        cyc = order[start:start + length]
        edges += [(int(cyc[i]), int(cyc[(i + 1) % length])) for i in range(length)]
        start += length
    oracle = MatrixOracle.from_edges(n, edges, directed=False, weighted=False)
    label = {"family": "cycle_split", "n": n, "lengths": lengths,
             "components": len(lengths), "connected": len(lengths) == 1, "seed": seed}
    return Labeled(oracle, label)


@dataclass
class MinimaInstance:
    f: np.ndarray
    g: np.ndarray
    d: int
    k: int
    zeros: list[int]
    family: str  # "X", "Y" or "neither"

    @property
    def zero_positions(self) -> list[int]:
        return [i * self.k + j for i, j in enumerate(self.zeros)]


def gen_minima_matrix(d: int, k: int, zeros: Sequence[int] | None = None, *,
                      seed: int | None = None) -> MinimaInstance:
    """``d x k`` boolean matrix with one zero per row, flattened row-major.

    ``g`` maps a zero in row ``i`` to type ``i`` and every one to type ``d``.
    The family is X when exactly ``floor(d/2)`` zeros sit in the left half,
    Y when ``ceil(d/2)`` do.
    """
    if k % 2 or d % 2 == 0 or d < 1 or k < 2:
        raise ContractViolation("need even k and odd d")
    if zeros is None:
        zeros = np.random.default_rng(seed).integers(0, k, d).tolist()
    zeros = [int(z) for z in zeros]
    if len(zeros) != d or any(not 0 <= z < k for z in zeros):
        raise ContractViolation("one zero column in [k] per row")
    f = np.ones(d * k)
    g = np.full(d * k, d)
    for i, z in enumerate(zeros):
        f[i * k + z] = 0
        g[i * k + z] = i
    left = sum(z < k // 2 for z in zeros)
    family = "X" if left == d // 2 else "Y" if left == (d + 1) // 2 else "neither"
    return MinimaInstance(f, g, d, k, zeros, family)


def gen_star_reduction(M, *, seed: int | None = None) -> Labeled:
    """Weighted star-of-stars reducing row minima of ``M`` (n x k) to an MST.

    Vertices: ``s``, then ``v_1 .. v_k``, then ``u_1 .. u_n``; edges ``(s, v_i)``
    of weight 0 and ``(v_i, u_j)`` of weight ``M[j][i]``.
    """
    M = np.asarray(M)
    if M.ndim != 2 or np.any(M <= 0) or np.any(M != np.floor(M)):
        raise ContractViolation("M must be a matrix of positive integers")
    rows, cols = M.shape
    n = 1 + cols + rows
    s, v, u = 0, (lambda i: 1 + i), (lambda j: 1 + cols + j)
    edges = [(s, v(i), 0) for i in range(cols)]
    edges += [(v(i), u(j), int(M[j, i])) for j in range(rows) for i in range(cols)]
    perm = _perm(n, seed)
    edges = [(int(perm[a]), int(perm[b]), w) for a, b, w in edges]
    oracle = ArrayOracle.from_edges(n, edges, directed=False, weighted=True)
    argmins = []
    for j in range(rows):
        # MST tie-break: lowest (weight, min id, max id)
        best = min(range(cols), key=lambda i: (M[j, i], min(perm[v(i)], perm[u(j)]),
                                               max(perm[v(i)], perm[u(j)])))
        argmins.append(best)
    mst = sorted([(min(perm[s], perm[v(i)]), max(perm[s], perm[v(i)])) for i in range(cols)]
                 + [(min(perm[v(i)], perm[u(j)]), max(perm[v(i)], perm[u(j)]))
                    for j, i in enumerate(argmins)])
    label = {"family": "star_reduction", "rows": rows, "cols": cols,
             "row_argmin": [int(i) for i in argmins],
             "mst_weight": int(sum(M[j, i] for j, i in enumerate(argmins))),
             "mst_edges": [[int(a), int(b)] for a, b in mst], "seed": seed}
    return Labeled(oracle, label)
