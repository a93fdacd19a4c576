"""Graph access models, weights and query ledgers.

Two oracle encodings are supported:

* :class:`MatrixOracle` answers ``entry(i, j)``: edge presence (or its weight).
* :class:`ArrayOracle` answers ``neighbor(i, j)``: the j-th out-neighbour of
  ``i`` together with the edge weight.  Degrees are part of the input.

Algorithms that simulate quantum search read the oracle contents directly
(the simulator is omniscient) and only charge the ledger; classical
baselines go through :func:`entry` / :func:`neighbor`, which count probes.
"""

from __future__ import annotations

import math
from collections import defaultdict
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

INF = math.inf
# Finite weights live in float64 arrays; keep every sum exactly representable.
MAX_WEIGHT = 2**40


class ContractViolation(ValueError):
    """A precondition of an oracle operation was broken."""


def as_weight(x) -> int | float:
    """Normalise a stored weight to ``int`` or :data:`INF`."""
    x = float(x)
    if math.isinf(x):
        return INF
    return int(x)


@dataclass
class QueryLedger:
    """Accumulates simulated quantum charges and classical probes."""

    charged: float = 0.0
    probes: int = 0
    phases: dict[str, float] = field(default_factory=lambda: defaultdict(float))
    _phase: str | None = field(default=None, repr=False)

    def charge(self, amount: float, phase: str | None = None) -> None:
        if amount < 0 or not math.isfinite(amount):
            raise ValueError(f"invalid charge {amount!r}")
        self.charged += amount
        label = phase or self._phase
        if label is not None:
            self.phases[label] += amount

    def probe(self, count: int = 1) -> None:
        self.probes += count

    @contextmanager
    def phase(self, label: str) -> Iterator[None]:
        previous, self._phase = self._phase, label
        try:
            yield
        finally:
            self._phase = previous

    def snapshot(self) -> dict:
        return {
            "charged": round(self.charged, 3),
            "probes": self.probes,
            "phases": {k: round(v, 3) for k, v in sorted(self.phases.items())},
        }


class MatrixOracle:
    """Adjacency-matrix access model.

    ``weights[i, j]`` is the edge weight, or ``inf`` when there is no edge.
    Unweighted graphs store weight 1 for every edge and ``entry`` returns a
    boolean.
    """

    def __init__(self, weights, *, directed: bool, weighted: bool, check: bool = True):
        w = np.array(weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ContractViolation("matrix must be square")
        self.weights = w
        self.weights.flags.writeable = False
        self.n = w.shape[0]
        self.directed = directed
        self.weighted = weighted
        if check:
            problems = validate(self)
            if problems:
                raise ContractViolation("; ".join(problems[:5]))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence], *, directed: bool,
                   weighted: bool | None = None, check: bool = True) -> "MatrixOracle":
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples; undirected edges are mirrored."""
        w = np.full((n, n), INF)
        edges = list(edges)
        if weighted is None:
            weighted = any(len(e) == 3 for e in edges)
        for e in edges:
            u, v = int(e[0]), int(e[1])
            wt = e[2] if weighted else 1
            w[u, v] = wt
            if not directed:
                w[v, u] = wt
        return cls(w, directed=directed, weighted=weighted, check=check)

    @classmethod
    def from_bool(cls, adjacency, *, directed: bool, check: bool = True) -> "MatrixOracle":
        a = np.asarray(adjacency, dtype=bool)
        return cls(np.where(a, 1.0, INF), directed=directed, weighted=False, check=check)

    @property
    def adjacency(self) -> np.ndarray:
        return np.isfinite(self.weights)

    @property
    def m(self) -> int:
        """Number of directed edges (each undirected edge counts twice)."""
        return int(self.adjacency.sum())

    def transpose(self) -> "MatrixOracle":
        return MatrixOracle(self.weights.T.copy(), directed=self.directed,
                            weighted=self.weighted, check=False)

    def edges(self) -> list[tuple[int, int, int | float]]:
        """Directed edges in row-major order."""
        us, vs = np.nonzero(self.adjacency)
        return [(int(u), int(v), as_weight(self.weights[u, v])) for u, v in zip(us, vs)]

    def to_array(self) -> "ArrayOracle":
        return ArrayOracle.from_edges(self.n, self.edges(), directed=True, weighted=self.weighted,
                                      undirected_flag=not self.directed)

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"MatrixOracle(n={self.n}, m={self.m}, {kind}, weighted={self.weighted})"


class ArrayOracle:
    """Adjacency-array access model stored in CSR form.

    Slot ``j`` of vertex ``i`` lives at ``offsets[i] + j`` in ``targets`` and
    ``weights``.  Slot order is fixed at construction.
    """

    def __init__(self, offsets, targets, weights, *, directed: bool, weighted: bool,
                 check: bool = True):
        self.offsets = np.asarray(offsets, dtype=np.int64)
        self.targets = np.asarray(targets, dtype=np.int64)
        self.weights = np.asarray(weights, dtype=float)
        for a in (self.offsets, self.targets, self.weights):
            a.flags.writeable = False
        self.n = len(self.offsets) - 1
        self.directed = directed
        self.weighted = weighted
        self.degrees = np.diff(self.offsets)
        self.sources = np.repeat(np.arange(self.n), self.degrees)
        if check:
            problems = validate(self)
            if problems:
                raise ContractViolation("; ".join(problems[:5]))

    @classmethod
    def from_lists(cls, adjacency: Sequence[Sequence], *, directed: bool,
                   weighted: bool | None = None, check: bool = True) -> "ArrayOracle":
        """``adjacency[i]`` lists neighbours, either bare ints or ``(v, w)`` pairs."""
        if weighted is None:
            weighted = any(isinstance(x, (tuple, list)) for row in adjacency for x in row)
        offsets = [0]
        targets, weights = [], []
        for row in adjacency:
            for x in row:
                if isinstance(x, (tuple, list)):
                    targets.append(int(x[0]))
                    weights.append(x[1] if weighted else 1)
                else:
                    targets.append(int(x))
                    weights.append(1)
            offsets.append(len(targets))
        return cls(offsets, targets, weights, directed=directed, weighted=weighted, check=check)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence], *, directed: bool,
                   weighted: bool | None = None, check: bool = True,
                   undirected_flag: bool = False) -> "ArrayOracle":
        """Build from edge tuples in slot order.

        With ``directed=False`` each edge is listed once and mirrored.  With
        ``directed=True, undirected_flag=True`` the edges already contain both
        directions (this is how instance files store undirected graphs).
        """
        edges = list(edges)
        if weighted is None:
            weighted = any(len(e) == 3 for e in edges)
        adj: list[list] = [[] for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            w = e[2] if weighted else 1
            adj[u].append((v, w))
            if not directed:
                adj[v].append((u, w))
        is_directed = directed and not undirected_flag
        return cls.from_lists(adj, directed=is_directed, weighted=weighted, check=check)

    @property
    def m(self) -> int:
        """Total number of directed edges, the sum of out-degrees."""
        return int(self.offsets[-1])

    def row(self, i: int) -> list[tuple[int, int | float]]:
        lo, hi = self.offsets[i], self.offsets[i + 1]
        return [(int(v), as_weight(w)) for v, w in zip(self.targets[lo:hi], self.weights[lo:hi])]

    @property
    def arrays(self) -> list[list[tuple[int, int | float]]]:
        return [self.row(i) for i in range(self.n)]

    def edges(self) -> list[tuple[int, int, int | float]]:
        """Directed edges in slot order."""
        return [(int(u), int(v), as_weight(w))
                for u, v, w in zip(self.sources, self.targets, self.weights)]

    def to_matrix(self) -> MatrixOracle:
        w = np.full((self.n, self.n), INF)
        w[self.sources, self.targets] = self.weights
        return MatrixOracle(w, directed=self.directed, weighted=self.weighted, check=False)

    def reversed(self) -> "ArrayOracle":
        return ArrayOracle.from_edges(self.n, [(v, u, w) for u, v, w in self.edges()],
                                      directed=True, weighted=self.weighted, check=False)

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"ArrayOracle(n={self.n}, m={self.m}, {kind}, weighted={self.weighted})"


Oracle = MatrixOracle | ArrayOracle


def entry(oracle: MatrixOracle, i: int, j: int, ledger: QueryLedger | None = None):
    """Read ``M[i, j]``: a bool for unweighted graphs, else a weight (``INF`` if absent)."""
    if not (0 <= i < oracle.n and 0 <= j < oracle.n):
        raise ContractViolation(f"entry ({i}, {j}) out of range for n={oracle.n}")
    if ledger is not None:
        ledger.probe()
    w = oracle.weights[i, j]
    if not oracle.weighted:
        return bool(np.isfinite(w))
    return as_weight(w)


def neighbor(oracle: ArrayOracle, i: int, j: int, ledger: QueryLedger | None = None):
    """Read ``f_i(j)`` as a ``(vertex, weight)`` pair."""
    if not 0 <= i < oracle.n:
        raise ContractViolation(f"vertex {i} out of range for n={oracle.n}")
    if not 0 <= j < oracle.degrees[i]:
        raise ContractViolation(f"slot {j} out of range for vertex {i} (degree {oracle.degrees[i]})")
    if ledger is not None:
        ledger.probe()
    k = oracle.offsets[i] + j
    return int(oracle.targets[k]), as_weight(oracle.weights[k])


def validate(oracle: Oracle) -> list[str]:
    """Report every broken invariant; an empty list means the oracle is valid."""
    problems: list[str] = []
    if isinstance(oracle, MatrixOracle):
        w = oracle.weights
        if np.any(np.isnan(w)):
            problems.append("NaN entry")
        finite = np.isfinite(w)
        if np.any((w < 0) & finite):
            problems.append("negative weight")
        if np.any(w[finite] > MAX_WEIGHT) or np.any(w[finite] != np.floor(w[finite])):
            problems.append("weights must be integers below MAX_WEIGHT")
        for i in np.flatnonzero(finite.diagonal()):
            problems.append(f"self-loop at ({i}, {i})")
        if not oracle.directed:
            bad = np.argwhere((w != w.T) & ~(np.isnan(w) | np.isnan(w.T)))
            for i, j in bad:
                if i < j:
                    problems.append(f"asymmetric entry at ({i}, {j})")
        return problems

    n = oracle.n
    if np.any(np.diff(oracle.offsets) < 0) or oracle.offsets[0] != 0:
        return ["malformed offsets"]
    t, w = oracle.targets, oracle.weights
    if np.any((t < 0) | (t >= n)):
        problems.append("neighbour index out of range")
        return problems
    if np.any(~np.isfinite(w)) or np.any(w < 0) or np.any(w > MAX_WEIGHT) \
            or np.any(w != np.floor(w)):
        problems.append("weights must be finite nonnegative integers below MAX_WEIGHT")
    for i in range(n):
        lo, hi = oracle.offsets[i], oracle.offsets[i + 1]
        row = t[lo:hi]
        if np.any(row == i):
            problems.append(f"self-loop in f_{i}")
        vals, counts = np.unique(row, return_counts=True)
        for v in vals[counts > 1]:
            problems.append(f"duplicate neighbor {v} in f_{i}")
    if not oracle.directed:
        fwd: dict[tuple[int, int], float] = {}
        for u, v, wt in zip(oracle.sources, t, w):
            fwd[(int(u), int(v))] = float(wt)
        for (u, v), wt in fwd.items():
            back = fwd.get((v, u))
            if back is None:
                problems.append(f"missing reciprocal of ({u}, {v})")
            elif back != wt:
                problems.append(f"weight mismatch on ({u}, {v})")
    return problems


# -- instance files ---------------------------------------------------------

def _fmt_weight(w) -> str:
    return str(int(w))


def dumps(oracle: Oracle) -> str:
    """Serialise to the text instance format (one line per directed edge)."""
    edges = oracle.edges()
    kind = "directed" if oracle.directed else "undirected"
    wkind = "weighted" if oracle.weighted else "unweighted"
    lines = [f"{oracle.n} {len(edges)} {kind} {wkind}"]
    for u, v, w in edges:
        lines.append(f"{u} {v} {_fmt_weight(w)}" if oracle.weighted else f"{u} {v}")
    return "\n".join(lines) + "\n"


def loads(text: str, *, check: bool = True) -> ArrayOracle:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty instance")
    head = lines[0].split()
    if len(head) != 4 or head[2] not in ("directed", "undirected") \
            or head[3] not in ("weighted", "unweighted"):
        raise ValueError(f"bad header: {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    directed = head[2] == "directed"
    weighted = head[3] == "weighted"
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != (3 if weighted else 2):
            raise ValueError(f"bad edge line: {ln!r}")
        edges.append(tuple(int(p) for p in parts))
    if len(edges) != m:
        raise ValueError(f"header says {m} edges, found {len(edges)}")
    return ArrayOracle.from_edges(n, edges, directed=True, weighted=weighted, check=check,
                                  undirected_flag=not directed)


def save(oracle: Oracle, path: str | Path) -> None:
    Path(path).write_text(dumps(oracle))


def load(path: str | Path, *, check: bool = True) -> ArrayOracle:
    return loads(Path(path).read_text(), check=check)


def as_array(oracle: Oracle) -> ArrayOracle:
    return oracle if isinstance(oracle, ArrayOracle) else oracle.to_array()


def as_matrix(oracle: Oracle) -> MatrixOracle:
    return oracle if isinstance(oracle, MatrixOracle) else oracle.to_matrix()
