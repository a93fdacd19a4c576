"""Cost-charging simulation of quantum search and minimum finding.

Nothing here evolves amplitudes.  Each search variant inspects the whole
domain classically (free of charge), charges the ledger the expected or
worst-case query cost of the quantum routine, and samples the outcome the
quantum routine would produce: a uniformly random solution, or a failure
with the routine's error probability in stochastic mode.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .graphmodel import MatrixOracle, QueryLedger


class Mode(str, enum.Enum):
    EXACT = "exact"
    STOCHASTIC = "stochastic"


class NoSolutionHang(RuntimeError):
    """Raised where the expected-time search would never terminate (no solutions)."""


@dataclass(frozen=True)
class CostModel:
    c1: float = 0.9    # expected-cost variant: c1 * sqrt(N / t)
    c2: float = 1.0    # bounded variant: c2 * sqrt(N)
    p2: float = 0.5    # bounded variant success probability
    c3: float = 1.0    # high-confidence variant: c3 * sqrt(N ln(1/eps))
    mode: Mode = Mode.EXACT
    seed: int = 0

    def __post_init__(self):
        if min(self.c1, self.c2, self.c3) <= 0:
            raise ValueError("cost constants must be positive")
        if not 0 < self.p2 <= 1:
            raise ValueError("p2 must lie in (0, 1]")
        object.__setattr__(self, "mode", Mode(self.mode))

    @property
    def exact(self) -> bool:
        return self.mode is Mode.EXACT

    def with_(self, **changes) -> "CostModel":
        return replace(self, **changes)

    @property
    def min_constant(self) -> float:
        """Bound on expected minimum-finding cost divided by sqrt(N)."""
        # c1 * (1 + integral_1^inf r^-3/2 dr)
        return 3.0 * self.c1


@dataclass(frozen=True)
class SearchOutcome:
    index: int | None
    charge: float

    @property
    def found(self) -> bool:
        return self.index is not None


def setup(model: CostModel | None, ledger: QueryLedger | None, rng):
    """Fill in defaults: a fresh model/ledger and an RNG seeded from the model."""
    model = model or CostModel()
    ledger = ledger if ledger is not None else QueryLedger()
    if rng is None:
        rng = np.random.default_rng(model.seed)
    return model, ledger, rng


def _solutions(n: int, predicate, marked) -> np.ndarray:
    if n < 1:
        raise ValueError("search domain must be nonempty")
    if marked is not None:
        return np.asarray(marked, dtype=np.int64)
    return np.fromiter((i for i in range(n) if predicate(i)), dtype=np.int64)


def search_expected(n: int, predicate: Callable[[int], bool] | None = None, *,
                    marked: Sequence[int] | None = None, model: CostModel | None = None,
                    ledger: QueryLedger | None = None, rng=None) -> SearchOutcome:
    """Expected-cost search: charges ``c1*sqrt(n/t)``, returns a uniform solution.

    ``marked`` may replace ``predicate`` with a precomputed array of solutions.
    Raises :class:`NoSolutionHang` when there is no solution.
    """
    model, ledger, rng = setup(model, ledger, rng)
    sols = _solutions(n, predicate, marked)
    t = len(sols)
    if t == 0:
        raise NoSolutionHang(f"no solution among {n} elements")
    charge = model.c1 * math.sqrt(n / t)
    ledger.charge(charge)
    return SearchOutcome(int(sols[rng.integers(t)]), charge)


def search_bounded(n: int, predicate: Callable[[int], bool] | None = None, *,
                   marked: Sequence[int] | None = None, model: CostModel | None = None,
                   ledger: QueryLedger | None = None, rng=None) -> SearchOutcome:
    """Worst-case ``c2*sqrt(n)`` search, succeeding with probability ``p2``."""
    model, ledger, rng = setup(model, ledger, rng)
    sols = _solutions(n, predicate, marked)
    charge = model.c2 * math.sqrt(n)
    ledger.charge(charge)
    if len(sols) == 0:
        return SearchOutcome(None, charge)
    if not model.exact and rng.random() >= model.p2:
        return SearchOutcome(None, charge)
    return SearchOutcome(int(sols[rng.integers(len(sols))]), charge)


def search_highconf(n: int, predicate: Callable[[int], bool] | None = None, eps: float = 0.1,
                    *, marked: Sequence[int] | None = None, model: CostModel | None = None,
                    ledger: QueryLedger | None = None, rng=None,
                    t_aware: bool = False) -> SearchOutcome:
    """``c3*sqrt(n ln(1/eps))`` search, failing with probability ``eps``.

    With ``t_aware`` a search with ``t > 0`` solutions charges
    ``c3*sqrt((n/t) ln(1/eps))`` instead; the empty case still pays in full.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    model, ledger, rng = setup(model, ledger, rng)
    sols = _solutions(n, predicate, marked)
    size = n / len(sols) if t_aware and len(sols) else n
    charge = model.c3 * math.sqrt(size * math.log(1 / eps))
    ledger.charge(charge)
    if len(sols) == 0:
        return SearchOutcome(None, charge)
    if not model.exact and rng.random() < eps:
        return SearchOutcome(None, charge)
    return SearchOutcome(int(sols[rng.integers(len(sols))]), charge)


def learn_entries(oracle: MatrixOracle, k: int, *, model: CostModel | None = None,
                  ledger: QueryLedger | None = None, rng=None) -> set[tuple[int, int]]:
    """Learn at least ``k`` one-entries of the matrix (all of them if fewer exist).

    Charges ``c1 * n * sqrt(k)``.  In stochastic mode the guarantee holds with
    probability 1/2; otherwise a random too-small subset is returned.
    """
    if k < 1:
        raise ValueError("k must be positive")
    model, ledger, rng = setup(model, ledger, rng)
    ledger.charge(model.c1 * oracle.n * math.sqrt(k))
    ones = np.argwhere(oracle.adjacency)
    target = min(k, len(ones))
    if not model.exact and target > 0 and rng.random() < 0.5:
        target = int(rng.integers(target))
    pick = rng.choice(len(ones), size=target, replace=False) if target else []
    return {(int(ones[i][0]), int(ones[i][1])) for i in pick}


def ranks_of(values) -> np.ndarray:
    """Rank of each element under the (value, index) order; a permutation of 0..N-1."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    rank = np.empty(len(values), dtype=np.int64)
    rank[order] = np.arange(len(values))
    return rank


def evaluate(f, n: int) -> np.ndarray:
    """Tabulate ``f`` over ``range(n)``; arrays pass through."""
    if callable(f):
        return np.array([f(i) for i in range(n)], dtype=float)
    arr = np.asarray(f, dtype=float)
    if len(arr) != n:
        raise ValueError(f"expected {n} values, got {len(arr)}")
    return arr


def find_minimum(f, n: int, *, budget: float | None = None, model: CostModel | None = None,
                 ledger: QueryLedger | None = None, rng=None,
                 trace: list | None = None) -> int:
    """Randomised minimum finding by repeated improvement.

    Starts from a uniformly random index and keeps jumping to a uniformly
    random strictly smaller element until none is left.  Ties are broken by
    index.  With ``budget`` the loop stops once the charge would exceed it and
    the current index is returned.  Visited indices are appended to ``trace``.
    """
    if n < 1:
        raise ValueError("domain must be nonempty")
    model, ledger, rng = setup(model, ledger, rng)
    values = evaluate(f, n)
    rank = ranks_of(values)
    order = np.argsort(rank)
    j = int(rng.integers(n))
    spent = 0.0
    if trace is not None:
        trace.append(j)
    while True:
        t = int(rank[j])  # elements strictly below j
        if t == 0:
            return j
        cost = model.c1 * math.sqrt(n / t)
        if budget is not None and spent + cost > budget:
            ledger.charge(max(budget - spent, 0.0))
            return j
        ledger.charge(cost)
        spent += cost
        j = int(order[rng.integers(t)])
        if trace is not None:
            trace.append(j)
