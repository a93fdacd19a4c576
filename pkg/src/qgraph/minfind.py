"""Finding the d smallest values of pairwise different type.

The greedy algorithm keeps a selection of ``d'`` indices of distinct types,
initially artificial indices with unique types and values above everything
real.  Each iteration finds a *good* index by expected-cost search and swaps
it in.  An index ``j`` is good when it beats the selected index of its own
type, or its type is unselected and it beats some selected index.

Values are compared under the (value, index) order, which makes ``f``
injective.  The state is kept per type so that counting and sampling good
elements is O(number of types) per iteration instead of O(N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphmodel import ContractViolation, QueryLedger
from .qprimitives import CostModel, evaluate, ranks_of, setup

# Mean charge of find_smallest_of_types divided by sqrt(d*N), measured with
# c1 = 1 over d <= N/2 (scripts/calibrate_minfind.py).  Multiplied by c1.
MEAN_CONSTANT = 3.0
# Charge budget constant giving success probability >= 1/2 (Markov).
BUDGET_CONSTANT = 2 * MEAN_CONSTANT


@dataclass(frozen=True)
class GoodElementReport:
    t: int
    known_type: int
    unknown_type: int


class TypedSelection:
    """Selection ``I`` of ``d'`` indices of distinct types over a domain of size N.

    Real entries are domain indices; the remaining ``n_artificial`` entries are
    the artificial indices ``N .. N + n_artificial - 1`` (the one with the
    largest index is evicted first).
    """

    def __init__(self, values, types, d_prime: int):
        values = np.asarray(values, dtype=float)
        types = np.asarray(types)
        if d_prime < 1:
            raise ContractViolation("d' must be positive")
        if len(values) != len(types):
            raise ContractViolation("f and g must have the same domain")
        self.N = len(values)
        self.d_prime = d_prime
        self.values = values
        self.rank = ranks_of(values)
        self.type_labels, self.tcode = np.unique(types, return_inverse=True)
        self.tcode = self.tcode.astype(np.int64).reshape(-1)
        self.e = len(self.type_labels)
        # members: domain indices grouped by type, ascending rank inside a type
        self.members = np.lexsort((self.rank, self.tcode))
        counts = np.bincount(self.tcode, minlength=self.e)
        self.offsets = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self.pos_in_type = np.empty(self.N, dtype=np.int64)
        self.pos_in_type[self.members] = np.arange(self.N) - self.offsets[self.tcode[self.members]]
        self._stride = self.N + d_prime + 1
        self._keys = self.tcode[self.members] * self._stride + self.rank[self.members]
        self.cur_pos = np.full(self.e, -1, dtype=np.int64)
        self.n_artificial = d_prime
        self.interrupted = False
        self.iterations = 0

    def copy(self) -> "TypedSelection":
        new = object.__new__(TypedSelection)
        new.__dict__.update(self.__dict__)
        new.cur_pos = self.cur_pos.copy()
        return new

    # -- state views ------------------------------------------------------

    def _cur_rank(self) -> np.ndarray:
        """Rank of the selected element per type, -1 where the type is unselected."""
        sel = self.cur_pos >= 0
        out = np.full(self.e, -1, dtype=np.int64)
        idx = self.members[self.offsets[:-1][sel] + self.cur_pos[sel]]
        out[sel] = self.rank[idx]
        return out

    def max_rank(self) -> int:
        """Rank of the largest selected entry (artificial entries rank above N)."""
        if self.n_artificial > 0:
            return self.N + self.n_artificial - 1
        return int(self._cur_rank().max())

    def indices(self) -> list[int]:
        """Real selected indices, ascending by (value, index)."""
        sel = np.flatnonzero(self.cur_pos >= 0)
        idx = self.members[self.offsets[sel] + self.cur_pos[sel]]
        return [int(i) for i in idx[np.argsort(self.rank[idx])]]

    def entries(self) -> set[int]:
        """Selected set including artificial indices."""
        return set(self.indices()) | set(range(self.N, self.N + self.n_artificial))

    def by_type(self) -> dict:
        """Map type label -> selected index."""
        return {self.type_labels[self.tcode[i]].item(): i for i in self.indices()}

    # -- good elements ------------------------------------------------------

    def _good_counts(self):
        known_types = np.flatnonzero(self.cur_pos >= 0)
        unknown_types = np.flatnonzero(self.cur_pos < 0)
        known_counts = self.cur_pos[known_types]
        top = self.max_rank()
        probe = unknown_types * self._stride + top
        unknown_counts = np.searchsorted(self._keys, probe) - self.offsets[unknown_types]
        return known_types, known_counts, unknown_types, unknown_counts

    def count_good(self) -> GoodElementReport:
        _, kc, _, uc = self._good_counts()
        known, unknown = int(kc.sum()), int(uc.sum())
        return GoodElementReport(known + unknown, known, unknown)

    def is_good(self, j: int) -> bool:
        tau = self.tcode[j]
        if self.cur_pos[tau] >= 0:
            return bool(self.pos_in_type[j] < self.cur_pos[tau])
        return bool(self.rank[j] < self.max_rank())

    def good_indices(self) -> np.ndarray:
        """All good indices (O(N); used by tests and the generic search path)."""
        return np.array([j for j in range(self.N) if self.is_good(j)], dtype=np.int64)

    def sample_good(self, rng) -> tuple[int, int]:
        """Uniformly random good index together with the good count ``t``."""
        kt, kc, ut, uc = self._good_counts()
        types = np.concatenate([kt, ut])
        counts = np.concatenate([kc, uc])
        cum = np.cumsum(counts)
        t = int(cum[-1]) if len(cum) else 0
        if t == 0:
            return -1, 0
        r = int(rng.integers(t))
        k = int(np.searchsorted(cum, r, side="right"))
        pos = r - (int(cum[k - 1]) if k else 0)
        tau = types[k]
        return int(self.members[self.offsets[tau] + pos]), t

    # -- update -------------------------------------------------------------

    def improve_inplace(self, j: int) -> None:
        if not 0 <= j < self.N or not self.is_good(j):
            raise ContractViolation(f"index {j} is not good for the selection")
        tau = self.tcode[j]
        if self.cur_pos[tau] < 0:
            if self.n_artificial > 0:
                self.n_artificial -= 1
            else:
                cur = self._cur_rank()
                self.cur_pos[int(np.argmax(cur))] = -1
        self.cur_pos[tau] = self.pos_in_type[j]


def count_good(selection: TypedSelection) -> GoodElementReport:
    return selection.count_good()


def improve(selection: TypedSelection, j: int) -> TypedSelection:
    """Return a new selection with the good index ``j`` swapped in."""
    new = selection.copy()
    new.improve_inplace(j)
    return new


def selection_from(values, types, d_prime: int, real: list[int]) -> TypedSelection:
    """Build a selection holding ``real`` plus artificial entries (for tests/tracing)."""
    sel = TypedSelection(values, types, d_prime)
    if len(real) > d_prime:
        raise ContractViolation("too many entries")
    for i in real:
        tau = sel.tcode[i]
        if sel.cur_pos[tau] >= 0:
            raise ContractViolation("entries must have distinct types")
        sel.cur_pos[tau] = sel.pos_in_type[i]
    sel.n_artificial = d_prime - len(real)
    return sel


def find_smallest_of_types(f, g, N: int, d_prime: int, *, budget: float | None = None,
                           model: CostModel | None = None, ledger: QueryLedger | None = None,
                           rng=None, trace: list | None = None) -> TypedSelection:
    """Greedy search for the ``min(d', e)`` smallest values of pairwise different type.

    ``f`` and ``g`` are arrays or callables over ``range(N)``.  Each round
    charges ``c1*sqrt(N/t)`` for finding one of the ``t`` good indices.  The
    loop ends when no good index is left (checked by the simulator for free)
    or when the next search would exceed ``budget``; the latter sets
    ``interrupted``.  Selected entry sets are appended to ``trace``.
    """
    if N < 1:
        raise ContractViolation("domain must be nonempty")
    model, ledger, rng = setup(model, ledger, rng)
    values = evaluate(f, N)
    types = np.array([g(i) for i in range(N)]) if callable(g) else np.asarray(g)
    sel = TypedSelection(values, types, d_prime)
    spent = 0.0
    while True:
        if trace is not None:
            trace.append(sel.entries())
        j, t = sel.sample_good(rng)
        if t == 0:
            break
        cost = model.c1 * math.sqrt(N / t)
        if budget is not None and spent + cost > budget:
            ledger.charge(max(budget - spent, 0.0))
            sel.interrupted = True
            break
        ledger.charge(cost)
        spent += cost
        sel.improve_inplace(j)
        sel.iterations += 1
    return sel


def find_d_smallest(f, N: int, d: int, **kw) -> list[int]:
    """Indices of the ``d`` smallest values (ties by index)."""
    if not 1 <= d <= N:
        raise ContractViolation(f"d={d} must lie in [1, N={N}]")
    return find_smallest_of_types(f, np.arange(N), N, d, **kw).indices()


def find_d_types(g, N: int, d_prime: int, **kw) -> list[int]:
    """``min(d', e)`` indices of pairwise distinct type."""
    return find_smallest_of_types(np.zeros(N), g, N, d_prime, **kw).indices()


def remark_budget(d: int, N: int, k: float, model: CostModel | None = None) -> float:
    """Charge budget ``k * c * sqrt(d N)`` for error about ``2**-k``."""
    c1 = (model or CostModel()).c1
    return k * BUDGET_CONSTANT * c1 * math.sqrt(max(d, 1) * N)
