import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qgraph import instances
from qgraph.adversarial import gen_parity
from qgraph.baselines import bfs_components, dijkstra, kruskal, scc
from qgraph.graphmodel import (INF, ArrayOracle, ContractViolation, MatrixOracle, QueryLedger,
                               dumps, entry, load, loads, neighbor, save, validate)


def triangle():
    return MatrixOracle.from_edges(3, [(0, 1), (1, 2), (2, 0)], directed=False)


def test_entry_present_and_diagonal():
    m = triangle()
    assert entry(m, 0, 1) is True
    assert entry(m, 0, 0) is False


def test_entry_weighted_symmetric():
    m = MatrixOracle.from_edges(2, [(0, 1, 7)], directed=False, weighted=True)
    assert entry(m, 1, 0) == 7
    assert entry(m, 0, 0) == INF


def test_entry_out_of_range():
    with pytest.raises(ContractViolation):
        entry(triangle(), 0, 3)


def test_infinity_semantics():
    assert INF > 2**40
    assert INF + 5 == INF


def test_neighbor_path_slots():
    a = ArrayOracle.from_edges(3, [(0, 1), (1, 2)], directed=False)
    assert {neighbor(a, 1, 0)[0], neighbor(a, 1, 1)[0]} == {0, 2}
    with pytest.raises(ContractViolation):
        neighbor(a, 1, 2)


def test_star_degrees():
    a = ArrayOracle.from_edges(5, [(0, i) for i in range(1, 5)], directed=False)
    assert a.degrees[0] == 4
    assert a.degrees[1] == 1


def test_round_trip_bytes(tmp_path):
    oracle, _ = instances.make("connected", n=20, seed=3, weighted=True)
    path = tmp_path / "g.txt"
    save(oracle, path)
    first = path.read_bytes()
    save(load(path), path)
    assert path.read_bytes() == first


def test_loads_rejects_bad_header():
    with pytest.raises(ValueError):
        loads("3 1 sideways weighted\n0 1 2\n")
    with pytest.raises(ValueError):
        loads("3 2 directed unweighted\n0 1\n")


def test_validate_duplicate_neighbor():
    a = ArrayOracle.from_lists([[1, 1], [0]], directed=True, check=False)
    assert any("duplicate neighbor 1 in f_0" in p for p in validate(a))


def test_validate_asymmetric_matrix():
    w = np.full((3, 3), INF)
    w[0, 1] = 1
    m = MatrixOracle(w, directed=False, weighted=False, check=False)
    assert validate(m) == ["asymmetric entry at (0, 1)"]
    with pytest.raises(ContractViolation):
        MatrixOracle(w, directed=False, weighted=False)


def test_validate_self_loop_and_negative():
    with pytest.raises(ContractViolation):
        ArrayOracle.from_lists([[0]], directed=True)
    with pytest.raises(ContractViolation):
        MatrixOracle.from_edges(2, [(0, 1, -3)], directed=True, weighted=True)


def test_validate_parity_instance():
    assert validate(gen_parity([1, 0, 1], seed=5).oracle) == []


def test_ledger_phases():
    led = QueryLedger()
    with led.phase("a"):
        led.charge(1.5)
        with led.phase("b"):
            led.charge(2.0)
        led.charge(0.25)
    led.charge(1.0)
    assert led.charged == pytest.approx(4.75)
    assert dict(led.phases) == {"a": 1.75, "b": 2.0}
    with pytest.raises(ValueError):
        led.charge(-1)
    with pytest.raises(ValueError):
        led.charge(math.inf)


@given(st.integers(1, 25), st.floats(0, 1), st.booleans(), st.booleans(), st.integers(0, 2**31))
def test_matrix_array_matrix_identity(n, p, directed, weighted, seed):
    rng = np.random.default_rng(seed)
    w = np.where(rng.random((n, n)) < p, rng.integers(0, 50, (n, n)), INF).astype(float)
    np.fill_diagonal(w, INF)
    if not directed:
        w = np.minimum(w, w.T)
    if not weighted:
        w = np.where(np.isfinite(w), 1.0, INF)
    m = MatrixOracle(w, directed=directed, weighted=weighted)
    back = m.to_array().to_matrix()
    assert np.array_equal(back.weights, m.weights)
    assert back.directed == directed
    assert loads(dumps(m)).to_matrix().weights.tolist() == m.weights.tolist()


@given(st.integers(2, 30), st.floats(0, 3), st.integers(0, 2**31))
def test_undirected_degree_sum_even(n, mpn, seed):
    a, _ = instances.make("connected", n=n, m_per_n=mpn, seed=seed)
    assert a.m % 2 == 0
    assert a.m == 2 * len({(min(u, v), max(u, v)) for u, v, _ in a.edges()})
    assert validate(a) == []



@pytest.mark.parametrize("base", [kruskal, bfs_components])
def test_baseline_probe_exactness(base, monkeypatch):
    import qgraph.baselines as b
    calls = {"n": 0}
    real_entry, real_neighbor = b.entry, b.neighbor

    def counting_entry(*a, **k):
        calls["n"] += 1
        return real_entry(*a, **k)

    def counting_neighbor(*a, **k):
        calls["n"] += 1
        return real_neighbor(*a, **k)

    monkeypatch.setattr(b, "entry", counting_entry)
    monkeypatch.setattr(b, "neighbor", counting_neighbor)
    for model in ("matrix", "array"):
        oracle, _ = instances.make("connected", n=12, seed=1, weighted=True, model=model)
        calls["n"] = 0
        res = base(oracle)
        assert res.probes == calls["n"] > 0


def test_baseline_probe_exactness_directed(monkeypatch):
    import qgraph.baselines as b
    calls = {"n": 0}
    real = b.neighbor
    monkeypatch.setattr(b, "neighbor", lambda *a, **k: (calls.__setitem__("n", calls["n"] + 1), real(*a, **k))[1])
    oracle, _ = instances.make("digraph", n=15, seed=2, weighted=True)
    for fn in (scc, lambda o: dijkstra(o, 0)):
        calls["n"] = 0
        assert fn(oracle).probes == calls["n"]
