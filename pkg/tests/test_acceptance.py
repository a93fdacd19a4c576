"""Acceptance criteria, one test per criterion.

Every test records a ``PASS``/``FAIL`` line that is printed in the terminal
summary, then asserts.  Tolerances are the stated ones, not loosened.
"""

import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE
from qgraph import bench, instances
from qgraph.adversarial import gen_cycle_split, gen_parity, gen_regular_hard, gen_star_reduction
from qgraph.baselines import bfs_components, dijkstra, kruskal
from qgraph.graphmodel import as_array, as_matrix
from qgraph.spanning import components_preprocess, mst_boruvka
from qgraph.sssp import sssp
from qgraph.strongconn import reach_tree_doubling, reach_tree_stack

SIZES = [64, 128, 256, 512]


def record(name, ok, detail):
    ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, detail


# -- 1. oracle equivalence -------------------------------------------------------


def corpus(kind, count=200, seed=0):
    """``count`` seeded instances with n <= 64, mixing connected and sparse families."""
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(2, 65))
        s = int(rng.integers(2**31))
        if kind == "undirected":
            if i % 2:
                yield instances.make("connected", n=n, m_per_n=float(rng.uniform(1, 4)), seed=s,
                                     weighted=True)
            else:
                yield instances.make("gnp", n=n, p=float(rng.uniform(0, 4 / n)), seed=s,
                                     weighted=True)
        else:
            fam = "sc-digraph" if i % 2 else "digraph"
            yield instances.make(fam, n=n, m_per_n=float(rng.uniform(0.5, 3)), seed=s,
                                 weighted=True)


EQUIV = [
    ("mst-matrix", "undirected"), ("mst-array", "undirected"),
    ("connectivity-matrix", "undirected"), ("connectivity-array", "undirected"),
    ("strongconn-matrix", "directed"), ("strongconn-array", "directed"),
    ("sssp-matrix", "directed"), ("sssp-array", "directed"),
]


@pytest.mark.parametrize("algorithm,kind", EQUIV)
def test_1_equivalence(algorithm, kind):
    start = time.perf_counter()
    mismatches = total = 0
    for oracle, label in corpus(kind):
        rep = bench.run(algorithm, oracle, seed=total)
        total += 1
        mismatches += not rep.success
    secs = time.perf_counter() - start
    record(f"1 {algorithm} == baseline", mismatches == 0 and secs < 60,
           f"{mismatches}/{total} mismatches in {secs:.1f}s")


def test_1_equivalence_direct_oracles():
    """Spot the baselines directly (not via the bench digest) on the same corpus."""
    bad = 0
    for oracle, _ in corpus("undirected", 50, seed=1):
        f = mst_boruvka(oracle)
        k = kruskal(oracle).answer
        bad += sorted(f.edges) != sorted((u, v) for u, v, _ in k)
        bad += f.total_weight != sum(w for *_, w in k)
    for oracle, _ in corpus("directed", 50, seed=2):
        bad += sssp(oracle).dist != dijkstra(oracle).answer
    record("1 mst/sssp edge sets and distances", bad == 0, f"{bad}/100 mismatches")


def test_1_equivalence_minfind():
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    bad = 0
    for i in range(200):
        N = int(rng.integers(1, 65))
        d = int(rng.integers(1, N + 1))
        f, g = bench.random_function(N, d, types=("identity", "few", "many")[i % 3], seed=i)
        bad += not bench.run_minfind(f, g, d, seed=i).success
    secs = time.perf_counter() - start
    record("1 minfind == brute force", bad == 0 and secs < 60, f"{bad}/200 mismatches in {secs:.1f}s")


# -- 2. scaling exponents ---------------------------------------------------------


def slope(spec, key="n", log_power=0.0):
    res = bench.sweep(spec)
    return bench.fit_exponent(res.points(key, y="queries"), log_power=log_power)


SCALING = [
    ("connectivity-matrix", "connected", {"m_per_n": 2.0}, 1.5, 0.2, 0.0),
    ("connectivity-array", "connected", {"m_per_n": 2.0}, 1.0, 0.15, 0.0),
    ("mst-matrix", "connected", {"m_per_n": 2.0, "weighted": True}, 1.5, 0.2, 0.0),
    ("mst-array", "connected", {"m_per_n": 2.0, "weighted": True}, 1.0, 0.2, 0.0),
    ("sssp-array", "sc-digraph", {"m_per_n": 4.0, "weighted": True}, 1.0, 0.2, 1.5),
]


@pytest.mark.parametrize("algorithm,family,params,target,tol,log_power", SCALING)
def test_2_scaling(algorithm, family, params, target, tol, log_power):
    spec = bench.SweepSpec(algorithm, family, {"n": SIZES}, trials=30, seed=2024,
                           params=params, check=False)
    fit = slope(spec, log_power=log_power)
    norm = f" / log^{log_power}" if log_power else ""
    record(f"2 {algorithm}{norm} slope {target} ± {tol}", abs(fit.slope - target) <= tol,
           f"fit {fit}")


@pytest.mark.parametrize("axis", ["d", "N"])
def test_2_scaling_minfind(axis):
    grid = {"N": [4096], "d": [8, 16, 32, 64, 128]} if axis == "d" else \
        {"N": [512, 1024, 2048, 4096, 8192], "d": [8]}
    spec = bench.SweepSpec("minfind", "function", grid, trials=30, seed=2024)
    fit = slope(spec, key=axis)
    record(f"2 minfind slope in {axis} 0.5 ± 0.1", abs(fit.slope - 0.5) <= 0.1, f"fit {fit}")


# -- 3. error budgets ---------------------------------------------------------------


def failure_rate(algorithm, family, params, trials=1000):
    spec = bench.SweepSpec(algorithm, family, {"n": [params.pop("n")]}, trials=trials,
                           mode="stochastic", seed=99, params=params)
    return 1 - bench.sweep(spec).summary[0].success_rate


def test_3_mst_error():
    rate = failure_rate("mst-array", "connected", {"n": 24, "weighted": True})
    record("3 mst stochastic failure <= 0.30", rate <= 0.30, f"failure {rate:.3f} over 1000")


def test_3_strongconn_matrix_error():
    rate = failure_rate("strongconn-matrix", "sc-digraph", {"n": 24, "m_per_n": 2.0})
    record("3 strongconn-matrix failure <= 0.15", rate <= 0.15, f"failure {rate:.3f} over 1000")


def test_3_strongconn_array_success():
    rate = 1 - failure_rate("strongconn-array", "sc-digraph", {"n": 24, "m_per_n": 2.0})
    record("3 strongconn-array success >= 0.20", rate >= 0.20, f"success {rate:.3f} over 1000")


def test_3_doubling_tree_success():
    from qgraph.qprimitives import CostModel
    hits = 0
    for t in range(1000):
        oracle, _ = instances.make("sc-digraph", model="matrix", n=24, m_per_n=2.0, seed=t)
        tree = reach_tree_doubling(oracle, model=CostModel(mode="stochastic"),
                                   rng=np.random.default_rng(t))
        hits += tree.spanning
    rate = hits / 1000
    record("3 doubling reach tree success >= 2/3", rate >= 2 / 3, f"success {rate:.3f} over 1000")


@pytest.mark.parametrize("k", [1, 2, 3])
def test_3_minfind_budget(k):
    trials, fails = 1000, 0
    for t in range(trials):
        f, g = bench.random_function(512, 8, types="few", seed=t)
        fails += not bench.run_minfind(f, g, 8, mode="stochastic", seed=t, budget_k=k).success
    p = 2.0 ** -k
    bound = p + 3 * math.sqrt(p * (1 - p) / trials)
    rate = fails / trials
    record(f"3 minfind k={k} failure <= 2^-k + 3σ", rate <= bound,
           f"failure {rate:.3f}, bound {bound:.3f}")


# -- 4. structural invariants --------------------------------------------------------


def adversarial_corpus():
    for p in range(2, 7):
        for bits in range(2**p):
            x = [(bits >> i) & 1 for i in range(p)]
            yield gen_parity(x, seed=bits).oracle
            yield gen_parity(x, seed=bits, undirected=True).oracle
    rng = np.random.default_rng(5)
    for i in range(30):
        yield gen_regular_hard(4, 3, rng.integers(0, 2, 4).tolist(), seed=i).oracle
        yield gen_cycle_split(30, (12, 18) if i % 2 else None, seed=i).oracle
        yield gen_star_reduction(rng.integers(1, 9, (6, 3)), seed=i).oracle


def test_4_structural_invariants():
    checked = 0
    graphs = [o for o, _ in corpus("undirected", 100, seed=3)]
    graphs += [o for o, _ in corpus("directed", 100, seed=4)]
    graphs += list(adversarial_corpus())
    for g in graphs:
        n = g.n
        if not g.directed:
            if g.weighted:
                trace = []
                forest = mst_boruvka(g, trace=trace)
                assert forest.rounds <= math.ceil(math.log2(n))
                if len(bfs_components(g).answer) == 1:
                    assert all(after <= math.ceil(before / 2) for _, before, after in trace)
            cover = components_preprocess(as_array(g))
            assert cover.probes == n - cover.k
            assert all(m <= len(c) ** 2 for c, m in zip(cover.components, cover.degree_sums))
        else:
            trace = []
            reach_tree_doubling(as_matrix(g), trace=trace)  # checks the partition at every loop boundary
            assert trace
            reach_tree_stack(g)
            if g.weighted:
                steps = []
                sssp(g, trace=steps)
                for s in steps:
                    sizes = s.get("sizes", [])
                    assert all(a > b for a, b in zip(sizes, sizes[1:]))
                    assert all(x & (x - 1) == 0 for x in sizes)
        checked += 1
    record("4 structural invariants over corpus", True, f"{checked} instances, all invariants held")


# -- 5. adversarial corpus --------------------------------------------------------------


def test_5_parity_exhaustive():
    wrong = total = 0
    for p in range(1, 7):
        for bits in range(2**p):
            x = [(bits >> i) & 1 for i in range(p)]
            if p == 1 and x == [0]:
                continue  # needs self-loops
            d = gen_parity(x, seed=bits)
            u = gen_parity(x, seed=bits, undirected=True)
            for algo, lab in (("strongconn-array", d), ("strongconn-matrix", d),
                              ("connectivity-array", u), ("connectivity-matrix", u)):
                rep = bench.run(algo, lab.oracle, label=lab.label)
                total += 1
                wrong += not rep.success
    record("5 parity p <= 6 exhaustive", wrong == 0, f"{wrong}/{total} misclassified")


def test_5_cycle_split():
    wrong = 0
    for i in range(100):
        lab = gen_cycle_split(60, None if i % 2 else (20 + i % 21, 40 - i % 21), seed=i)
        for algo in ("connectivity-matrix", "connectivity-array"):
            rep = bench.run(algo, lab.oracle, label=lab.label)
            got = len(rep.answer["components"])
            wrong += got != lab.label["components"]
    record("5 cycle-split one vs two at n=60", wrong == 0, f"{wrong}/200 wrong")


def test_5_star_reduction():
    rng = np.random.default_rng(8)
    wrong = 0
    for i in range(100):
        M = rng.integers(1, 20, (int(rng.integers(1, 12)), int(rng.integers(1, 6))))
        lab = gen_star_reduction(M, seed=i)
        forest = mst_boruvka(lab.oracle)
        wrong += forest.total_weight != int(M.min(axis=1).sum())
        wrong += sorted(forest.edges) != sorted(map(tuple, lab.label["mst_edges"]))
    record("5 star-reduction MST == row minima", wrong == 0, f"{wrong} mismatches over 100")


# -- 6. determinism ------------------------------------------------------------------------


def cli(args, cwd, seed="13"):
    env = dict(os.environ, QGRAPH_SEED=seed)
    proc = subprocess.run([sys.executable, "-m", "qgraph", *args], cwd=cwd, env=env,
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


def test_6_cli_determinism(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text('{"algorithm": "strongconn-array", "family": "sc-digraph", '
                    '"grid": {"n": [16, 32]}, "trials": 5, "mode": "stochastic"}')
    outputs = []
    for rep in (1, 2):
        d = tmp_path / str(rep)
        d.mkdir()
        cli(["gen", "connected", "--n", "40", "--weighted", "-o", "g.txt"], d)
        cli(["run", "mst-matrix", "-i", "g.txt", "--mode", "stochastic", "-o", "r.json"], d)
        cli(["sweep", "--spec", str(spec), "-o", "s.csv", "--json", "s.json"], d)
        outputs.append({f: (d / f).read_bytes() for f in ("g.txt", "g.label.json", "r.json",
                                                          "s.csv", "s.json")})
    same = outputs[0] == outputs[1]
    record("6 CLI byte-identical reruns", same, f"{len(outputs[0])} files compared")
