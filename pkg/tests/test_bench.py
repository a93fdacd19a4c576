import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qgraph import bench, cli, instances
from qgraph.adversarial import gen_star_reduction
from qgraph.graphmodel import ArrayOracle, MatrixOracle


def path(n, **kw):
    return MatrixOracle.from_edges(n, [(i, i + 1) for i in range(n - 1)], directed=False, **kw)


def test_run_path_success():
    rep = bench.run("connectivity-matrix", path(8))
    assert rep.success
    assert rep.answer == {"components": [list(range(8))]}
    assert rep.queries == rep.charged + rep.probes


def test_run_same_seed_identical():
    g, _ = instances.make("connected", n=30, weighted=True, seed=2)
    a = bench.run("mst-array", g, seed=5)
    b = bench.run("mst-array", g, seed=5)
    a.wall_time = b.wall_time = 0
    assert a == b


def test_run_star_reduction_digest():
    rng = np.random.default_rng(3)
    M = rng.integers(1, 6, (7, 3))
    lab = gen_star_reduction(M, seed=11)
    rep = bench.run("mst-array", lab.oracle, label=lab.label)
    # row-minimum oracle computed here from M and the vertex permutation
    perm = np.random.default_rng(11).permutation(1 + 3 + 7)
    s, v, u = perm[0], perm[1:4], perm[4:]
    edges = [sorted((int(s), int(x))) for x in v]
    for j in range(7):
        i = min(range(3), key=lambda i: (M[j, i], min(v[i], u[j]), max(v[i], u[j])))
        edges.append(sorted((int(v[i]), int(u[j]))))
    oracle_answer = {"edges": sorted(edges), "weight": int(M.min(axis=1).sum())}
    assert rep.success
    assert rep.digest == bench.digest(oracle_answer)


def test_run_judges_against_label():
    g = ArrayOracle.from_edges(3, [(0, 1), (1, 2), (2, 0)], directed=True)
    assert bench.run("strongconn-array", g, label={"strongly_connected": True}).success
    assert not bench.run("strongconn-array", g, label={"strongly_connected": False}).success


def test_run_config_errors():
    with pytest.raises(bench.ConfigError):
        bench.run("sssp-array", ArrayOracle.from_edges(2, [(0, 1)], directed=True))
    with pytest.raises(bench.ConfigError):
        bench.run("strongconn-matrix", path(4))
    with pytest.raises(bench.ConfigError):
        bench.run("nope", path(4))


def test_run_minfind():
    f, g = bench.random_function(100, 5, types="few", seed=1)
    rep = bench.run_minfind(f, g, 5, seed=2)
    assert rep.success and rep.d == 5


def test_typed_minima_brute():
    assert bench.typed_minima([3, 1, 2, 0], np.array([0, 0, 1, 1]), 5) == [3, 1]


def small_spec(**kw):
    base = dict(algorithm="connectivity-array", family="connected", grid={"n": [16, 24, 32]},
                trials=10, seed=4)
    base.update(kw)
    return bench.SweepSpec(**base)


def test_sweep_counts_and_summary():
    res = bench.sweep(small_spec())
    assert len(res.reports) == 30
    for s in res.summary:
        rows = [r.charged for r in res.reports if r.n == s.point["n"]]
        assert s.mean == pytest.approx(np.mean(rows), abs=1e-6)
        assert s.median == pytest.approx(np.median(rows), abs=1e-6)
        assert s.ci_low <= s.mean <= s.ci_high
        assert s.success_rate == 1.0


def test_sweep_monotone_connectivity_array():
    res = bench.sweep(small_spec(grid={"n": [64, 128, 256, 512]}, params={"m_per_n": 1.0}))
    means = [s.mean for s in res.summary]
    assert means == sorted(means)


def test_sweep_deterministic_and_parallel():
    a = bench.sweep(small_spec(trials=3))
    b = bench.sweep(small_spec(trials=3), jobs=2)
    assert a.csv() == b.csv()
    assert a.json() == bench.sweep(small_spec(trials=3)).json()
    assert "wall_time" not in a.csv() and "wall_time" in a.csv(timing=True)


def test_sweep_spec_validation():
    with pytest.raises(bench.ConfigError):
        small_spec(trials=0)
    with pytest.raises(bench.ConfigError):
        small_spec(grid={})
    with pytest.raises(bench.ConfigError):
        bench.SweepSpec.from_dict({"algorithm": "mst-array", "family": "connected",
                                   "grid": {"n": [4]}, "colour": 1})


def test_sweep_minfind_points():
    spec = bench.SweepSpec("minfind", "function", {"N": [64, 128], "d": [2, 4]}, trials=2)
    res = bench.sweep(spec)
    assert [s.point for s in res.summary] == [{"N": 64, "d": 2}, {"N": 64, "d": 4},
                                              {"N": 128, "d": 2}, {"N": 128, "d": 4}]
    assert all(r.success for r in res.reports)


def test_fit_exact_power():
    xs = [64, 128, 256, 512]
    fit = bench.fit_exponent([(x, x ** 1.5) for x in xs])
    assert str(fit) == "1.500 ± 0.000"
    assert bench.fit_exponent([(x, 7 * x) for x in xs]).slope == pytest.approx(1.0)


def test_fit_log_normaliser():
    xs = [64, 128, 256, 512]
    fit = bench.fit_exponent([(x, x * np.log2(x) ** 1.5) for x in xs], log_power=1.5)
    assert fit.slope == pytest.approx(1.0)


def test_fit_errors():
    with pytest.raises(ValueError):
        bench.fit_exponent([(4, 1)])
    with pytest.raises(ValueError):
        bench.fit_exponent([(4, 1), (8, 0)])
    with pytest.raises(ValueError):
        bench.fit_exponent([(4, 1), (4, 2)])


@given(st.floats(-2, 3), st.floats(0.01, 100), st.lists(st.integers(2, 5000), min_size=2, max_size=8, unique=True))
def test_fit_recovers_planted(a, c, xs):
    fit = bench.fit_exponent([(x, c * x ** a) for x in xs])
    assert round(fit.slope, 3) == round(a, 3)


# -- command line --------------------------------------------------------------


def call(args, env=None, cwd=None):
    return subprocess.run([sys.executable, "-m", "qgraph", *args], capture_output=True, text=True,
                          env=env, cwd=cwd)


def test_cli_gen_writes_sidecar(tmp_path):
    out = tmp_path / "p.txt"
    assert cli.main(["gen", "parity", "--x", "101", "--seed", "3", "-o", str(out)]) == 0
    label = json.loads((tmp_path / "p.label.json").read_text())
    assert label["cycles"] == 2 and label["family"] == "parity"
    assert out.read_text().startswith("6 6 directed unweighted")


@pytest.mark.parametrize("family,algo,extra", [
    ("connected", "mst-matrix", ["--weighted", "--n", "20"]),
    ("gnp", "connectivity-array", ["--n", "30", "--edge-prob", "0.05"]),
    ("regular-hard", "strongconn-array", ["--p", "4", "--k", "3", "--bits", "1101"]),
    ("cycle-split", "connectivity-matrix", ["--n", "12", "--split", "5,7"]),
    ("star-reduction", "mst-array", ["--rows", "5", "--cols", "3"]),
    ("sc-digraph", "sssp-array", ["--n", "25", "--weighted"]),
    ("function", "minfind", ["--N", "200", "--d", "6", "--types", "many"]),
    ("minima-matrix", "minfind", ["--d", "5", "--k", "4"]),
])
def test_cli_verify_ok(tmp_path, family, algo, extra):
    out = str(tmp_path / "inst.txt")
    assert cli.main(["gen", family, "-o", out, "--seed", "7", *extra]) == 0
    assert cli.main(["verify", algo, "-i", out]) == 0


def test_cli_verify_mismatch_exit_code(tmp_path, capsys):
    out = tmp_path / "g.txt"
    cli.main(["gen", "parity", "--x", "0110", "-o", str(out)])
    side = tmp_path / "g.label.json"
    label = json.loads(side.read_text())
    label["strongly_connected"] = not label["strongly_connected"]
    side.write_text(json.dumps(label))
    assert cli.main(["verify", "strongconn-matrix", "-i", str(out)]) == 2
    assert "MISMATCH" in capsys.readouterr().out
    proc = call(["verify", "strongconn-matrix", "-i", str(out)])
    assert proc.returncode == 2


def test_cli_config_error(tmp_path):
    out = str(tmp_path / "g.txt")
    cli.main(["gen", "connected", "--n", "8", "-o", out])
    assert cli.main(["run", "sssp-array", "-i", out]) == 1


def test_cli_seed_env(tmp_path):
    import os
    env = dict(os.environ, QGRAPH_SEED="41")
    a = call(["gen", "connected", "--n", "12", "-o", "a.txt"], env=env, cwd=tmp_path)
    b = call(["gen", "connected", "--n", "12", "-o", "b.txt", "--seed", "41"], cwd=tmp_path)
    assert a.returncode == b.returncode == 0
    assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()
    assert json.loads((tmp_path / "a.label.json").read_text())["seed"] == 41


def test_cli_run_and_sweep_deterministic(tmp_path):
    inst = str(tmp_path / "g.txt")
    cli.main(["gen", "connected", "--n", "24", "--weighted", "-o", inst])
    for i in (1, 2):
        cli.main(["run", "mst-array", "-i", inst, "--mode", "stochastic", "--seed", "9",
                  "--c1", "1.2", "-o", str(tmp_path / f"r{i}.json")])
    assert (tmp_path / "r1.json").read_bytes() == (tmp_path / "r2.json").read_bytes()
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"algorithm": "mst-array", "family": "connected",
                                "grid": {"n": [10, 20]}, "trials": 2,
                                "params": {"weighted": True}}))
    for i in (1, 2):
        assert cli.main(["sweep", "--spec", str(spec), "-o", str(tmp_path / f"s{i}.csv"),
                         "--json", str(tmp_path / f"s{i}.json")]) == 0
    assert (tmp_path / "s1.csv").read_bytes() == (tmp_path / "s2.csv").read_bytes()
    assert (tmp_path / "s1.json").read_bytes() == (tmp_path / "s2.json").read_bytes()
    assert cli.main(["fit", "-i", str(tmp_path / "s1.csv")]) == 0
