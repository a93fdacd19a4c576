"""Run algorithms on instances, judge them against baselines and fit scaling exponents."""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np
from scipy import stats

from . import baselines, instances
from .graphmodel import ContractViolation, QueryLedger, as_array, as_matrix
from .minfind import find_smallest_of_types, remark_budget
from .qprimitives import CostModel, Mode
from .spanning import Disconnected, bipartite_test, connectivity_array, connectivity_matrix, mst_boruvka
from .sssp import sssp
from .strongconn import NotStronglyConnected, strongconn_array, strongconn_matrix


class ConfigError(ValueError):
    """The instance does not fit the algorithm, or the sweep spec is malformed."""


CSV_COLUMNS = ["instance", "algorithm", "family", "mode", "seed", "n", "m", "d", "trial",
               "charged", "probes", "queries", "baseline_probes", "success", "digest"]


def digest(answer) -> str:
    """First 16 hex digits of the SHA-256 of the canonical JSON answer."""
    text = json.dumps(answer, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class RunReport:
    instance: str
    algorithm: str
    mode: str
    seed: int
    n: int
    m: int
    charged: float
    probes: int
    success: bool
    digest: str
    baseline_probes: int = 0
    family: str = ""
    d: int | None = None
    trial: int | None = None
    wall_time: float = 0.0
    phases: dict = field(default_factory=dict)
    answer: Any = None

    @property
    def queries(self) -> float:
        return self.charged + self.probes

    def row(self, timing: bool = False) -> dict:
        out = {k: getattr(self, k) for k in CSV_COLUMNS}
        out["charged"] = round(self.charged, 6)
        out["queries"] = round(self.queries, 6)
        if timing:
            out["wall_time"] = round(self.wall_time, 6)
        return out

    def to_json(self, timing: bool = False, answer: bool = False) -> dict:
        out = self.row(timing)
        out["phases"] = {k: round(v, 6) for k, v in sorted(self.phases.items())}
        if answer:
            out["answer"] = self.answer
        return out


# -- answers -------------------------------------------------------------------


def _num(x):
    if x is None or (isinstance(x, float) and math.isinf(x)):
        return None
    return int(x) if float(x).is_integer() else float(x)


def _mst_answer(edges, weight) -> dict:
    return {"edges": sorted([int(u), int(v)] for u, v in edges), "weight": _num(weight)}


def _components_answer(comps) -> dict:
    return {"components": sorted(sorted(int(v) for v in c) for c in comps)}


@dataclass(frozen=True)
class Algorithm:
    name: str
    model: str           # "matrix", "array" or "any"
    directed: bool | None
    weighted: bool       # requires weights
    run: Callable
    baseline: Callable   # oracle, v0 -> (answer, probes)
    from_label: Callable | None = None  # label -> answer, when the label decides it


def _run_mst(oracle, model, ledger, rng, v0):
    forest = mst_boruvka(oracle, model=model, ledger=ledger, rng=rng)
    return _mst_answer(forest.edges, forest.total_weight)


def _base_mst(oracle, v0):
    res = baselines.kruskal(oracle)
    return _mst_answer([(u, v) for u, v, _ in res.answer], sum(w for _, _, w in res.answer)), res.probes


def _label_mst(label):
    if "mst_edges" in label:
        return _mst_answer(label["mst_edges"], label["mst_weight"])
    return None


def _conn(fn):
    def run(oracle, model, ledger, rng, v0):
        try:
            forest = fn(oracle, model=model, ledger=ledger, rng=rng)
            return _components_answer(forest.components())
        except Disconnected as exc:
            return _components_answer(exc.components)
    return run


def _base_conn(oracle, v0):
    res = baselines.bfs_components(oracle)
    return _components_answer(res.answer), res.probes


def _sc(fn, **kw):
    def run(oracle, model, ledger, rng, v0):
        try:
            fn(oracle, v0, model=model, ledger=ledger, rng=rng, **kw)
            return {"strongly_connected": True}
        except NotStronglyConnected:
            return {"strongly_connected": False}
    return run


def _base_sc(oracle, v0):
    res = baselines.scc(oracle)
    return {"strongly_connected": len(res.answer) == 1}, res.probes


def _label_sc(label):
    if "strongly_connected" in label:
        return {"strongly_connected": bool(label["strongly_connected"])}
    return None


def _run_sssp(oracle, model, ledger, rng, v0):
    tree = sssp(oracle, v0, model=model, ledger=ledger, rng=rng)
    return {"dist": [_num(x) for x in tree.dist]}


def _base_sssp(oracle, v0):
    res = baselines.dijkstra(oracle, v0)
    return {"dist": [_num(x) for x in res.answer]}, res.probes


def _run_bip(oracle, model, ledger, rng, v0):
    return {"bipartite": bipartite_test(oracle, model=model, ledger=ledger, rng=rng).bipartite}


def _base_bip(oracle, v0):
    res = baselines.two_colorable(oracle)
    return {"bipartite": res.answer}, res.probes


ALGORITHMS: dict[str, Algorithm] = {a.name: a for a in [
    Algorithm("mst-matrix", "matrix", False, True, _run_mst, _base_mst, _label_mst),
    Algorithm("mst-array", "array", False, True, _run_mst, _base_mst, _label_mst),
    Algorithm("connectivity-matrix", "matrix", False, False, _conn(connectivity_matrix), _base_conn, None),
    Algorithm("connectivity-array", "array", False, False, _conn(connectivity_array), _base_conn, None),
    Algorithm("strongconn-matrix", "matrix", True, False, _sc(strongconn_matrix), _base_sc, _label_sc),
    Algorithm("strongconn-doubling", "matrix", True, False, _sc(strongconn_matrix, method="doubling"),
              _base_sc, _label_sc),
    Algorithm("strongconn-array", "array", True, False, _sc(strongconn_array), _base_sc, _label_sc),
    Algorithm("sssp-matrix", "matrix", None, True, _run_sssp, _base_sssp, None),
    Algorithm("sssp-array", "array", None, True, _run_sssp, _base_sssp, None),
    Algorithm("bipartite-matrix", "matrix", False, False, _run_bip, _base_bip, None),
    Algorithm("bipartite-array", "array", False, False, _run_bip, _base_bip, None),
]}
ALGORITHM_NAMES = sorted(ALGORITHMS) + ["minfind"]


def cost_model(mode: str = "exact", seed: int = 0, **overrides) -> CostModel:
    return CostModel(mode=Mode(mode), seed=seed, **{k: float(v) for k, v in overrides.items()})


def _prepare(alg: Algorithm, oracle):
    if alg.directed is not None and oracle.directed != alg.directed:
        kind = "directed" if alg.directed else "undirected"
        raise ConfigError(f"{alg.name} needs a {kind} graph")
    if alg.weighted and not oracle.weighted:
        raise ConfigError(f"{alg.name} needs a weighted graph")
    if alg.model == "matrix":
        return as_matrix(oracle)
    if alg.model == "array":
        return as_array(oracle)
    return oracle


def run(algorithm: str, oracle, *, mode: str = "exact", seed: int = 0, cost: dict | None = None,
        label: dict | None = None, instance: str = "", v0: int | None = None) -> RunReport:
    """Run one algorithm on one graph instance and judge its answer.

    The answer is compared with the generator label when the label decides
    it, otherwise with the classical baseline.
    """
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHM_NAMES)}")
    alg = ALGORITHMS[algorithm]
    oracle = _prepare(alg, oracle)
    label = label or {}
    if v0 is None:
        v0 = int(label.get("v0", 0))
    model = cost_model(mode, seed, **(cost or {}))
    ledger = QueryLedger()
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    try:
        answer = alg.run(oracle, model, ledger, rng, v0)
    except ContractViolation as exc:
        raise ConfigError(str(exc)) from exc
    wall = time.perf_counter() - start
    expected = alg.from_label(label) if alg.from_label else None
    base_probes = 0
    if expected is None:
        expected, base_probes = alg.baseline(oracle, v0)
    return RunReport(instance=instance, algorithm=algorithm, mode=model.mode.value, seed=seed,
                     n=oracle.n, m=oracle.m, charged=ledger.charged, probes=ledger.probes,
                     success=answer == expected, digest=digest(answer),
                     baseline_probes=base_probes, family=str(label.get("family", "")),
                     wall_time=wall, phases=dict(ledger.phases), answer=answer)


def typed_minima(f, g, d: int) -> list[int]:
    """Brute force: indices of the ``d`` smallest per-type minima under (value, index)."""
    best: dict = {}
    for i in sorted(range(len(f)), key=lambda i: (f[i], i)):
        best.setdefault(g[i].item() if hasattr(g[i], "item") else g[i], i)
    return sorted(best.values(), key=lambda i: (f[i], i))[:d]


def run_minfind(f, g, d: int, *, mode: str = "exact", seed: int = 0, cost: dict | None = None,
                budget_k: float | None = None, instance: str = "") -> RunReport:
    """Typed minima search on explicit arrays, judged by brute force.

    ``budget_k`` interrupts the search after ``k`` times the base budget.
    """
    f, g = np.asarray(f, dtype=float), np.asarray(g)
    N = len(f)
    model = cost_model(mode, seed, **(cost or {}))
    ledger = QueryLedger()
    budget = None if budget_k is None else remark_budget(d, N, budget_k, model)
    start = time.perf_counter()
    sel = find_smallest_of_types(f, g, N, d, budget=budget, model=model, ledger=ledger,
                                 rng=np.random.default_rng(seed))
    wall = time.perf_counter() - start
    got = sel.indices()
    expected = typed_minima(f, g, d)
    return RunReport(instance=instance, algorithm="minfind", mode=model.mode.value, seed=seed,
                     n=N, m=N, d=d, charged=ledger.charged, probes=ledger.probes,
                     success=got == expected, digest=digest(got), family="function",
                     wall_time=wall, answer=got)


def random_function(N: int, d: int, *, types: str = "identity", seed=None):
    """Random values with types: ``identity`` (d smallest), ``few`` (d types) or ``many`` (N/4)."""
    rng = np.random.default_rng(seed)
    f = rng.random(N)
    if types == "identity":
        g = np.arange(N)
    elif types == "few":
        g = rng.integers(0, max(d, 1), N)
    elif types == "many":
        g = rng.integers(0, max(N // 4, 1), N)
    else:
        raise ConfigError(f"unknown type rule {types!r}")
    return f, g


# -- sweeps --------------------------------------------------------------------


@dataclass
class SweepSpec:
    """A grid of instance parameters, each point run ``trials`` times.

    ``grid`` maps parameter names (``n``, ``N``, ``d``, ``m_per_n``...) to
    value lists; the points are their cartesian product in key order.
    ``params`` holds fixed family parameters.
    """

    algorithm: str
    family: str
    grid: dict
    trials: int = 10
    mode: str = "exact"
    cost: dict = field(default_factory=dict)
    seed: int = 0
    params: dict = field(default_factory=dict)
    check: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not self.grid or any(not isinstance(v, list) or not v for v in self.grid.values()):
            raise ConfigError("grid must map parameter names to nonempty lists")
        Mode(self.mode)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown sweep fields: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "SweepSpec":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def points(self) -> list[dict]:
        keys = list(self.grid)
        return [dict(zip(keys, vals)) for vals in itertools.product(*(self.grid[k] for k in keys))]


def trial_seeds(seed: int, point: int, trial: int) -> tuple[int, int]:
    """Independent (instance, algorithm) seeds for one trial."""
    a, b = np.random.SeedSequence([seed, point, trial]).generate_state(2)
    return int(a), int(b)


def _model_of(algorithm: str) -> str:
    return "matrix" if algorithm.endswith("matrix") or algorithm == "strongconn-doubling" else "array"


def _run_trial(spec: SweepSpec, p: int, point: dict, trial: int) -> RunReport:
    inst_seed, alg_seed = trial_seeds(spec.seed, p, trial)
    params = {**spec.params, **point}
    iid = f"{spec.family}-p{p}-t{trial}"
    if spec.algorithm == "minfind":
        N, d = int(params["N"]), int(params["d"])
        f, g = random_function(N, d, types=params.get("types", "identity"), seed=inst_seed)
        rep = run_minfind(f, g, d, mode=spec.mode, seed=alg_seed, cost=spec.cost,
                          budget_k=params.get("budget_k"), instance=iid)
    else:
        oracle, label = instances.make(spec.family, model=_model_of(spec.algorithm), seed=inst_seed,
                                       **params)
        if spec.check:
            rep = run(spec.algorithm, oracle, mode=spec.mode, seed=alg_seed, cost=spec.cost,
                      label=label, instance=iid)
        else:
            rep = _run_unchecked(spec, oracle, label, alg_seed, iid)
    rep.family = spec.family
    rep.trial = trial
    rep.answer = None
    return rep


def _run_unchecked(spec, oracle, label, seed, iid) -> RunReport:
    """Charges only, for large scaling sweeps; ``success`` stays ``None``."""
    alg = ALGORITHMS[spec.algorithm]
    oracle = _prepare(alg, oracle)
    model = cost_model(spec.mode, seed, **spec.cost)
    ledger = QueryLedger()
    start = time.perf_counter()
    answer = alg.run(oracle, model, ledger, np.random.default_rng(seed), int(label.get("v0", 0)))
    return RunReport(instance=iid, algorithm=spec.algorithm, mode=model.mode.value, seed=seed,
                     n=oracle.n, m=oracle.m, charged=ledger.charged, probes=ledger.probes,
                     success=None, digest=digest(answer), wall_time=time.perf_counter() - start,
                     phases=dict(ledger.phases))


def _run_point(args) -> list[RunReport]:
    spec, p, point = args
    return [_run_trial(spec, p, point, t) for t in range(spec.trials)]


@dataclass
class PointSummary:
    point: dict
    trials: int
    mean: float
    median: float
    std: float
    ci_low: float
    ci_high: float
    success_rate: float | None


@dataclass
class SweepResult:
    spec: SweepSpec
    reports: list[RunReport]
    summary: list[PointSummary]

    def csv(self, timing: bool = False) -> str:
        return reports_csv(self.reports, timing)

    def json(self, timing: bool = False) -> str:
        data = {"spec": asdict(self.spec),
                "summary": [asdict(s) for s in self.summary],
                "reports": [r.to_json(timing) for r in self.reports]}
        return json.dumps(data, indent=1, sort_keys=True) + "\n"

    def points(self, key: str = "n", y: str = "charged") -> list[tuple[float, float]]:
        """``(point[key], mean of y)`` per grid point; y is ``charged`` or ``queries``."""
        if y == "charged":
            return [(s.point[key], s.mean) for s in self.summary]
        k = self.spec.trials
        return [(s.point[key], float(np.mean([getattr(r, y) for r in self.reports[i * k:(i + 1) * k]])))
                for i, s in enumerate(self.summary)]


def summarize(point: dict, reports: list[RunReport]) -> PointSummary:
    """Mean/median charge with a normal-approximation 95% interval."""
    ys = np.array([r.charged for r in reports])
    mean = float(ys.mean())
    std = float(ys.std(ddof=1)) if len(ys) > 1 else 0.0
    half = 1.96 * std / math.sqrt(len(ys))
    judged = [r.success for r in reports if r.success is not None]
    rate = sum(judged) / len(judged) if judged else None
    return PointSummary(point, len(ys), round(mean, 6), round(float(np.median(ys)), 6),
                        round(std, 6), round(mean - half, 6), round(mean + half, 6), rate)


def sweep(spec: SweepSpec, *, jobs: int = 1) -> SweepResult:
    """Run every grid point; output order is (point, trial) whatever ``jobs`` is."""
    if spec.algorithm not in ALGORITHM_NAMES:
        raise ConfigError(f"unknown algorithm {spec.algorithm!r}")
    points = spec.points()
    tasks = [(spec, p, point) for p, point in enumerate(points)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_point = list(pool.map(_run_point, tasks))
    else:
        per_point = [_run_point(t) for t in tasks]
    reports = [r for group in per_point for r in group]
    summary = [summarize(point, group) for point, group in zip(points, per_point)]
    return SweepResult(spec, reports, summary)


def reports_csv(reports: list[RunReport], timing: bool = False) -> str:
    cols = CSV_COLUMNS + (["wall_time"] if timing else [])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        writer.writerow(r.row(timing))
    return buf.getvalue()


# -- fitting -------------------------------------------------------------------


@dataclass(frozen=True)
class Fit:
    slope: float
    stderr: float
    intercept: float

    def __str__(self) -> str:
        return f"{self.slope:.3f} ± {self.stderr:.3f}"


def fit_exponent(points, log_power: float = 0.0) -> Fit:
    """Least-squares slope of log y against log n after dividing y by (log2 n)^log_power."""
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 2:
        raise ValueError("need at least two points")
    if len({x for x, _ in pts}) < 2:
        raise ValueError("need at least two distinct x values")
    if any(x <= 1 or y <= 0 for x, y in pts) and log_power:
        raise ValueError("log normalisation needs x > 1 and y > 0")
    if any(x <= 0 or y <= 0 for x, y in pts):
        raise ValueError("data must be positive")
    xs = np.log([x for x, _ in pts])
    ys = np.log([y / math.log2(x) ** log_power for x, y in pts])
    res = stats.linregress(xs, ys)
    stderr = 0.0 if len(pts) == 2 else float(res.stderr)
    return Fit(float(res.slope), stderr, float(res.intercept))


def verify(algorithm: str, oracle, *, label: dict | None = None, **kw) -> tuple[RunReport, dict]:
    """Run and diff the answer against the baseline and, when it decides, the label.

    Returns the report and a map ``source -> matches`` for each reference.
    """
    rep = run(algorithm, oracle, label=label, **kw)
    alg = ALGORITHMS[algorithm]
    prepared = _prepare(alg, oracle)
    v0 = kw.get("v0")
    if v0 is None:
        v0 = int((label or {}).get("v0", 0))
    checks = {"baseline": alg.baseline(prepared, v0)[0] == rep.answer}
    expected = alg.from_label(label or {}) if alg.from_label else None
    if expected is not None:
        checks["label"] = expected == rep.answer
    return rep, checks
