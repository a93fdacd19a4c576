"""Command line: ``qgraph gen|run|verify|sweep|fit``.

The default seed comes from ``QGRAPH_SEED`` (0 when unset).  ``verify``
exits with status 2 when the answer differs from a reference.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bench, instances
from .adversarial import gen_minima_matrix
from .graphmodel import load, save

SEED_ENV = "QGRAPH_SEED"
EXIT_MISMATCH = 2
GRAPH_FAMILIES = ["connected", "gnp", "digraph", "sc-digraph", "path", "cycle-split", "parity",
                  "regular-hard", "star-reduction"]
FUNCTION_FAMILIES = ["function", "minima-matrix"]


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def label_path(path) -> Path:
    """Sidecar label file: ``g.txt`` -> ``g.label.json``."""
    return Path(path).with_suffix(".label.json")


def _bits(text: str) -> list[int]:
    return [int(c) for c in text.strip()]


def _write_json(data, path: str | None) -> None:
    text = json.dumps(data, indent=1, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    seed = args.seed
    out = Path(args.output)
    if args.family in FUNCTION_FAMILIES:
        if args.family == "minima-matrix":
            inst = gen_minima_matrix(args.d, args.k, seed=seed)
            body = {"f": inst.f.tolist(), "g": inst.g.tolist(), "d": inst.d}
            label = {"family": "minima_matrix", "d": inst.d, "k": inst.k, "zeros": inst.zeros,
                     "class": inst.family, "zero_positions": inst.zero_positions, "seed": seed}
        else:
            f, g = bench.random_function(args.N, args.d, types=args.types, seed=seed)
            body = {"f": f.tolist(), "g": g.tolist(), "d": args.d}
            label = {"family": "function", "N": args.N, "d": args.d, "types": args.types, "seed": seed}
        label["typed_minima"] = bench.typed_minima(body["f"], np.asarray(body["g"]), body["d"])
        out.write_text(json.dumps(body, sort_keys=True) + "\n")
    else:
        params = {"n": args.n, "weighted": args.weighted, "m_per_n": args.m_per_n, "p": args.p,
                  "directed": args.directed, "undirected": args.undirected}
        if args.family == "gnp":
            params["p"] = args.edge_prob
        if args.split:
            params["split"] = [int(x) for x in args.split.split(",")]
        if args.x:
            params["x"] = _bits(args.x)
        if args.bits:
            params["bits"] = _bits(args.bits)
        if args.family == "regular-hard":
            params["k"] = args.k
        if args.family == "star-reduction":
            params.update(rows=args.rows, cols=args.cols)
        params = {k: v for k, v in params.items() if v is not None}
        oracle, label = instances.make(args.family, seed=seed, **params)
        save(oracle, out)
    _write_json(label, str(label_path(out)))
    return 0


def _load_label(args) -> dict:
    path = Path(args.label) if args.label else label_path(args.input)
    return json.loads(path.read_text()) if path.exists() else {}


def _cost(args) -> dict:
    return {k: getattr(args, k) for k in ("c1", "c2", "p2", "c3") if getattr(args, k) is not None}


def _run(args, check: bool):
    label = _load_label(args)
    kw = dict(mode=args.mode, seed=args.seed, cost=_cost(args), instance=Path(args.input).name)
    if args.algorithm == "minfind":
        body = json.loads(Path(args.input).read_text())
        rep = bench.run_minfind(body["f"], body["g"], body["d"], budget_k=args.budget_k, **kw)
        checks = {"baseline": rep.success}
        if "typed_minima" in label:
            checks["label"] = label["typed_minima"] == rep.answer
        return rep, checks
    oracle = load(args.input)
    if check:
        return bench.verify(args.algorithm, oracle, label=label, v0=args.v0, **kw)
    return bench.run(args.algorithm, oracle, label=label, v0=args.v0, **kw), None


def cmd_run(args) -> int:
    rep, _ = _run(args, check=False)
    _write_json(rep.to_json(timing=args.timing, answer=True), args.output)
    return 0


def cmd_verify(args) -> int:
    rep, checks = _run(args, check=True)
    ok = all(checks.values())
    for source, match in sorted(checks.items()):
        print(f"{source}: {'match' if match else 'MISMATCH'}")
    print(f"{args.algorithm} {'OK' if ok else 'FAILED'} digest={rep.digest}")
    return 0 if ok else EXIT_MISMATCH


def cmd_sweep(args) -> int:
    spec = bench.SweepSpec.load(args.spec)
    if args.seed is not None:
        spec.seed = args.seed
    result = bench.sweep(spec, jobs=args.jobs)
    Path(args.output).write_text(result.csv(timing=args.timing))
    if args.json:
        Path(args.json).write_text(result.json(timing=args.timing))
    for s in result.summary:
        rate = "" if s.success_rate is None else f" success={s.success_rate:.3f}"
        print(f"{json.dumps(s.point, sort_keys=True)} mean={s.mean:.1f} "
              f"ci=[{s.ci_low:.1f}, {s.ci_high:.1f}]{rate}")
    return 0


def cmd_fit(args) -> int:
    with open(args.input, newline="") as fh:
        rows = list(csv.DictReader(fh))
    groups: dict[float, list[float]] = {}
    for r in rows:
        groups.setdefault(float(r[args.x]), []).append(float(r[args.y]))
    points = [(x, float(np.mean(ys))) for x, ys in sorted(groups.items())]
    print(f"slope {bench.fit_exponent(points, args.log_power)}")
    return 0


def _cost_args(p) -> None:
    p.add_argument("--mode", choices=["exact", "stochastic"], default="exact")
    p.add_argument("--seed", type=int, default=default_seed())
    for name in ("c1", "c2", "p2", "c3"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--v0", type=int, help="source vertex (default: label v0 or 0)")
    p.add_argument("--budget-k", type=float, help="minfind budget multiplier")
    p.add_argument("--label", help="label file (default: the sidecar next to the instance)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qgraph", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance and its label sidecar")
    g.add_argument("family", choices=GRAPH_FAMILIES + FUNCTION_FAMILIES)
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--seed", type=int, default=default_seed())
    g.add_argument("--n", type=int, default=16)
    g.add_argument("--m-per-n", type=float)
    g.add_argument("--edge-prob", type=float, default=0.1, help="gnp edge probability")
    g.add_argument("--weighted", action="store_true")
    g.add_argument("--directed", action="store_true", help="path family only")
    g.add_argument("--undirected", action="store_true", help="parity family only")
    g.add_argument("--p", type=int, help="parity/regular-hard size")
    g.add_argument("--k", type=int, default=4, help="regular-hard out-degree or minima-matrix columns")
    g.add_argument("--x", help="parity bits, e.g. 0110")
    g.add_argument("--bits", help="regular-hard crossing bits")
    g.add_argument("--split", help="cycle-split lengths a,b")
    g.add_argument("--rows", type=int, default=8)
    g.add_argument("--cols", type=int, default=4)
    g.add_argument("--N", type=int, default=256)
    g.add_argument("--d", type=int, default=5)
    g.add_argument("--types", default="identity", choices=["identity", "few", "many"])
    g.set_defaults(func=cmd_gen)

    for name, func, helptext in (("run", cmd_run, "run an algorithm and print its report"),
                                 ("verify", cmd_verify, "run and diff against the references")):
        r = sub.add_parser(name, help=helptext)
        r.add_argument("algorithm", choices=bench.ALGORITHM_NAMES)
        r.add_argument("-i", "--input", required=True)
        _cost_args(r)
        if name == "run":
            r.add_argument("-o", "--output")
            r.add_argument("--timing", action="store_true")
        r.set_defaults(func=func)

    s = sub.add_parser("sweep", help="run a sweep spec and write CSV")
    s.add_argument("--spec", required=True)
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--json")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--seed", type=int, help="override the sweep spec seed")
    s.add_argument("--timing", action="store_true", help="add wall_time (not reproducible)")
    s.set_defaults(func=cmd_sweep)

    f = sub.add_parser("fit", help="fit a log-log slope to a sweep CSV")
    f.add_argument("-i", "--input", required=True)
    f.add_argument("--x", default="n")
    f.add_argument("--y", default="queries")
    f.add_argument("--log-power", type=float, default=0.0)
    f.set_defaults(func=cmd_fit)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (bench.ConfigError, ValueError, OSError) as exc:
        print(f"qgraph: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
