"""Fit query-count exponents for every algorithm at desk scale.

    python scripts/scaling_table.py --trials 30 --csv scaling.csv
"""

import argparse

from qgraph import bench

ROWS = [
    # algorithm, family, params, log power, expected slope
    ("connectivity-matrix", "connected", {"m_per_n": 2.0}, 0.0, 1.5),
    ("connectivity-array", "connected", {"m_per_n": 2.0}, 0.0, 1.0),
    ("mst-matrix", "connected", {"m_per_n": 2.0, "weighted": True}, 0.0, 1.5),
    ("mst-array", "connected", {"m_per_n": 2.0, "weighted": True}, 0.0, 1.0),
    ("strongconn-matrix", "sc-digraph", {"m_per_n": 4.0}, 0.5, 1.5),
    ("strongconn-array", "sc-digraph", {"m_per_n": 4.0}, 0.5, 1.0),
    ("sssp-matrix", "sc-digraph", {"m_per_n": 4.0, "weighted": True}, 1.5, 1.5),
    ("sssp-array", "sc-digraph", {"m_per_n": 4.0, "weighted": True}, 1.5, 1.0),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 512])
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--csv", help="write every report here")
    args = ap.parse_args()
    reports = []
    print(f"{'algorithm':<22} {'normaliser':<11} {'expected':>8} {'fit':>16}")
    for algo, family, params, power, expected in ROWS:
        spec = bench.SweepSpec(algo, family, {"n": args.sizes}, trials=args.trials,
                               seed=args.seed, params=params, check=False)
        res = bench.sweep(spec)
        reports += res.reports
        fit = bench.fit_exponent(res.points(y="queries"), log_power=power)
        norm = f"log^{power}" if power else "-"
        print(f"{algo:<22} {norm:<11} {expected:>8.2f} {str(fit):>16}", flush=True)
    for axis, grid in (("d", {"N": [4096], "d": [8, 16, 32, 64, 128]}),
                       ("N", {"N": [512, 1024, 2048, 4096, 8192], "d": [8]})):
        res = bench.sweep(bench.SweepSpec("minfind", "function", grid, trials=args.trials,
                                          seed=args.seed))
        reports += res.reports
        fit = bench.fit_exponent(res.points(axis, y="queries"))
        print(f"{'minfind (' + axis + ')':<22} {'-':<11} {0.5:>8.2f} {str(fit):>16}")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(bench.reports_csv(reports))


if __name__ == "__main__":
    main()
