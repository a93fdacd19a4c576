"""Stochastic-mode failure rates of the bounded-error algorithms.

    python scripts/error_budgets.py --trials 1000 --n 24
"""

import argparse
import math

from qgraph import bench


def rate(algorithm, family, n, trials, seed, **params):
    spec = bench.SweepSpec(algorithm, family, {"n": [n]}, trials=trials, mode="stochastic",
                           seed=seed, params=params)
    return 1 - bench.sweep(spec).summary[0].success_rate


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--n", type=int, default=24)
    ap.add_argument("--seed", type=int, default=99)
    args = ap.parse_args()
    t, n, s = args.trials, args.n, args.seed
    print(f"{'algorithm':<30} {'failure':>8} {'limit':>8}")
    for algo, fam, params, limit in (
            ("mst-array", "connected", {"weighted": True}, 0.30),
            ("mst-matrix", "connected", {"weighted": True}, 0.30),
            ("strongconn-matrix", "sc-digraph", {"m_per_n": 2.0}, 0.15),
            ("strongconn-doubling", "sc-digraph", {"m_per_n": 2.0}, None),
            ("strongconn-array", "sc-digraph", {"m_per_n": 2.0}, 0.80),
            ("sssp-array", "sc-digraph", {"weighted": True}, None)):
        r = rate(algo, fam, n, t, s, **params)
        print(f"{algo:<30} {r:>8.3f} {'' if limit is None else f'{limit:.2f}':>8}", flush=True)
    for k in (1, 2, 3):
        fails = 0
        for i in range(t):
            f, g = bench.random_function(512, 8, types="few", seed=i)
            fails += not bench.run_minfind(f, g, 8, mode="stochastic", seed=i, budget_k=k).success
        p = 2.0 ** -k
        limit = p + 3 * math.sqrt(p * (1 - p) / t)
        print(f"{'minfind budget k=' + str(k):<30} {fails / t:>8.3f} {limit:>8.3f}")


if __name__ == "__main__":
    main()
