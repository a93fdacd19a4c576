"""Measure mean charge / sqrt(d N) of the typed minima search (c1 = 1).

The largest observed ratio is the value frozen as ``minfind.MEAN_CONSTANT``.

    python scripts/calibrate_minfind.py --trials 40
"""

import argparse

import numpy as np

from qgraph.graphmodel import QueryLedger
from qgraph.minfind import find_smallest_of_types
from qgraph.qprimitives import CostModel


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    model = CostModel(c1=1.0)
    worst = 0.0
    print(f"{'N':>7} {'d':>6} {'types':>8} {'ratio':>7}")
    for N in (256, 1024, 4096, 16384):
        for d in (1, 4, 16, 64, 256, 1024):
            if d > N // 2:
                continue
            for types in ("identity", "few", "many"):
                ratios = []
                for _ in range(args.trials):
                    f = rng.random(N)
                    if types == "identity":
                        g = np.arange(N)
                    elif types == "few":
                        g = rng.integers(0, max(d, 1), N)
                    else:
                        g = rng.integers(0, max(N // 4, 1), N)
                    led = QueryLedger()
                    find_smallest_of_types(f, g, N, d, model=model, ledger=led, rng=rng)
                    ratios.append(led.charged / np.sqrt(d * N))
                r = float(np.mean(ratios))
                worst = max(worst, r)
                print(f"{N:>7} {d:>6} {types:>8} {r:7.3f}")
    print(f"max ratio {worst:.3f}")


if __name__ == "__main__":
    main()
