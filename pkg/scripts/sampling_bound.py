"""Mean squared error of sampled irrep weights against the 1/M shot bound."""

import argparse

import numpy as np

from psym.fockstate import FockState, weights
from psym.huckel import HuckelModel


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--group", default="D6h", choices=("D6h", "D2h"))
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--shots", type=int, nargs="+", default=[100, 1000, 10000])
    args = ap.parse_args()

    m = HuckelModel(group_name=args.group)
    s = FockState.random(6, np.random.default_rng(1), 3, 3)
    exact = weights(s, m.group, m.rep).weights
    labels = list(exact)
    print("shots,max_mse,mean_mse,bound")
    for shots in args.shots:
        sq = np.array([
            [(weights(s, m.group, m.rep, mode="sampled", shots=shots, seed=k).weights[x] - exact[x]) ** 2
             for x in labels]
            for k in range(args.seeds)
        ])
        mse = sq.mean(axis=0)
        print(f"{shots},{mse.max():.3e},{mse.mean():.3e},{1 / shots:.3e}")


if __name__ == "__main__":
    main()
