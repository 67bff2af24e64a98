#!/usr/bin/env python3
"""Order-one norm brackets of random projections against the conjectured
rank-based lower bound sqrt(rank / n^(2+eps)).

For each rank the script draws Haar-random projections on the n x n
bipartite space, brackets the order-one value, and compares the certified
lower edge with the conjectured bound.  The bound is expected to sit below
the bracket on every draw.
"""

import argparse

import numpy as np

from sknorms.norms import sk_bracket
from sknorms.states import brandao_rhs, random_projection


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--eps", type=float, default=0.99)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    n = args.n
    print(f"n = {n}, eps = {args.eps}, {args.trials} trials per rank")
    print("rank  rhs        s1_lower_min  s1_upper_max  violations")
    for rank in range(1, n * n + 1):
        rhs = brandao_rhs(n, rank, args.eps)
        lows, ups, bad = [], [], 0
        for t in range(args.trials):
            P = random_projection(n, rank, seed=np.random.default_rng([args.seed, rank, t]))
            b = sk_bracket(P, 1, restarts=6, seed=t)
            lows.append(b.lower)
            ups.append(b.upper)
            bad += b.upper < rhs - 1e-9
        print(f"{rank:<5} {rhs:.6f}   {min(lows):.6f}      {max(ups):.6f}      {bad}")


if __name__ == "__main__":
    main()
