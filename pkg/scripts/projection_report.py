#!/usr/bin/env python3
"""Norm report for the recursive projection family.

For each requested (n, r) the script prints the closed-form order-one value,
the transpose-relaxation SDP value, the see-saw lower bound, and the
closed-form order-two upper bound.  The SDP instance at (3, 2) has a
6561-variable standard form and takes about a minute.
"""

import argparse
import time

import numpy as np

from sknorms.norms import sk_lower_bound_seesaw, sk_upper_bound
from sknorms.qops import transpose_map
from sknorms.states import proj_family, proj_s1_exact, proj_s2_upper

DEFAULT_PAIRS = "2:1,2:2,3:1,2:3,3:2"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", default=DEFAULT_PAIRS, help="comma list of n:r")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    pairs = [tuple(int(v) for v in tok.split(":")) for tok in args.pairs.split(",")]
    print("n  r  rank  s1_exact    s1_sdp      s1_seesaw   s2_upper   seconds")
    for n, r in pairs:
        t0 = time.perf_counter()
        P = proj_family(n, r)
        want = proj_s1_exact(n, r)
        up = sk_upper_bound(P.matrix, 1, [transpose_map(n**r)]).upper
        lo = sk_lower_bound_seesaw(P.matrix, 1, restarts=6, seed=args.seed).lower
        dt = time.perf_counter() - t0
        print(
            f"{n}  {r}  {P.rank:4d}  {want:.8f}  {up:.8f}  {lo:.8f}  "
            f"{proj_s2_upper(n, r):.6f}   {dt:6.1f}"
        )
        assert abs(up - want) < 1e-6 and abs(lo - want) < 1e-6, (n, r)


if __name__ == "__main__":
    main()
