#!/usr/bin/env python3
"""Reproduce the reference table of one-parameter family norm values.

For each (n, alpha) row the closed form is printed next to the transpose-map
and reduction-map relaxation values, each solved to 1e-8.  The transpose
column matches the closed form on every row; the reduction column is loose
at (3, +1/2) and ties everywhere else.
"""

import argparse

from sknorms.norms import sk_upper_bound
from sknorms.qops import reduction_map, transpose_map
from sknorms.states import werner, werner_norm_exact

ROWS = [(2, 0.5), (2, -0.5), (3, 0.5), (3, -0.5)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--digits", type=int, default=6)
    args = ap.parse_args()

    fmt = f"{{:.{args.digits}f}}"
    print("n  alpha   exact       transpose   reduction")
    for n, alpha in ROWS:
        X = werner(n, alpha)
        exact = werner_norm_exact(n, alpha, 1)
        t = sk_upper_bound(X, 1, [transpose_map(n)]).upper
        r = sk_upper_bound(X, 1, [reduction_map(n)]).upper
        cells = "   ".join(fmt.format(v) for v in (exact, t, r))
        print(f"{n}  {alpha:+.2f}   {cells}")


if __name__ == "__main__":
    main()
