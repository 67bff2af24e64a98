#!/usr/bin/env python3
"""Sweep the certified undistillability thresholds over (n, r).

Prints the exact threshold where the comparison quantity p reaches one and
the closed-form simple bound otherwise.  The exact threshold first appears
at n = 4 for r = 1 and n = 7 for r = 2; below that the simple bound is the
only certificate.
"""

import argparse

from sknorms.states import p_value, undistill_threshold, undistill_threshold_simple


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=12)
    ap.add_argument("--rmax", type=int, default=4)
    args = ap.parse_args()

    print("n   r   p          threshold   simple")
    for n in range(2, args.nmax + 1):
        for r in range(1, args.rmax + 1):
            p = p_value(n, r)
            t = undistill_threshold(n, r)
            s = undistill_threshold_simple(n, r)
            t_s = "   --    " if t is None else f"{t:.6f} "
            print(f"{n:<3} {r:<3} {p:<10.4f} {t_s}  {s:.6f}")


if __name__ == "__main__":
    main()
