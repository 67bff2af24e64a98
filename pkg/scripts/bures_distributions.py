#!/usr/bin/env python3
"""Distribution of restricted-norm values over Bures-random states.

Dimension 4: the order-one value is computed exactly and always lands
between the two middle eigenvalues; the script reports the distribution of
its position within that window.  Dimension 9: see-saw lower bounds place
the order-two value at the second-largest eigenvalue on essentially every
sample and the order-one value there on roughly nine samples in ten.

Writes one CSV per dimension and prints summary rates.
"""

import argparse
import csv

import numpy as np

from sknorms.norms import sk_exact_small, sk_lower_bound_seesaw
from sknorms.states import bures_sample


def run_dim4(samples, seed, path):
    pos = []
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["sample", "lambda3", "lambda4", "s1"])
        for i in range(samples):
            rho = bures_sample((2, 2), seed=np.random.default_rng([seed, i]))
            lam = np.linalg.eigvalsh(np.asarray(rho))
            s1 = sk_exact_small(rho)
            w.writerow([i, f"{lam[2]:.12g}", f"{lam[3]:.12g}", f"{s1:.12g}"])
            pos.append((s1 - lam[2]) / max(lam[3] - lam[2], 1e-30))
    pos = np.asarray(pos)
    print(f"dim 4: {samples} samples, window position mean {pos.mean():.3f} "
          f"(0 = lambda3, 1 = lambda4), outside window: {np.sum((pos < -1e-6) | (pos > 1 + 1e-6))}")


def run_dim9(samples, seed, path):
    hit1 = hit2 = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["sample", "lambda8", "lambda9", "s1_lower", "s2_lower"])
        for i in range(samples):
            rho = bures_sample((3, 3), seed=np.random.default_rng([seed, i]))
            lam = np.linalg.eigvalsh(np.asarray(rho))
            lo1 = sk_lower_bound_seesaw(rho, 1, restarts=3, seed=2 * i).lower
            lo2 = sk_lower_bound_seesaw(rho, 2, restarts=2, seed=2 * i + 1).lower
            w.writerow([i] + [f"{v:.12g}" for v in (lam[-2], lam[-1], lo1, lo2)])
            hit1 += lo1 >= lam[-2] - 1e-7
            hit2 += lo2 >= lam[-2] - 1e-7
    print(f"dim 9: {samples} samples, order-two at second-largest eigenvalue "
          f"{hit2 / samples:.1%}, order-one {hit1 / samples:.1%}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples4", type=int, default=2000)
    ap.add_argument("--samples9", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--prefix", default="bures")
    args = ap.parse_args()

    run_dim4(args.samples4, args.seed, f"{args.prefix}_dim4.csv")
    run_dim9(args.samples9, args.seed, f"{args.prefix}_dim9.csv")


if __name__ == "__main__":
    main()
