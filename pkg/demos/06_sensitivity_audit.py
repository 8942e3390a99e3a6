#!/usr/bin/env python3
"""Auditing sensitivity claims with randomized neighbor pairs.

Every mechanism's privacy proof rests on one number: the L1 sensitivity of
the aggregate it perturbs.  The audit module stress-tests those claims
empirically -- it samples neighboring datasets (record added/removed, or one
record replaced) from an adversarial mixture of corner-heavy and smooth
data, and tracks the extreme L1 differences of any dataset->vector map.

The demo certifies the shipped maps, then uses the auditor on a hand-rolled
aggregate to expose the joint-budget pitfall the Bernstein basis avoids.
"""

import numpy as np

import bezier_dp as bd


def show(report, claimed):
    print(f"  map {report.map_name!r} under {report.model}:")
    print(f"    claimed bound : {claimed}")
    print(f"    observed max  : {report.max_l1:.9f}  (min {report.min_l1:.2e})")
    by = ", ".join(f"n={n}: {v:.6f}" for n, v in sorted(report.by_size.items()))
    print(f"    max by size   : {by}")


def raw_moment_pair_map(data):
    """(sum x, sum x^2) released side by side -- the textbook aggregate."""
    x = data.column(0)
    return np.array([x.sum(), (x * x).sum()])


def main():
    sizes = [0, 1, 2, 5, 20, 100]

    print("== shipped sensitivity certificates " + "=" * 31)
    rep = bd.empirical_sensitivity(
        bd.bernstein_map(2), "add-remove", 3000, sizes,
        seed=1, map_name="bernstein(k=2)",
    )
    show(rep, "exactly 1 (partition of unity)")

    rep = bd.empirical_sensitivity(
        bd.unnormalized_variance_map, "add-remove", 3000, sizes,
        seed=2, map_name="n*variance",
    )
    show(rep, "<= 1")

    rep = bd.empirical_sensitivity(
        bd.transformed_pair_map, "add-remove", 3000, sizes,
        seed=3, map_name="(n-u, u)",
    )
    show(rep, "<= 1 (jointly, both cells)")

    rep = bd.empirical_sensitivity(
        bd.swap_variance_map, "swap", 3000, [20], seed=4, map_name="variance",
    )
    show(rep, "<= 1/n = 0.05 at n=20")

    print()
    print("== the joint-budget pitfall the basis avoids " + "=" * 22)
    print("  releasing raw power sums side by side stacks their sensitivities:")
    rep = bd.empirical_sensitivity(
        raw_moment_pair_map, "add-remove", 3000, sizes,
        seed=5, map_name="(sum x, sum x^2)",
    )
    show(rep, "a record at x=1 moves both cells by 1 -> joint L1 reaches 2")
    rep = bd.empirical_sensitivity(
        bd.bernstein_map(2), "add-remove", 3000, sizes,
        seed=5, map_name="bernstein(k=2)",
    )
    show(rep, "three cells, still exactly 1")
    print("  -> same information (degree-2 sums are an invertible function of")
    print("     the three basis cells), half the noise scale")

    print()
    print("== worst pair is kept for inspection " + "=" * 31)
    rep = bd.empirical_sensitivity(
        bd.unnormalized_covariance_map, "add-remove", 2000, [2, 5], seed=6,
        d=2, map_name="n*covariance",
    )
    pair = rep.argmax
    print(f"  max |delta| = {rep.max_l1:.6f} achieved by base n={pair.base.n}:")
    for row in pair.base.values:
        print(f"    ({row[0]:.3f}, {row[1]:.3f})")
    added = pair.extended.values[-1]
    print(f"  with record ({added[0]:.3f}, {added[1]:.3f}) added")


if __name__ == "__main__":
    main()
