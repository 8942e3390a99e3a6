#!/usr/bin/env python3
"""Three ways to release a correlation, one budget.

Correlation is a ratio of three statistics -- covariance over the geometric
mean of two variances -- which makes it a budget-allocation problem:

    correlation_naive     one release of the 6 raw sums, sensitivity 6
    correlation_composed  sequential composition: covariance at eps/3 plus
                          each variance at eps/3
    correlation_bezier    a single degree-2 bivariate aggregate (9 cells,
                          joint sensitivity 1); every moment the ratio needs
                          is post-processing of one release

The joint release wins because it never splits the budget and never pays
more than sensitivity 1.  The demo measures all three on correlated data.
"""

import bezier_dp as bd
from bezier_dp.noise import derive_seed


def main():
    n, trials, eps = 2000, 5000, 1.0
    cfg = bd.ExperimentConfig(
        mechanisms=["correlation_bezier"],
        epsilons=[eps],
        n=n,
        trials=1,
        statistic="correlation",
        distribution="correlated",
        dist_param=0.6,
    ).normalized()
    data = bd.generate_dataset(cfg, derive_seed(808, 0, 0))
    exact = bd.correlation_exact(data)
    print(f"correlated pairs: n={n}, exact correlation {exact:.4f}")
    print(f"{trials} trials per pipeline at eps={eps}")
    print()

    print(f"{'pipeline':<24}{'MSE':>12}   budget layout")
    layout = {
        "correlation_naive": "6 sums at eps/6 each (scale 6/eps)",
        "correlation_composed": "cov @ eps/3 + two variances @ eps/3",
        "correlation_bezier": "9 basis cells, one release at scale 1/eps",
    }
    results = {}
    for mi, mid in enumerate(layout):
        prep = bd.prepare(mid, data)
        src = bd.NoiseSource.seeded(derive_seed(809, 0, mi))
        total = 0.0
        for _ in range(trials):
            err = prep.run_value(eps, src) - exact
            total += err * err
        results[mid] = total / trials
        print(f"{mid:<24}{results[mid]:>12.6f}   {layout[mid]}")
    print()
    best = min(results, key=results.get)
    print(f"lowest MSE: {best}")
    print(
        f"joint basis release improves on the naive split by "
        f"{results['correlation_naive'] / results['correlation_bezier']:.1f}x here"
    )
    print()
    rel = bd.bezier_release(data, 2, 2, eps, bd.NoiseSource.seeded(77))
    print(f"the degree-2 bivariate release carries {rel.shape[0]} mixed power")
    print("sums; correlation, covariance, and both variances are all free")
    print("post-processing of that one vector")


if __name__ == "__main__":
    main()
