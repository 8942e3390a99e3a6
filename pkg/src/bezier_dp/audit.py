"""Empirical sensitivity audit for the aggregate maps used by the mechanisms.

The privacy calibration rests on a handful of claims of the form "this map
from datasets to R^m has L1 sensitivity at most s under the stated
neighboring model".  This module stress-tests those claims on randomly
generated neighbor pairs whose records are drawn from an adversarial mixture
(uniform mass, exact corners, strongly edge-concentrated values), across a
spread of dataset sizes including the empty dataset.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .noise import NoiseSource, derive_seed
from .stats import Dataset, covariance_exact, unnormalized_covariance, unnormalized_variance, variance_exact
from .bernstein import bernstein_aggregate

MODELS = ("add-remove", "swap")


@dataclass(frozen=True)
class NeighborPair:
    """Two datasets differing by one record under `model`."""

    base: Dataset
    extended: Dataset
    model: str

    def __post_init__(self):
        if self.model not in MODELS:
            raise DomainError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.base.d != self.extended.d:
            raise DomainError("neighbor datasets must share the record dimension")
        if self.model == "add-remove":
            if self.extended.n != self.base.n + 1:
                raise DomainError("add-remove neighbors must differ by one record")
        else:
            if self.extended.n != self.base.n:
                raise DomainError("swap neighbors must have equal size")
            if self.base.n == 0:
                raise DomainError("swap neighbors need at least one record")


def _mixture_records(src: NoiseSource, count: int, d: int) -> np.ndarray:
    """Adversarial record mixture: uniform, exact corners, edge-concentrated."""
    if count == 0:
        return np.empty((0, d))
    cat = src.uniforms01(count * d)
    val = src.uniforms01(count * d)
    side = src.uniforms01(count * d)
    out = np.where(
        cat < 0.4,
        val,
        np.where(
            cat < 0.7,
            np.round(val),  # exact 0/1 corners
            np.where(side < 0.5, val**8, 1.0 - val**8),
        ),
    )
    return out.reshape(count, d)


def random_neighbor_pair(
    n: int, d: int, model: str, rng_seed: int
) -> NeighborPair:
    """Deterministic neighbor pair of base size n with d-dimensional records."""
    if model not in MODELS:
        raise DomainError(f"model must be one of {MODELS}, got {model!r}")
    if n < 0 or (model == "swap" and n < 1):
        raise DomainError(f"invalid base size {n} for model {model!r}")
    if d < 1:
        raise DomainError(f"record dimension must be >= 1, got {d}")
    src = NoiseSource.seeded(rng_seed)
    base_vals = _mixture_records(src, n, d)
    fresh = _mixture_records(src, 1, d)
    if model == "add-remove":
        ext_vals = np.concatenate([base_vals, fresh], axis=0)
    else:
        pos = min(n - 1, int(src.uniforms01(1)[0] * n))
        ext_vals = base_vals.copy()
        ext_vals[pos] = fresh[0]
    return NeighborPair(Dataset(base_vals, d=d), Dataset(ext_vals, d=d), model)


@dataclass(frozen=True)
class SensitivityReport:
    """Extremes of ||f(extended) - f(base)||_1 over the sampled pairs."""

    map_name: str
    model: str
    trials: int
    max_l1: float
    min_l1: float
    argmax: NeighborPair
    by_size: dict[int, float]  # base size -> max L1 seen at that size


def empirical_sensitivity(
    map_fn: Callable[[Dataset], np.ndarray],
    model: str,
    trials: int,
    sizes: Sequence[int],
    seed: int = 0,
    d: int = 1,
    map_name: str = "custom",
) -> SensitivityReport:
    """Sample neighbor pairs and track the extremes of the map's L1 difference."""
    if model not in MODELS:
        raise DomainError(f"model must be one of {MODELS}, got {model!r}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise DomainError("need at least one dataset size")
    for s in sizes:
        if s < 0 or (model == "swap" and s < 1):
            raise DomainError(f"invalid size {s} for model {model!r}")
    best = worst = None
    best_pair = None
    by_size: dict[int, float] = {s: 0.0 for s in sizes}
    for t in range(trials):
        n = sizes[t % len(sizes)]
        pair = random_neighbor_pair(n, d, model, derive_seed(seed, t, 0))
        diff = np.asarray(map_fn(pair.extended), dtype=np.float64) - np.asarray(
            map_fn(pair.base), dtype=np.float64
        )
        l1 = float(np.sum(np.abs(diff)))
        if best is None or l1 > best:
            best, best_pair = l1, pair
        if worst is None or l1 < worst:
            worst = l1
        if l1 > by_size[n]:
            by_size[n] = l1
    return SensitivityReport(
        map_name=map_name,
        model=model,
        trials=trials,
        max_l1=best,
        min_l1=worst,
        argmax=best_pair,
        by_size=by_size,
    )


# -- ready-made maps --------------------------------------------------------

def bernstein_map(k: int, d: int = 1) -> Callable[[Dataset], np.ndarray]:
    """Dataset -> flat Bernstein aggregate (claimed L1 sensitivity exactly 1)."""

    def f(data: Dataset) -> np.ndarray:
        return bernstein_aggregate(data.values, k)

    return f


def unnormalized_variance_map(data: Dataset) -> np.ndarray:
    """Dataset -> [n * variance] (claimed add-remove sensitivity 1)."""
    return np.array([unnormalized_variance(data)])


def unnormalized_covariance_map(data: Dataset) -> np.ndarray:
    """Dataset -> [n * covariance] (claimed add-remove sensitivity 1)."""
    return np.array([unnormalized_covariance(data)])


def transformed_pair_map(data: Dataset) -> np.ndarray:
    """Dataset -> [n - u, u] with u = n * variance (claimed sensitivity 1)."""
    u = unnormalized_variance(data)
    return np.array([data.n - u, u])


def swap_variance_map(data: Dataset) -> np.ndarray:
    """Dataset -> [variance]; swap-model sensitivity is claimed <= 1/n."""
    return np.array([variance_exact(data)])


def swap_covariance_map(data: Dataset) -> np.ndarray:
    """Dataset -> [covariance]; swap-model sensitivity is claimed <= 1/n."""
    return np.array([covariance_exact(data)])


def builtin_maps() -> dict[str, dict]:
    """Name -> {fn-or-factory, model, d, claimed bound} for the CLI and tests."""
    return {
        "bernstein": {
            "factory": bernstein_map,
            "model": "add-remove",
            "bound": "= 1",
        },
        "uvar": {
            "fn": unnormalized_variance_map,
            "model": "add-remove",
            "d": 1,
            "bound": "<= 1",
        },
        "ucov": {
            "fn": unnormalized_covariance_map,
            "model": "add-remove",
            "d": 2,
            "bound": "<= 1",
        },
        "transformed": {
            "fn": transformed_pair_map,
            "model": "add-remove",
            "d": 1,
            "bound": "<= 1",
        },
        "swap_variance": {
            "fn": swap_variance_map,
            "model": "swap",
            "d": 1,
            "bound": "<= 1/n",
        },
        "swap_covariance": {
            "fn": swap_covariance_map,
            "model": "swap",
            "d": 2,
            "bound": "<= 1/n",
        },
    }
