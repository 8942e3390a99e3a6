"""Sensitivity audit: pair generation, report plumbing, bound checks."""

import numpy as np
import pytest

from bezier_dp import (
    Dataset,
    DomainError,
    NeighborPair,
    SensitivityReport,
    bernstein_map,
    builtin_maps,
    empirical_sensitivity,
    random_neighbor_pair,
    swap_variance_map,
    transformed_pair_map,
    unnormalized_covariance_map,
    unnormalized_variance_map,
)


def test_neighbor_pair_validation():
    base = Dataset([0.1, 0.2])
    ext = Dataset([0.1, 0.2, 0.3])
    NeighborPair(base, ext, "add-remove")
    with pytest.raises(DomainError):
        NeighborPair(base, ext, "swap")  # sizes differ
    with pytest.raises(DomainError):
        NeighborPair(base, base, "add-remove")  # sizes equal
    with pytest.raises(DomainError):
        NeighborPair(base, Dataset([[0.1, 0.2]]), "add-remove")  # dims differ
    with pytest.raises(DomainError):
        NeighborPair(base, ext, "replace-one")
    with pytest.raises(DomainError):
        NeighborPair(Dataset.empty(1), Dataset.empty(1), "swap")


def test_random_neighbor_pair_properties():
    for model in ("add-remove", "swap"):
        for n in (1, 2, 7):
            pair = random_neighbor_pair(n, 1, model, rng_seed=n)
            assert pair.model == model
            assert pair.base.n == n
            assert pair.extended.n == n + (1 if model == "add-remove" else 0)
    # add-remove keeps the base prefix intact
    pair = random_neighbor_pair(5, 2, "add-remove", rng_seed=9)
    assert np.array_equal(pair.extended.values[:5], pair.base.values)
    # swap changes exactly one row
    pair = random_neighbor_pair(6, 1, "swap", rng_seed=9)
    changed = np.any(pair.extended.values != pair.base.values, axis=1)
    assert changed.sum() <= 1
    # deterministic in the seed
    a = random_neighbor_pair(4, 1, "add-remove", rng_seed=3)
    b = random_neighbor_pair(4, 1, "add-remove", rng_seed=3)
    assert np.array_equal(a.extended.values, b.extended.values)
    with pytest.raises(DomainError):
        random_neighbor_pair(0, 1, "swap", rng_seed=1)
    with pytest.raises(DomainError):
        random_neighbor_pair(-1, 1, "add-remove", rng_seed=1)
    with pytest.raises(DomainError):
        random_neighbor_pair(2, 0, "add-remove", rng_seed=1)


def test_mixture_hits_corners_and_interior():
    vals = random_neighbor_pair(400, 1, "add-remove", rng_seed=77).extended.values
    assert np.any(vals == 0.0) and np.any(vals == 1.0)
    assert np.any((vals > 0.1) & (vals < 0.9))
    assert vals.min() >= 0.0 and vals.max() <= 1.0


def test_report_structure():
    rep = empirical_sensitivity(
        unnormalized_variance_map,
        "add-remove",
        trials=40,
        sizes=[0, 1, 5],
        seed=3,
        map_name="uvar",
    )
    assert isinstance(rep, SensitivityReport)
    assert rep.map_name == "uvar"
    assert rep.trials == 40
    assert set(rep.by_size) == {0, 1, 5}
    assert 0.0 <= rep.min_l1 <= rep.max_l1
    assert rep.max_l1 == max(rep.by_size.values())
    assert isinstance(rep.argmax, NeighborPair)
    with pytest.raises(DomainError):
        empirical_sensitivity(unnormalized_variance_map, "add-remove", 0, [1])
    with pytest.raises(DomainError):
        empirical_sensitivity(unnormalized_variance_map, "add-remove", 5, [])
    with pytest.raises(DomainError):
        empirical_sensitivity(unnormalized_variance_map, "swap", 5, [0, 1])


def test_bernstein_map_sensitivity_exactly_one():
    # adding any record changes the aggregate by that record's basis vector,
    # whose L1 norm is exactly 1 (partition of unity)
    for k, d in ((2, 1), (3, 1), (2, 2)):
        rep = empirical_sensitivity(
            bernstein_map(k, d),
            "add-remove",
            trials=400,
            sizes=[0, 1, 2, 5, 20],
            seed=11,
            d=d,
            map_name=f"bernstein k={k} d={d}",
        )
        assert rep.max_l1 == pytest.approx(1.0, abs=1e-9)
        assert rep.min_l1 == pytest.approx(1.0, abs=1e-9)


def test_unnormalized_maps_bounded_by_one():
    rep = empirical_sensitivity(
        unnormalized_variance_map, "add-remove", 600, [0, 1, 2, 5, 20, 100], seed=13
    )
    assert rep.max_l1 <= 1.0 + 1e-9
    rep = empirical_sensitivity(
        unnormalized_covariance_map, "add-remove", 600, [0, 1, 2, 5, 20, 100], seed=14, d=2
    )
    assert rep.max_l1 <= 1.0 + 1e-9
    rep = empirical_sensitivity(
        transformed_pair_map, "add-remove", 600, [0, 1, 2, 5, 20, 100], seed=15
    )
    assert rep.max_l1 <= 1.0 + 1e-9
    # the bound is nearly attained (corner-heavy mixture finds ~1)
    assert rep.max_l1 >= 0.9


def test_swap_map_bounded_by_inverse_n():
    for n in (1, 2, 5, 20):
        rep = empirical_sensitivity(
            swap_variance_map, "swap", 300, [n], seed=16 + n
        )
        assert rep.max_l1 <= 1.0 / n + 1e-9


def test_builtin_maps_catalog():
    maps = builtin_maps()
    assert set(maps) == {
        "bernstein",
        "uvar",
        "ucov",
        "transformed",
        "swap_variance",
        "swap_covariance",
    }
    for name, meta in maps.items():
        assert meta["model"] in ("add-remove", "swap")
        assert "bound" in meta
        assert ("fn" in meta) != ("factory" in meta)
    # catalog entries are runnable as-is
    meta = maps["ucov"]
    rep = empirical_sensitivity(
        meta["fn"], meta["model"], 50, [0, 3], seed=2, d=meta["d"], map_name="ucov"
    )
    assert rep.max_l1 <= 1.0 + 1e-9
