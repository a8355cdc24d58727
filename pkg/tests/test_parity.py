import json
from math import comb

import pytest

from shallowboson.fock import enumerate_basis
from shallowboson.parity import (
    binom_identity_check, coarse_grain, parity_map, upsilon0,
    upsilon0_prime, verify_surjectivity,
)


def brute_multiplicity(num_modes, num_photons, m):
    """Oracle: count patterns with the first m modes even, the rest odd."""
    return sum(
        1 for p in enumerate_basis(num_modes, num_photons)
        if all(v % 2 == 0 for v in p[:m]) and all(v % 2 == 1 for v in p[m:])
    )


def brute_multiplicity_flipped(num_modes, num_photons, m):
    """Oracle: count patterns with the first m modes odd, the rest even."""
    return sum(
        1 for p in enumerate_basis(num_modes, num_photons)
        if all(v % 2 == 1 for v in p[:m]) and all(v % 2 == 0 for v in p[m:])
    )


def test_parity_map_examples():
    assert parity_map((3, 0, 1, 0), 0) == (1, 0, 1, 0)
    assert parity_map((1, 2, 1, 0), 0) == (1, 0, 1, 0)
    assert parity_map((0,) * 6, 1) == (1,) * 6
    with pytest.raises(ValueError):
        parity_map((1, 0), 2)


def test_coarse_grain_point_mass():
    out = coarse_grain({(3, 0, 1, 0): 1.0}, 0)
    assert out == {(1, 0, 1, 0): 1.0}


def test_coarse_grain_uniform_sector():
    basis = list(enumerate_basis(4, 4))
    assert len(basis) == 35
    even_count = brute_multiplicity(4, 4, 4)
    dist = {p: 1.0 / 35 for p in basis}
    grained = coarse_grain(dist, 0)
    assert grained[(0, 0, 0, 0)] == pytest.approx(even_count / 35, abs=1e-12)
    assert grained[(0, 0, 0, 0)] == pytest.approx(
        upsilon0(4, 4, 4) / 35, abs=1e-12)


def test_coarse_grain_preserves_mass():
    import numpy as np
    rng = np.random.default_rng(0)
    basis = list(enumerate_basis(5, 4))
    weights = rng.random(len(basis))
    weights /= weights.sum()
    dist = dict(zip(basis, weights))
    for j in (0, 1):
        assert sum(coarse_grain(dist, j).values()) == pytest.approx(
            1.0, abs=1e-12)


def test_coarse_grain_rejects_unnormalized():
    with pytest.raises(ValueError):
        coarse_grain({(1, 0): 0.7}, 0)


def test_multiplicity_examples():
    assert upsilon0(4, 4, 2) == brute_multiplicity(4, 4, 2) == 4
    assert upsilon0(4, 4, 4) == brute_multiplicity(4, 4, 4) == 10
    assert upsilon0(6, 0, 6) == 1
    assert upsilon0_prime(4, 4, 2) == brute_multiplicity_flipped(4, 4, 2) == 4


def test_prime_is_substitution_at_boundary():
    # upsilon0_prime(M, n, 0) plays upsilon0(M, n, M): the two calls agree
    # in value when admissible and in raising when the half-arguments are
    # non-integer (here both are ill-posed for M = n = 3)
    with pytest.raises(ValueError):
        upsilon0_prime(3, 3, 0)
    with pytest.raises(ValueError):
        upsilon0(3, 3, 3)
    assert upsilon0_prime(4, 4, 0) == upsilon0(4, 4, 4)


def test_inadmissible_parity_rejected():
    with pytest.raises(ValueError):
        upsilon0(4, 4, 1)
    with pytest.raises(ValueError):
        upsilon0(4, 4, 5)
    with pytest.raises(ValueError):
        upsilon0_prime(4, 3, 0)


@pytest.mark.parametrize("m", range(2, 8))
def test_multiplicities_match_brute_force(m):
    for n in (m - 1, m):
        start = (m + n) % 2
        total = 0
        for k in range(start, m + 1, 2):
            value = upsilon0(m, n, k)
            assert value == brute_multiplicity(m, n, k)
            assert upsilon0_prime(m, n, m - k) == value
            total += comb(m, k) * value
        assert total == comb(n + m - 1, n)
        # the flipped map's own admissible classes, counted directly
        for k in range(n % 2, m + 1, 2):
            assert upsilon0_prime(m, n, k) == brute_multiplicity_flipped(
                m, n, k)


def test_binomial_identity():
    assert binom_identity_check(0, 0, 0)
    assert binom_identity_check(2, 5, 3)  # both sides comb(8, 3) = 56
    assert all(binom_identity_check(p, q, r)
               for p in range(13) for q in range(13) for r in range(q + 1))
    with pytest.raises(ValueError):
        binom_identity_check(1, 2, 3)


def test_depth1_coverage_is_complete():
    report = verify_surjectivity(4, 1, {3, 4}, {0, 1})
    assert report.is_complete
    assert len(report.covered) == 16
    assert report.missing == []


def test_full_depth_odd_modes_even_photons():
    report = verify_surjectivity(5, 4, {4}, {0, 1})
    assert report.is_complete


def test_single_parity_covers_half():
    report = verify_surjectivity(4, 3, {4}, {0})
    assert len(report.covered) == 8
    assert all(sum(b) % 2 == 0 for b in report.covered)


def test_empty_configuration_rejected():
    with pytest.raises(ValueError):
        verify_surjectivity(4, 1, set(), {0})
    with pytest.raises(ValueError):
        verify_surjectivity(4, 1, {4}, set())
    with pytest.raises(ValueError):
        verify_surjectivity(4, 1, {2}, {0})


def test_coverage_report_serializes():
    report = verify_surjectivity(3, 1, {2, 3}, {0, 1})
    doc = json.loads(report.to_json())
    assert doc["M"] == 3 and doc["depth"] == 1
    assert doc["is_complete"] == report.is_complete
    assert set(doc) >= {"sectors", "parities", "covered", "missing",
                        "multiplicities"}
    assert sum(doc["multiplicities"].values()) == sum(
        report.multiplicities.values())


def test_multiplicities_track_preimage_counts():
    report = verify_surjectivity(4, 1, {4}, {0})
    total_patterns = sum(report.per_config[(4, 0)].values())
    assert total_patterns == 28  # depth-1 reachable patterns of (4, 4)
    assert sum(report.multiplicities.values()) == 28
