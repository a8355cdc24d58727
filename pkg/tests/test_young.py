from itertools import combinations
from math import comb

import pytest

from shallowboson.dyck import catalan_dyck_spec, catalan_number, dyck_count
from shallowboson.young import (
    box_bitstring_apply, catalan_basis, catalan_lattice, catalan_mu,
    count_boolean_sublattices, export_lattice_json, export_lattice_text,
    ferrers_to_pattern, ordinal_sum_decomposition, parity_distinctness_check,
    pattern_to_ferrers, vertex_to_pattern, young_lattice,
)


def test_first_differences_example():
    assert ferrers_to_pattern((0, 0, 2, 3, 4)) == (0, 2, 1, 1)
    assert ferrers_to_pattern((0, 0, 0, 0)) == (0, 0, 0)


def test_first_differences_require_leading_zero():
    with pytest.raises(ValueError):
        ferrers_to_pattern((1, 2, 3))


def test_round_trip_over_lattice_vertices():
    lattice = young_lattice((2, 3, 4))
    for vertex in lattice.vertices:
        extended = (0,) + vertex
        assert pattern_to_ferrers(ferrers_to_pattern(extended)) == extended


@pytest.mark.parametrize("mu,size", [
    ((1, 2, 3), 14),
    ((2, 3, 4), 28),
    ((0,), 1),
])
def test_lattice_sizes(mu, size):
    assert len(young_lattice(mu)) == size


def test_lattice_cover_edges_differ_by_one_box():
    lattice = young_lattice((2, 3))
    for low, high in lattice.cover_edges:
        assert sum(high) - sum(low) == 1
        assert all(h - l in (0, 1) for l, h in zip(low, high))


def test_lattice_closed_under_meet_and_join():
    lattice = young_lattice((2, 3, 4))
    for a, b in combinations(lattice.vertices, 2):
        assert lattice.meet(a, b) in lattice
        assert lattice.join(a, b) in lattice


@pytest.mark.parametrize("m,n,depth,size", [
    (4, 4, 1, 28),
    (4, 3, 2, 19),
    (4, 3, 1, 14),
])
def test_reachable_pattern_counts(m, n, depth, size):
    assert len(catalan_basis(m, n, depth)) == size


def test_reachable_patterns_match_closed_form():
    for m in range(2, 8):
        for n in (m, m - 1):
            for depth in range(1, m):
                basis = catalan_basis(m, n, depth)
                assert len(set(basis)) == len(basis)
                assert len(basis) == dyck_count(catalan_dyck_spec(m, n, depth))


def test_reachable_patterns_strictly_nested():
    for m in range(2, 8):
        for n in (m, m - 1):
            previous = None
            for depth in range(1, m):
                current = set(catalan_basis(m, n, depth))
                if previous is not None:
                    assert previous < current
                previous = current
            assert len(previous) == comb(n + m - 1, n)


def test_invalid_sector_rejected():
    with pytest.raises(ValueError):
        catalan_basis(4, 2, 1)
    with pytest.raises(ValueError):
        catalan_basis(4, 4, 0)


def test_polygon_bounds():
    assert catalan_mu(4, 4, 1) == (2, 3, 4)
    assert catalan_mu(4, 3, 1) == (1, 2, 3)
    assert catalan_mu(4, 3, 2) == (2, 3, 3)


def test_vertex_labels_enumerate_reachable_patterns():
    for m, n, depth in [(4, 4, 1), (4, 3, 1), (4, 3, 2), (5, 4, 2),
                        (3, 3, 1)]:
        lattice = catalan_lattice(m, n, depth)
        labels = [vertex_to_pattern(v, n) for v in lattice.vertices]
        assert len(set(labels)) == len(labels)  # injective
        assert set(labels) == set(catalan_basis(m, n, depth))


def test_depth1_dimension_is_catalan():
    # |reachable(M, M-1, depth 1)| is the M-th Catalan number
    for m in range(2, 11):
        count = dyck_count(catalan_dyck_spec(m, m - 1, 1))
        assert count == catalan_number(m)
        ratio = count / comb(2 * (m - 1), m - 1)
        assert ratio == pytest.approx((2 / m) * (2 * m - 1) / (1 + m),
                                      rel=1e-12)


def test_box_bitstring_examples():
    top = (0, 1, 2, 3, 3)
    assert box_bitstring_apply(top, (0, 0, 0, 0, 0)) == top
    assert box_bitstring_apply(top, (0, 1, 1, 1, 0)) == (0, 0, 1, 2, 3)
    # every box bit string is admissible on the staircase top
    from itertools import product
    results = {box_bitstring_apply(top, (0,) + bits + (0,))
               for bits in product((0, 1), repeat=3)}
    assert len(results) == 8


def test_box_bitstring_validation():
    with pytest.raises(ValueError):
        box_bitstring_apply((0, 1, 2, 2), (1, 0, 0, 0))
    with pytest.raises(ValueError):
        box_bitstring_apply((0, 1, 1, 2), (0, 0, 1, 0))  # breaks monotony
    with pytest.raises(ValueError):
        box_bitstring_apply((0, 0, 1, 2), (0, 1, 0, 0))  # negative column


@pytest.mark.parametrize("m", [2, 4, 8, 10])
def test_parity_distinctness(m):
    assert parity_distinctness_check(m)


@pytest.mark.parametrize("m", range(2, 11))
def test_box_bitstrings_realize_half_the_qubit_basis(m):
    # the 2^(M-1) box-bit-string removals of the depth-1 top diagram are
    # themselves depth-1 patterns, and their parity images are distinct
    from itertools import product
    top = tuple(range(m)) + (m - 1,)
    basis = set(catalan_basis(m, m - 1, 1))
    images = set()
    for free in product((0, 1), repeat=m - 1):
        lowered = box_bitstring_apply(top, (0,) + free + (0,))
        pattern = tuple(b - a for a, b in zip(lowered, lowered[1:]))[::-1]
        assert pattern in basis
        images.add(tuple(v % 2 for v in pattern))
    assert len(images) == 2 ** (m - 1)
    # hence the parity image of the depth-1 set covers at least half
    all_images = {tuple(v % 2 for v in p) for p in basis}
    assert len(all_images) >= 2 ** (m - 1)


def incomparable_pairs(lattice):
    """Oracle: B_2 sublattices are exactly the incomparable vertex pairs."""
    count = 0
    for a, b in combinations(lattice.vertices, 2):
        le = all(x <= y for x, y in zip(a, b))
        ge = all(x >= y for x, y in zip(a, b))
        if not le and not ge:
            count += 1
    return count


def test_boolean_squares_in_depth1_lattice():
    lattice = young_lattice((1, 2, 3))
    assert count_boolean_sublattices(lattice, 2) == 21
    assert count_boolean_sublattices(lattice, 2) == incomparable_pairs(lattice)
    assert count_boolean_sublattices(lattice, 2, unit_boxes=True) == 9
    assert count_boolean_sublattices(lattice, 3) == 1
    assert count_boolean_sublattices(lattice, 3, unit_boxes=True) == 1


def test_boolean_counts_published_lattices():
    lattice = young_lattice((2, 3, 4))
    assert count_boolean_sublattices(lattice, 3, unit_boxes=True) == 4
    # the general sublattice count also admits taller removable pieces
    assert count_boolean_sublattices(lattice, 3) == 7
    small = young_lattice((2, 3))
    assert count_boolean_sublattices(small, 2) == 5
    assert count_boolean_sublattices(small, 2) == incomparable_pairs(small)
    assert count_boolean_sublattices(small, 2, unit_boxes=True) == 3


def test_ordinal_sum_examples():
    assert ordinal_sum_decomposition(catalan_lattice(3, 3, 1)).factors == [
        2, 2, 1]
    assert ordinal_sum_decomposition(catalan_lattice(2, 2, 1)).factors == [
        1, 1]
    empty = ordinal_sum_decomposition(young_lattice((0,)))
    assert empty.factors == [] and not empty.residual


def test_ordinal_sum_multiplicities():
    decomposition = ordinal_sum_decomposition(catalan_lattice(3, 3, 1))
    assert decomposition.multiplicities == {2: 2, 1: 1}
    assert not decomposition.residual


def test_ordinal_sum_residual_on_broken_chain():
    from shallowboson.young import YoungLattice
    # bottom and top with no single-box path between them
    vertices = [(0, 0), (1, 1)]
    broken = YoungLattice((1, 1), vertices, [], set(vertices))
    decomposition = ordinal_sum_decomposition(broken)
    assert decomposition.residual
    assert decomposition.factors == []
    assert decomposition.residual_vertex == (1, 1)


def test_ordinal_sum_depth1_general():
    for m in range(2, 7):
        for n in (m, m - 1):
            decomposition = ordinal_sum_decomposition(
                catalan_lattice(m, n, 1))
            assert not decomposition.residual
            # glued factors cover a chain from bottom to top
            assert decomposition.factors[0] == m - 1 or m == 2


def test_exports_carry_three_labels():
    lattice = catalan_lattice(4, 4, 1)
    text = export_lattice_text(lattice, 4)
    assert text.count("vertex ") == 28
    assert "pattern=" in text and "bits=" in text and "diagram=" in text
    doc = export_lattice_json(lattice, 4)
    assert len(doc["vertices"]) == 28
    assert all(len(v["pattern"]) == 4 for v in doc["vertices"])
    assert all(len(e) == 2 for e in doc["edges"])
