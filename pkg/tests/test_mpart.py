"""The deep-socle search engine: stability, orbits, regions, and exact counts."""

import itertools

import pytest

from hdpart.lattice import ConstraintSpec, ResourceCeilingError, count_constrained
from hdpart.mpart import (
    AlphaQuery,
    alpha,
    alpha_by_hilbert,
    alpha_count,
    alpha_tables,
    alpha_targeted,
    alpha_without_orbit_reduction,
    bounding_region,
    full_support_reps,
    is_m_stable,
    orbit_reps,
    quadric_points,
    support_variables,
)


def test_quadric_points():
    assert quadric_points(2) == ((0, 2), (1, 1), (2, 0))
    assert len(quadric_points(5)) == 15


def test_stability_examples():
    assert is_m_stable([(2, 0)], 2)
    assert not is_m_stable([(1, 1)], 2)
    assert is_m_stable([(2, 0), (1, 1)], 2)


def test_stability_rejects_non_quadrics():
    with pytest.raises(ValueError):
        is_m_stable([(1, 0)], 2)


def test_orbit_reps_k2_q2():
    reps = orbit_reps(2, 2)
    assert len(reps) == 2
    assert sum(o.orbit_size for o in reps) == 3
    sizes = {o.rep: o.orbit_size for o in reps}
    assert sizes[((0, 2), (2, 0))] == 1  # the two squares
    assert sizes[((0, 2), (1, 1))] == 2  # square plus product


def test_orbit_reps_k1():
    reps = orbit_reps(1, 1)
    assert len(reps) == 1 and reps[0].orbit_size == 1 and reps[0].rep == ((2,),)


def test_orbit_rep_counts_against_direct_enumeration():
    for k, q in [(2, 1), (2, 2), (3, 2), (3, 3), (3, 4)]:
        stable = [
            c
            for c in itertools.combinations(quadric_points(k), q)
            if is_m_stable(c, k)
        ]
        assert sum(o.orbit_size for o in orbit_reps(k, q)) == len(stable), (k, q)


def test_bounding_region_examples():
    full = bounding_region(quadric_points(2), 3)
    assert len(full.all_points()) == 10  # all monomials of degree <= 3 in 2 variables
    partial = bounding_region([(1, 1), (2, 0)], 3)
    assert partial.cells == ((2, 1), (3, 0))
    chain = bounding_region([(2,)], 5)
    assert chain.cells == ((3,), (4,), (5,))


def test_bounding_region_is_union_of_admissible_members():
    # region = union of all partitions with the given quadric layer and length
    U = [(2, 0), (1, 1)]
    region = bounding_region(U, 4)
    region_pts = set(region.all_points())
    union = set()
    from hdpart.lattice import Partition, hilbert_samuel, iter_partitions

    for pts in iter_partitions(2, 8):
        part = Partition(2, pts)
        if part.layer(2) == tuple(sorted(U)) and (part.length or 0) <= 4:
            union |= set(pts)
    assert union <= region_pts
    # and every region cell is reachable: the region itself is such a partition
    assert set(
        bounding_region(U, 4).all_points()
    ) == region_pts


def test_alpha_known_small_values():
    assert alpha_count(2, 2, 1) == 2
    assert alpha_count(1, 1, 3) == 1
    assert alpha_count(3, 2, 5) == 0  # fewer quadrics than variables
    assert alpha_count(0, 0, 0) == 1
    assert alpha_count(2, 2, 0) == 0


def test_alpha_against_oracle_small():
    for k in (1, 2, 3):
        for q in range(1, 5):
            for m in range(1, 5):
                spec = ConstraintSpec(
                    size=1 + k + q + m,
                    embedding_dim=k,
                    quadric_count=q,
                    tail_mass=m,
                    min_socle_degree=3,
                )
                assert alpha_count(k, q, m) == count_constrained(k, spec), (k, q, m)


@pytest.mark.slow
def test_alpha_against_oracle_full_range():
    for k in (1, 2, 3):
        for q in range(1, 7):
            for m in range(1, 7):
                spec = ConstraintSpec(
                    size=1 + k + q + m,
                    embedding_dim=k,
                    quadric_count=q,
                    tail_mass=m,
                    min_socle_degree=3,
                )
                assert alpha_count(k, q, m) == count_constrained(k, spec), (k, q, m)


def test_orbit_weighting_soundness():
    for k, q, m in [(2, 2, 3), (2, 3, 2), (3, 3, 2), (3, 4, 3)]:
        assert alpha_count(k, q, m) == alpha_without_orbit_reduction(k, q, m)


def test_length_additivity():
    k, q, m = 3, 4, 5
    total = alpha_count(k, q, m)
    by_length = [alpha_count(k, q, m, length=l) for l in range(3, m + 3)]
    assert sum(by_length) == total
    assert alpha_count(k, q, m, length=2) == 0
    assert alpha_count(k, q, m, length=m + 3) == 0


def test_profile_additivity():
    k, q, m, length = 3, 5, 6, 4
    table = alpha_tables(k, q, m, length_cap=length)
    refined = alpha_count(k, q, m, length=length)
    by_profile = sum(
        v
        for (size, maxdeg, profile), v in table.items()
        if size == m and maxdeg == length
    )
    assert by_profile == refined
    # and each bucket matches the direct profile query
    for (size, maxdeg, profile), v in sorted(table.items()):
        if size != m or maxdeg != length:
            continue
        h = (1, k, q) + profile
        assert alpha_by_hilbert(h) == v, h


def test_alpha_by_hilbert_examples():
    assert alpha_by_hilbert((1, 3, 5, 7, 6)) == 504
    assert alpha_by_hilbert((1, 3, 5, 6, 7)) == 27
    assert alpha_by_hilbert((1, 3, 3, 3)) == 10


def test_macaulay_pruning_is_conservative():
    for k, q, m in [(2, 3, 4), (3, 4, 5), (3, 5, 4)]:
        with_bound = alpha_targeted(k, q, m, use_macaulay=True)
        without = alpha_targeted(k, q, m, use_macaulay=False)
        assert with_bound == without == alpha_count(k, q, m)


def test_parallel_determinism():
    base = alpha_count(3, 4, 6)
    assert alpha_count(3, 4, 6, workers=2) == base
    assert alpha_count(3, 4, 6, workers=4) == base


def test_node_ceiling():
    with pytest.raises(ResourceCeilingError):
        alpha_count(3, 4, 8, node_ceiling=100)


def test_support_filtering():
    # configurations not touching every variable contribute nothing at level k
    reps2 = orbit_reps(2, 1)
    assert any(o.support == 1 for o in reps2)  # the lone square is stable
    assert all(o.support == 2 for o in full_support_reps(2, 1)) and not full_support_reps(2, 1)
    assert alpha_count(2, 1, 5) == 0


def test_query_validation():
    with pytest.raises(ValueError):
        AlphaQuery(3, 5, 13, profile=(1, 3, 5, 7, 7))  # tail sums to 14, not 13
    with pytest.raises(ValueError):
        AlphaQuery(3, 5, 13, length=3, profile=(1, 3, 5, 7, 6))  # length mismatch
