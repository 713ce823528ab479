from fractions import Fraction

import pytest
from sympy import divisors

from anosovlab.errors import InvalidInputError, UnknownOrbitError
from anosovlab.linalg import Hyperbolic2, IntMat
from anosovlab.torus import (
    OrbitCatalog,
    TorusPoint,
    census,
    enumerate_fixed_points,
    enumerate_orbits,
    enumeration_cost,
    fixed_point_count,
    mobius,
    orbit_of,
)

CAT = Hyperbolic2.from_rows([[2, 1], [1, 1]])
MATRICES = [CAT, Hyperbolic2.from_rows([[3, 2], [1, 1]]), Hyperbolic2.from_rows([[5, 2], [2, 1]])]


def _brute_force_fixed_points(a: Hyperbolic2, n: int):
    # every fixed point of A^n has a denominator dividing F(n) = |det(A^n - I)|
    q = fixed_point_count(a, n)
    shifted = a.power(n) - IntMat.identity(2)
    points = set()
    for i in range(q):
        for j in range(q):
            x, y = shifted.apply((i, j))
            if x % q == 0 and y % q == 0:
                points.add(TorusPoint.reduced(i, j, q))
    return sorted(points, key=lambda p: p.key)


def test_fixed_point_count_is_trace_minus_two():
    lucas = [2, 1]
    while len(lucas) <= 21:
        lucas.append(lucas[-1] + lucas[-2])
    for n in range(1, 11):
        assert fixed_point_count(CAT, n) == CAT.power(n).trace() - 2 == lucas[2 * n] - 2


def test_fixed_points_match_brute_force():
    for n in range(1, 6):
        assert enumerate_fixed_points(CAT, n) == _brute_force_fixed_points(CAT, n)
    assert enumerate_fixed_points(MATRICES[1], 2) == _brute_force_fixed_points(MATRICES[1], 2)


def test_mobius():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_mobius_consistency():
    for a in MATRICES:
        result = census(a, 10)
        for n in range(1, 11):
            assert sum(d * result.orbit_counts[d - 1] for d in divisors(n)) == fixed_point_count(a, n)


def test_census_cat_map():
    result = census(CAT, 3)
    assert result.fixed_counts == (1, 5, 16)
    assert result.orbit_counts == (1, 2, 5)
    assert result.cumulative == 8
    assert result.rows()[-1] == {"n": 3, "fixed": 16, "least": 15, "orbits": 5, "cumulative": 8}
    with pytest.raises(InvalidInputError):
        result.cumulative_at(4)


def test_census_counts_enumerated_orbits():
    for a in MATRICES[:2]:
        orbits = enumerate_orbits(a, 4)
        counts = census(a, 4).orbit_counts
        for n in range(1, 5):
            assert sum(1 for o in orbits if o.period == n) == counts[n - 1]


def test_orbit_ids_and_representatives():
    orbits = enumerate_orbits(CAT, 2)
    assert [o.orbit_id for o in orbits] == ["p1-i0", "p2-i0", "p2-i1"]
    assert orbits[0].representative == TorusPoint(0, 0, 1)
    assert orbits[1].points == (TorusPoint(1, 2, 5), TorusPoint(4, 3, 5))
    assert orbits[2].points == (TorusPoint(2, 4, 5), TorusPoint(3, 1, 5))
    assert orbits[1].to_dict()["representative"] == ["1/5", "2/5"]


def test_orbit_of_starts_at_least_point():
    orbit = orbit_of(CAT, TorusPoint(4, 3, 5))
    assert orbit.representative == TorusPoint(1, 2, 5)
    assert TorusPoint(4, 3, 5) in orbit


def test_enumeration_is_thread_independent():
    assert enumerate_orbits(CAT, 5, threads=1) == enumerate_orbits(CAT, 5, threads=4)
    assert [o.orbit_id for o in enumerate_orbits(CAT, 5, threads=4)] == [
        o.orbit_id for o in enumerate_orbits(CAT, 5)
    ]


def test_catalog_lookup():
    catalog = OrbitCatalog(CAT, 3)
    assert len(catalog) == 8
    assert catalog.get("p3-i4").period == 3
    assert catalog.containing(TorusPoint(3, 1, 5)).orbit_id == "p2-i1"
    assert len(catalog.of_period(3)) == 5
    with pytest.raises(UnknownOrbitError, match="unknown orbit 'p2-i7'"):
        catalog.get("p2-i7")
    with pytest.raises(UnknownOrbitError):
        catalog.get("p4-i0")
    with pytest.raises(InvalidInputError):
        catalog.get("q1")


def test_torus_point_reduction():
    assert TorusPoint.reduced(7, -3, 10) == TorusPoint(7, 7, 10)
    assert TorusPoint.reduced(2, 4, 6) == TorusPoint(1, 2, 3)
    assert TorusPoint.from_fractions(Fraction(1, 2), Fraction(5, 3)) == TorusPoint(3, 4, 6)
    with pytest.raises(InvalidInputError):
        TorusPoint(2, 0, 4)


def test_matrix_permutes_its_fixed_points():
    for a in MATRICES:
        for n in range(1, 5):
            points = enumerate_fixed_points(a, n)
            assert len(points) == fixed_point_count(a, n)
            assert sorted((p.apply(a.m) for p in points), key=lambda p: p.key) == points


def test_enumeration_limit():
    assert enumeration_cost(CAT, 3) == 1 + 5 + 16
    assert len(enumerate_orbits(CAT, 3, limit=22)) == 8
    with pytest.raises(InvalidInputError, match="visits 22 points, above the limit of 21"):
        enumerate_orbits(CAT, 3, limit=21)
    with pytest.raises(InvalidInputError):
        OrbitCatalog(CAT, 3, limit=10)
    with pytest.raises(InvalidInputError):
        OrbitCatalog(CAT, 20)
    assert census(CAT, 20).cumulative > 10**6
