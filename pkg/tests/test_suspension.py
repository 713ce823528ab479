import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from anosovlab.conjugacy import rl_decompose
from anosovlab.errors import InvalidInputError, StandingAssumptionError
from anosovlab.linalg import AbelianGroup, Hyperbolic2
from anosovlab.suspension import (
    build_suspension,
    class_difference,
    displacement,
    orbit_class,
    per_z,
    reverse,
)
from anosovlab.torus import TorusPoint, census

CAT = Hyperbolic2.from_rows([[2, 1], [1, 1]])


def _oracle_h1(rows):
    a = Matrix(rows) - Matrix.eye(2)
    d = smith_normal_form(a, domain=ZZ)
    factors = sorted(abs(d[i, i]) for i in range(2) if abs(d[i, i]) > 1)
    free = sum(1 for i in range(2) if d[i, i] == 0)
    return AbelianGroup(free + 1, tuple(factors))


def test_h1_of_suspensions():
    assert str(build_suspension(CAT).h1) == "Z"
    assert str(build_suspension(Hyperbolic2.from_rows([[3, 2], [1, 1]])).h1) == "Z + Z/2"
    for rows in ([[2, 1], [1, 1]], [[3, 2], [1, 1]], [[5, 2], [2, 1]], [[7, 4], [5, 3]], [[1, -3], [-2, 7]]):
        assert build_suspension(Hyperbolic2.from_rows(rows)).h1 == _oracle_h1(rows)


def test_standing_assumptions():
    with pytest.raises(StandingAssumptionError):
        build_suspension(Hyperbolic2.from_rows([[3, 1], [1, 0]]))
    with pytest.raises(StandingAssumptionError):
        build_suspension(Hyperbolic2.from_rows([[-2, 1], [1, -1]]))


def test_orbit_classes():
    flow = build_suspension(Hyperbolic2.from_rows([[3, 2], [1, 1]]))
    catalog = flow.catalog(2)
    origin = catalog.get("p1-i0")
    assert per_z(origin) == 1
    assert orbit_class(flow, origin).to_dict() == {"fiber_degree": 1, "horizontal": [0]}

    other = catalog.get("p1-i1")
    assert other.representative == TorusPoint(0, 1, 2)
    assert displacement(flow.matrix, other) == (1, 0)
    cls = orbit_class(flow, other)
    assert cls.fiber_degree == 1 and cls.horizontal == (1,)
    assert class_difference(flow, other.representative, origin.representative) == cls.horizontal

    for orbit in catalog.of_period(2):
        assert orbit_class(flow, orbit).fiber_degree == 2

    with pytest.raises(InvalidInputError):
        class_difference(flow, TorusPoint(1, 2, 5), origin.representative)


def test_reverse_flow():
    reversal = reverse(build_suspension(CAT))
    assert str(reversal.word) == "R^1L^1"
    assert reversal.target.matrix.m == reversal.conjugator @ CAT.inverse().m @ reversal.conjugator.unimodular_inverse()
    assert reversal.census(6).orbit_counts == census(CAT, 6).orbit_counts

    pairs = reversal.correspondence(4)
    assert len(pairs) == census(CAT, 4).cumulative
    assert all(per_z(source) == per_z(target) for source, target in pairs)
    assert len({target for _, target in pairs}) == len(pairs)


def test_reverse_of_irreversible_matrix():
    a = Hyperbolic2.from_rows([[43, 10], [30, 7]])
    reversal = reverse(build_suspension(a))
    assert str(reversal.word) == "R^2L^1R^4L^3"
    assert reversal.census(3).orbit_counts == census(a, 3).orbit_counts


def test_reversing_twice_returns_the_flow():
    for rows, horizon in (([[2, 1], [1, 1]], 4), ([[43, 10], [30, 7]], 2)):
        flow = build_suspension(Hyperbolic2.from_rows(rows))
        first = reverse(flow)
        second = reverse(first.target)
        assert second.target.matrix == flow.matrix
        assert second.word == rl_decompose(flow.matrix)
        assert second.census(horizon).orbit_counts == census(flow.matrix, horizon).orbit_counts

        composite = second.conjugator @ first.conjugator
        assert composite @ flow.matrix.m == flow.matrix.m @ composite

        catalog = flow.catalog(horizon)
        images = dict(second.correspondence(horizon))
        round_trip = {source: images[middle] for source, middle in first.correspondence(horizon)}
        assert sorted(round_trip, key=lambda o: o.sort_key) == catalog.orbits
        assert len(set(round_trip.values())) == len(catalog)
        for source, image in round_trip.items():
            assert image.period == source.period
            assert image == catalog.containing(source.representative.apply(composite))
