from itertools import combinations

import pytest

from anosovlab.errors import InvalidInputError, OverlappingOrbitsError, SurgeryLocusError
from anosovlab.linalg import Cokernel, Hyperbolic2
from anosovlab.surgery import (
    ArcSystem,
    SurgeryMove,
    SurgeryPath,
    core_orbit,
    h1_complement,
    h1_surgered,
    orbit_transport,
    suspension_fingerprint_check,
)
from anosovlab.suspension import build_suspension

CAT = build_suspension(Hyperbolic2.from_rows([[2, 1], [1, 1]]))
SHEARED = build_suspension(Hyperbolic2.from_rows([[3, 2], [1, 1]]))


def _path(flow, *moves):
    catalog = flow.catalog(3)
    return SurgeryPath(flow, tuple(SurgeryMove(catalog.get(orbit_id), m) for orbit_id, m in moves))


def test_fixed_orbit_complement():
    fixed = CAT.catalog(1).get("p1-i0")
    group, presentation = h1_complement(CAT, [fixed])
    assert str(group) == "Z"
    assert Cokernel(presentation.relations).is_zero(presentation.meridians[0])
    assert presentation.labels == ("t", "a", "b", "c[p1-i0,0]")
    assert presentation.longitudes[0][0] == 1


def test_fixed_orbit_surgery():
    for m in range(-6, 7):
        result = h1_surgered(_path(CAT, ("p1-i0", m)))
        if m == 0:
            assert str(result) == "Z"
            assert suspension_fingerprint_check(result, CAT)
        else:
            assert result.free_rank == 0 and result.torsion_order == abs(m)
            assert str(result) == ("0" if abs(m) == 1 else f"Z/{abs(m)}")
            assert not suspension_fingerprint_check(result, CAT)


def test_zero_slopes_recover_the_suspension():
    for flow, horizon in ((CAT, 3), (SHEARED, 2)):
        orbits = list(flow.catalog(horizon))
        for size in (1, 2, 3):
            for chosen in combinations(orbits, size):
                if sum(o.period for o in chosen) > 6:
                    continue
                path = SurgeryPath(flow, tuple(SurgeryMove(o, 0) for o in chosen))
                assert h1_surgered(path) == flow.h1


def test_arc_systems_agree():
    cases = [
        (CAT, ["p1-i0"]),
        (CAT, ["p2-i0"]),
        (CAT, ["p1-i0", "p2-i1"]),
        (CAT, ["p3-i0"]),
        (CAT, ["p2-i0", "p2-i1"]),
        (CAT, ["p1-i0", "p3-i2"]),
        (SHEARED, ["p1-i0"]),
        (SHEARED, ["p1-i1"]),
        (SHEARED, ["p1-i0", "p1-i1"]),
        (SHEARED, ["p2-i0", "p1-i1"]),
    ]
    for flow, ids in cases:
        catalog = flow.catalog(3)
        orbits = [catalog.get(orbit_id) for orbit_id in ids]
        first, one = h1_complement(flow, orbits, seed=0)
        second, other = h1_complement(flow, orbits, seed=11)
        assert first == second
        assert one.arcs.seed != other.arcs.seed
        for m in (-2, 1, 3):
            slopes = [m] * len(orbits)
            assert one.surgered(slopes) == other.surgered(slopes)


def test_arc_system_is_seeded():
    punctures = [p.as_fractions() for p in CAT.catalog(2).get("p2-i0").points]
    assert ArcSystem.draw(3, punctures, CAT.matrix.m) == ArcSystem.draw(3, punctures, CAT.matrix.m)
    draw = ArcSystem.draw(3, punctures, CAT.matrix.m)
    radius = max(abs(x) for x in draw.pushoff)
    assert 0 < radius < min(abs(a - b) for a, b in zip(*punctures))


def test_overlapping_orbits():
    fixed = CAT.catalog(1).get("p1-i0")
    with pytest.raises(OverlappingOrbitsError):
        SurgeryPath(CAT, (SurgeryMove(fixed, 1), SurgeryMove(fixed, -1)))
    with pytest.raises(OverlappingOrbitsError):
        h1_complement(CAT, [fixed, fixed])
    with pytest.raises(InvalidInputError):
        h1_complement(CAT, [])
    with pytest.raises(InvalidInputError):
        SurgeryPath(CAT, (SurgeryMove(SHEARED.catalog(1).get("p1-i1"), 1),))


def test_orbit_transport():
    path = _path(CAT, ("p1-i0", 2), ("p2-i0", -2))
    far = CAT.catalog(3).get("p3-i1")
    transported = orbit_transport(path, far)
    assert transported.pairing == 3
    assert transported.token == "P(p3-i1)"

    fixed = CAT.catalog(1).get("p1-i0")
    with pytest.raises(SurgeryLocusError) as excinfo:
        orbit_transport(path, fixed)
    assert excinfo.value.core == core_orbit(path, fixed)
    assert excinfo.value.core.token == "core(p1-i0)"
    assert path.label == "(p1-i0, 2) (p2-i0, -2)"


def test_slope_relations_are_additive():
    catalog = CAT.catalog(2)
    _, presentation = h1_complement(CAT, [catalog.get("p1-i0"), catalog.get("p2-i1")])
    for i in range(2):
        meridian = presentation.meridians[i]
        assert presentation.surgery_relation(i, 0) == meridian
        for m1 in range(-3, 4):
            for m2 in range(-3, 4):
                combined = presentation.surgery_relation(i, m1 + m2)
                first = presentation.surgery_relation(i, m1)
                second = presentation.surgery_relation(i, m2)
                assert combined == tuple(x + y - mu for x, y, mu in zip(first, second, meridian))


def test_puncture_loops_sum_to_zero():
    cases = [(CAT, ["p1-i0", "p3-i2"]), (CAT, ["p2-i0", "p2-i1"]), (SHEARED, ["p1-i1", "p2-i0"])]
    for flow, ids in cases:
        catalog = flow.catalog(3)
        _, presentation = h1_complement(flow, [catalog.get(orbit_id) for orbit_id in ids])
        coker = Cokernel(presentation.relations)
        size = len(presentation.labels)
        assert coker.is_zero((0, 0, 0) + (1,) * (size - 3))

        weighted = [0] * size
        for orbit, meridian in zip(presentation.orbits, presentation.meridians):
            weighted = [w + orbit.period * mu for w, mu in zip(weighted, meridian)]
        assert coker.is_zero(weighted)

        for g, label in enumerate(presentation.labels[3:], start=3):
            orbit_id = label[2:].split(",")[0]
            i = ids.index(orbit_id)
            difference = [0] * size
            difference[g] += 1
            difference = [d - mu for d, mu in zip(difference, presentation.meridians[i])]
            assert coker.is_zero(difference)
