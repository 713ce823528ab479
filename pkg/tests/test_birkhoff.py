import pytest

from anosovlab.birkhoff import (
    CERTIFIED,
    HYPOTHETICAL,
    BirkhoffData,
    BoundaryEntry,
    relabel,
    same_entries,
    section_after_surgery,
    theorem_a_paths,
    theorem_a_prime_data,
    validate,
    validate_all,
)
from anosovlab.errors import InvalidInputError
from anosovlab.linalg import Hyperbolic2
from anosovlab.surgery import SurgeryMove, SurgeryPath, core_orbit
from anosovlab.suspension import build_suspension, orbit_class, per_z

CAT = build_suspension(Hyperbolic2.from_rows([[2, 1], [1, 1]]))
SHEARED = build_suspension(Hyperbolic2.from_rows([[3, 2], [1, 1]]))
SLOPES = [m for m in range(-10, 11) if m]


def _pairs(flow, horizon):
    orbits = list(flow.catalog(horizon))
    return [(g, a) for g in orbits for a in orbits if g != a]


def test_theorem_a_prime_data():
    catalog = CAT.catalog(2)
    fixed, period_two = catalog.get("p1-i0"), catalog.get("p2-i0")
    data = theorem_a_prime_data(fixed, period_two, 5)
    assert [e.to_dict() for e in data.entries] == [
        {"orbit": "p1-i0", "p": 2, "m": -5},
        {"orbit": "p2-i0", "p": 1, "m": 5},
    ]
    assert data.genus == 1 and data.label == CERTIFIED
    assert data.euler_characteristic == -3
    assert theorem_a_prime_data(fixed, period_two, 2, m0=3).label == HYPOTHETICAL

    with pytest.raises(InvalidInputError):
        theorem_a_prime_data(fixed, fixed, 1)
    with pytest.raises(InvalidInputError):
        theorem_a_prime_data(fixed, period_two, 0)


def test_every_cat_map_loop_validates():
    triples = [(g, a, m) for g, a in _pairs(CAT, 5) for m in SLOPES]
    assert len(triples) == 42 * 41 * 20
    reports = validate_all(CAT, triples, threads=4)
    assert len(reports) == len(triples)
    for (gamma, alpha, m), report in zip(triples, reports):
        assert report.fiber_sum == 0
        assert report.euler == report.expected_euler == -(per_z(gamma) + per_z(alpha))
        assert report.passed


def test_cat_map_validates_to_period_five():
    orbits = list(CAT.catalog(5))
    fixed = orbits[0]
    for alpha in orbits[1:]:
        for m in SLOPES:
            data = theorem_a_prime_data(fixed, alpha, m)
            fiber = sum(e.p * per_z(e.orbit) * e.m for e in data.entries)
            assert fiber == 0
            assert validate(data, CAT).passed


def test_horizontal_check_on_sheared_matrix():
    excluded = 0
    for gamma, alpha in _pairs(SHEARED, 3):
        h_gamma = orbit_class(SHEARED, gamma).horizontal[0]
        h_alpha = orbit_class(SHEARED, alpha).horizontal[0]
        for m in (-3, -2, -1, 1, 2, 3):
            report = validate(theorem_a_prime_data(gamma, alpha, m), SHEARED)
            assert report.fiber_ok and report.euler_ok and report.multiplicities_nonzero
            expected = m * (per_z(gamma) * h_alpha - per_z(alpha) * h_gamma) % 2 == 0
            assert report.horizontal_ok == expected
            assert report.to_dict()["excluded_from_candidacy"] == (not expected)
            excluded += not expected
    assert excluded > 0


def test_sheared_loops_to_period_five():
    orbits = list(SHEARED.catalog(5))
    assert len(orbits) == 2 + 5 + 16 + 45 + 144
    parity = {o: orbit_class(SHEARED, o).horizontal[0] for o in orbits}

    def expected(gamma, alpha, m):
        return m * (per_z(gamma) * parity[alpha] - per_z(alpha) * parity[gamma]) % 2 == 0

    # every check is linear in m, so m = 1, 2 settle each unordered pair
    triples = [(g, a, m) for i, g in enumerate(orbits) for a in orbits[i + 1 :] for m in (1, 2)]
    for (gamma, alpha, m), report in zip(triples, validate_all(SHEARED, triples)):
        assert report.fiber_ok and report.euler_ok and report.multiplicities_nonzero
        assert report.horizontal_ok == expected(gamma, alpha, m)

    short = [o for o in orbits if o.period <= 3]
    triples = [(g, a, m) for g in short for a in short if g != a for m in SLOPES]
    for (gamma, alpha, m), report in zip(triples, validate_all(SHEARED, triples)):
        assert report.fiber_ok and report.euler_ok
        assert report.horizontal_ok == expected(gamma, alpha, m)
        swapped = validate(theorem_a_prime_data(alpha, gamma, -m), SHEARED)
        assert swapped.to_dict() == report.to_dict()


def test_section_after_surgery():
    catalog = CAT.catalog(2)
    fixed, period_two = catalog.get("p1-i0"), catalog.get("p2-i0")
    path = SurgeryPath(CAT, (SurgeryMove(fixed, 3), SurgeryMove(period_two, 0)))
    section = section_after_surgery(path)
    assert [e.to_dict() for e in section.entries] == [{"orbit": "core(p1-i0)", "p": 1, "m": -3}]
    assert [m.orbit for m in section.closed_moves] == [period_two]
    assert section.to_dict()["closed_moves"][0]["note"] == "not a genuine Birkhoff boundary"

    closed = section_after_surgery(SurgeryPath(CAT, (SurgeryMove(fixed, 0),)))
    assert closed.entries == () and closed.euler_characteristic == 0

    with pytest.raises(InvalidInputError):
        section_after_surgery(SurgeryPath(CAT, ()))
    with pytest.raises(InvalidInputError, match="relabel"):
        validate(section, CAT)


def test_theorem_a_paths_match_section_data():
    for flow in (CAT, SHEARED):
        orbits = list(flow.catalog(2))
        for gamma, alpha in [(orbits[0], orbits[1]), (orbits[1], orbits[-1])]:
            for m in (-4, 1, 7):
                forward, swapped = theorem_a_paths(flow, gamma, alpha, m)
                assert [move.slope for move in forward.path.moves] == [m, -m]
                assert forward.path.orbits == [gamma, alpha]
                assert swapped.path.orbits == [alpha, gamma]
                assert same_entries(forward.section(), theorem_a_prime_data(alpha, gamma, m))
                assert same_entries(swapped.section(), theorem_a_prime_data(gamma, alpha, m))
                assert forward.to_dict()["relabel"] == {
                    f"core({gamma.orbit_id})": alpha.orbit_id,
                    f"core({alpha.orbit_id})": gamma.orbit_id,
                }


def test_relabel_keeps_unmapped_orbits():
    catalog = CAT.catalog(2)
    fixed, period_two = catalog.get("p1-i0"), catalog.get("p2-i0")
    path = SurgeryPath(CAT, (SurgeryMove(fixed, 2),))
    core = core_orbit(path, fixed)
    data = BirkhoffData((BoundaryEntry(core, 1, -2), BoundaryEntry(period_two, 1, 2)))
    relabeled = relabel(data, {core: fixed})
    assert [e.orbit for e in relabeled.entries] == [fixed, period_two]
    assert not validate(relabeled, CAT).fiber_ok
    with pytest.raises(InvalidInputError):
        BoundaryEntry(fixed, 0, 1)
