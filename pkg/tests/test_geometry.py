from fractions import Fraction as F

import pytest

from anosovlab.errors import DegenerateGeometryError
from anosovlab.geometry import (
    lattice_crossings,
    orientation,
    signed_crossing,
    torus_distance,
    touches,
    translates,
)

ORIGIN = (F(0), F(0))
ARC = (ORIGIN, (F(1, 2), F(0)))


def _square(center, r):
    cx, cy = center
    corners = [(cx + r, cy - r), (cx + r, cy + r), (cx - r, cy + r), (cx - r, cy - r)]
    return list(zip(corners, corners[1:] + corners[:1]))


def test_orientation():
    assert orientation(ORIGIN, (F(1), F(0)), (F(0), F(1))) == 1
    assert orientation(ORIGIN, (F(0), F(1)), (F(1), F(0))) == -1
    assert orientation(ORIGIN, (F(1), F(1)), (F(2), F(2))) == 0
    assert touches(((F(0), F(0)), (F(2), F(2))), (F(1), F(1)))
    assert not touches(((F(0), F(0)), (F(2), F(2))), (F(3), F(3)))


def test_counterclockwise_loop_around_puncture():
    loop = _square(ORIGIN, F(1, 5))
    assert sum(signed_crossing(seg, ARC) for seg in loop) == 1
    reversed_loop = [(b, a) for a, b in reversed(loop)]
    assert sum(signed_crossing(seg, ARC) for seg in reversed_loop) == -1


def test_loop_away_from_puncture():
    loop = _square((F(3, 10), F(3, 10)), F(1, 10))
    assert sum(signed_crossing(seg, ARC) for seg in loop) == 0


def test_degenerate_positions():
    with pytest.raises(DegenerateGeometryError, match="puncture"):
        signed_crossing(((F(-1), F(0)), (F(1), F(1, 3))), ((F(0), F(1, 6)), (F(1), F(1, 6))))
    with pytest.raises(DegenerateGeometryError, match="hub"):
        signed_crossing(((F(1, 2), F(-1)), (F(1, 2), F(1))), ARC)
    with pytest.raises(DegenerateGeometryError, match="arc"):
        signed_crossing(((F(1, 4), F(0)), (F(1, 4), F(1))), ARC)


def test_lattice_crossings():
    # a horizontal loop of the torus crosses the vertical arcs of every translate once
    arc = ((F(1, 3), F(1, 5)), (F(1, 3), F(3, 5)))
    loop = ((F(0), F(2, 5)), (F(1), F(2, 5)))
    assert lattice_crossings(loop, arc) == -1
    shifted = ((F(5), F(2, 5)), (F(6), F(2, 5)))
    assert lattice_crossings(shifted, arc) == -1
    assert (5, 0) in set(translates(shifted, arc))


def test_torus_distance():
    assert torus_distance((F(1, 10), F(0)), (F(9, 10), F(1, 2))) == F(1, 2)
    assert torus_distance((F(1, 10), F(1, 10)), (F(9, 10), F(0))) == F(1, 5)
    assert torus_distance((F(3, 2), F(1, 3)), (F(1, 2), F(4, 3))) == 0
