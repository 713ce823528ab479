"""Exact rational segment predicates on the plane and on the torus R^2/Z^2."""

from fractions import Fraction
from math import ceil, floor
from typing import Iterable, Tuple

from anosovlab.errors import DegenerateGeometryError

Point = Tuple[Fraction, Fraction]
Segment = Tuple[Point, Point]


def cross(u: Point, v: Point) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def add(p: Point, q: Point) -> Point:
    return (p[0] + q[0], p[1] + q[1])


def sign(x) -> int:
    return (x > 0) - (x < 0)


def orientation(p: Point, q: Point, r: Point) -> int:
    """+1 if ``p, q, r`` turn left, -1 if they turn right, 0 if collinear."""
    return sign(cross(sub(q, p), sub(r, p)))


def on_segment(p: Point, q: Point, r: Point) -> bool:
    """For collinear ``p, q, r``: whether ``r`` lies on the closed segment ``[p, q]``."""
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])


def touches(segment: Segment, point: Point) -> bool:
    p, q = segment
    return orientation(p, q, point) == 0 and on_segment(p, q, point)


def signed_crossing(curve: Segment, arc: Segment) -> int:
    """
    Signed transverse crossing of a curve segment with an arc.

    The arc runs from its start (a puncture) to its end (the hub). The sign
    is that of ``arc direction x curve direction``, so a counterclockwise loop
    around the arc's start crosses it with sign +1.

    Args:
        curve (Segment): A piece of a curve in the punctured surface.
        arc (Segment): A puncture-to-hub arc.

    Returns:
        int: -1, 0 or +1.

    Raises:
        DegenerateGeometryError: If the curve passes through an arc endpoint,
            has an endpoint on the arc, or overlaps it.
    """

    s0, s1 = curve
    t0, t1 = arc
    o1 = orientation(t0, t1, s0)
    o2 = orientation(t0, t1, s1)
    o3 = orientation(s0, s1, t0)
    o4 = orientation(s0, s1, t1)

    if o3 == 0 and on_segment(s0, s1, t0):
        raise DegenerateGeometryError(f"curve segment {_fmt(curve)} meets a puncture")
    if o4 == 0 and on_segment(s0, s1, t1):
        raise DegenerateGeometryError(f"curve segment {_fmt(curve)} passes through the hub")
    if (o1 == 0 and on_segment(t0, t1, s0)) or (o2 == 0 and on_segment(t0, t1, s1)):
        raise DegenerateGeometryError(f"curve vertex of {_fmt(curve)} lies on an arc")

    if o1 * o2 < 0 and o3 * o4 < 0:
        return sign(cross(sub(t1, t0), sub(s1, s0)))
    return 0


def translates(curve: Segment, arc: Segment) -> Iterable[Tuple[int, int]]:
    """Lattice vectors ``m`` for which ``arc + m`` can meet ``curve``."""
    (s0, s1), (t0, t1) = curve, arc
    lo_x = floor(min(s0[0], s1[0]) - max(t0[0], t1[0]))
    hi_x = ceil(max(s0[0], s1[0]) - min(t0[0], t1[0]))
    lo_y = floor(min(s0[1], s1[1]) - max(t0[1], t1[1]))
    hi_y = ceil(max(s0[1], s1[1]) - min(t0[1], t1[1]))
    for mx in range(lo_x, hi_x + 1):
        for my in range(lo_y, hi_y + 1):
            yield mx, my


def lattice_crossings(curve: Segment, arc: Segment) -> int:
    """Signed crossings of ``curve`` with every lattice translate of ``arc``."""
    total = 0
    t0, t1 = arc
    for m in translates(curve, arc):
        total += signed_crossing(curve, (add(t0, m), add(t1, m)))
    return total


def torus_distance(p: Point, q: Point) -> Fraction:
    """Sup-norm distance between the classes of ``p`` and ``q`` in R^2/Z^2."""
    out = Fraction(0)
    for a, b in zip(p, q):
        d = (a - b) % 1
        out = max(out, min(d, 1 - d))
    return out


def _fmt(segment: Segment) -> str:
    (a, b), (c, d) = segment
    return f"[({a}, {b}) -> ({c}, {d})]"
