"""Homology of orbit complements and of integral surgeries on suspension flows.

Removing the orbits ``gamma_1 .. gamma_r`` from ``M_A`` leaves the mapping
torus of ``A`` restricted to the punctured fiber ``F = T^2 - P``, where ``P``
holds every point of every removed orbit. With generators ``t`` (a vertical
loop), ``a``, ``b`` (the torus directions) and one small counterclockwise loop
``c_g`` around each puncture, ``H1`` of the complement is presented by

    phi(a) - a,  phi(b) - b,  c_{A(g)} - c_g,  sum of all c_g.

The images ``phi(a)``, ``phi(b)`` are found by following the straight loops
``a``, ``b`` under ``A`` and counting their signed crossings with a system
of arcs joining every puncture to a common hub. The difference of two arc
counts is a homotopy invariant in ``F``, and together with the plane
displacement it identifies ``H1(F)`` with ``Z^(k+1)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from anosovlab import geometry
from anosovlab.errors import (
    DegenerateGeometryError,
    InvalidInputError,
    OverlappingOrbitsError,
    SurgeryLocusError,
)
from anosovlab.linalg import AbelianGroup, IntMat, cokernel, stack_columns
from anosovlab.suspension import SuspensionFlow, orbit_class
from anosovlab.torus import PeriodicOrbit, is_orbit_of

MAX_REDRAWS = 64

_HUB_PRIMES = (1009, 1013)
_BASEPOINT_PRIMES = (1019, 1021)
_PUSHOFF_PRIME = 97


@dataclass(frozen=True)
class SurgeryMove:
    """Integral surgery on one orbit.

    Attributes:
        orbit (PeriodicOrbit): The surgered orbit.
        slope (int): The slope ``m``; the filling kills ``meridian + m * longitude``.
    """

    orbit: PeriodicOrbit
    slope: int

    @property
    def label(self) -> str:
        return f"({self.orbit.orbit_id}, {self.slope})"

    def to_dict(self) -> dict:
        return {"orbit": self.orbit.orbit_id, "slope": self.slope}


@dataclass(frozen=True)
class SurgeryPath:
    """Simultaneous surgeries on pairwise distinct orbits of one suspension.

    Attributes:
        base (SuspensionFlow): The flow being surgered.
        moves (tuple): The moves, in the order given.
    """

    base: SuspensionFlow
    moves: Tuple[SurgeryMove, ...]

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))
        seen = set()
        for move in self.moves:
            if move.orbit in seen:
                raise OverlappingOrbitsError(f"orbit {move.orbit.orbit_id} appears twice in the surgery path")
            if not is_orbit_of(self.base.matrix, move.orbit):
                raise InvalidInputError(f"{move.orbit.orbit_id} is not an orbit of {self.base.matrix}")
            seen.add(move.orbit)

    @property
    def orbits(self) -> List[PeriodicOrbit]:
        return [move.orbit for move in self.moves]

    @property
    def slopes(self) -> List[int]:
        return [move.slope for move in self.moves]

    def move_for(self, orbit: PeriodicOrbit) -> Optional[SurgeryMove]:
        return next((move for move in self.moves if move.orbit == orbit), None)

    @property
    def label(self) -> str:
        return " ".join(move.label for move in self.moves)


@dataclass(frozen=True)
class ArcSystem:
    """Random rational choices behind one presentation.

    Attributes:
        seed (int): Seed the choices were drawn from.
        hub (tuple): Common endpoint of all arcs.
        basepoint (tuple): Base point of the loops ``a``, ``b`` and ``t``.
        pushoff (tuple): Offset of the longitude from its orbit.
    """

    seed: int
    hub: geometry.Point
    basepoint: geometry.Point
    pushoff: geometry.Point

    @classmethod
    def draw(cls, seed: int, punctures: Sequence[geometry.Point], matrix: IntMat) -> "ArcSystem":
        rng = random.Random(seed)

        def rational(prime: int) -> Fraction:
            return Fraction(rng.randrange(1, prime), prime)

        hub = (rational(_HUB_PRIMES[0]), rational(_HUB_PRIMES[1]))
        basepoint = (rational(_BASEPOINT_PRIMES[0]), rational(_BASEPOINT_PRIMES[1]))

        gap = Fraction(1)
        for i, p in enumerate(punctures):
            for q in punctures[i + 1 :]:
                gap = min(gap, geometry.torus_distance(p, q))
        norm = max(abs(matrix[0, 0]) + abs(matrix[0, 1]), abs(matrix[1, 0]) + abs(matrix[1, 1]))
        radius = gap / (2 * (norm + 1))

        def offset() -> Fraction:
            k = rng.randrange(1, _PUSHOFF_PRIME)
            return radius * Fraction(k, _PUSHOFF_PRIME) * rng.choice((-1, 1))

        return cls(seed, hub, basepoint, (offset(), offset()))

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "hub": [str(x) for x in self.hub],
            "basepoint": [str(x) for x in self.basepoint],
            "pushoff": [str(x) for x in self.pushoff],
        }


@dataclass(frozen=True)
class ComplementPresentation:
    """Presentation of ``H1(M_A - orbits)``.

    Attributes:
        orbits (tuple): The removed orbits.
        labels (tuple): Generator names: ``t``, ``a``, ``b``, then ``c[orbit-id,j]``.
        relations (IntMat): One column per relation.
        meridians (tuple): Meridian vector of each orbit (its first puncture loop).
        longitudes (tuple): Fiber-framed longitude vector of each orbit.
        arcs (ArcSystem): The choices used.
    """

    orbits: Tuple[PeriodicOrbit, ...]
    labels: Tuple[str, ...]
    relations: IntMat
    meridians: Tuple[Tuple[int, ...], ...]
    longitudes: Tuple[Tuple[int, ...], ...]
    arcs: ArcSystem

    def group(self) -> AbelianGroup:
        return cokernel(self.relations)

    def surgery_relation(self, i: int, slope: int) -> Tuple[int, ...]:
        """``meridian_i + slope * longitude_i``."""
        return tuple(mu + slope * lam for mu, lam in zip(self.meridians[i], self.longitudes[i]))

    def filled(self, slopes: Sequence[int]) -> IntMat:
        if len(slopes) != len(self.orbits):
            raise InvalidInputError(f"expected {len(self.orbits)} slopes, got {len(slopes)}")
        return stack_columns(self.relations, (self.surgery_relation(i, m) for i, m in enumerate(slopes)))

    def surgered(self, slopes: Sequence[int]) -> AbelianGroup:
        return cokernel(self.filled(slopes))

    def to_dict(self) -> dict:
        return {
            "generators": list(self.labels),
            "relations": [list(self.relations.column(j)) for j in range(self.relations.cols)],
            "meridians": [list(v) for v in self.meridians],
            "longitudes": [list(v) for v in self.longitudes],
            "arc_system": self.arcs.to_dict(),
        }


class _Builder:
    """Builds one presentation for a fixed arc system; raises on degenerate geometry."""

    def __init__(self, flow: SuspensionFlow, orbits: Sequence[PeriodicOrbit], arcs: ArcSystem):
        self.a = flow.matrix.m
        self.orbits = list(orbits)
        self.arcs = arcs
        self.lifts: List[geometry.Point] = []
        self.owner: List[Tuple[int, int]] = []
        for i, orbit in enumerate(self.orbits):
            for j, point in enumerate(orbit.points):
                self.lifts.append(point.as_fractions())
                self.owner.append((i, j))
        self.k = len(self.lifts)
        self.index: Dict[Tuple[int, int], int] = {o: g for g, o in enumerate(self.owner)}
        self.arc_segments = [(p, arcs.hub) for p in self.lifts]

    def apply(self, point: geometry.Point) -> geometry.Point:
        return self.a.apply(point)

    def measure(self, segments) -> Tuple[int, int, Tuple[int, ...]]:
        """Plane displacement and arc-count differences of a closed curve."""
        segments = list(segments)
        dx = sum((s1[0] - s0[0] for s0, s1 in segments), Fraction(0))
        dy = sum((s1[1] - s0[1] for s0, s1 in segments), Fraction(0))
        assert dx.denominator == 1 and dy.denominator == 1, "curve does not close up on the torus"
        counts = [sum(geometry.lattice_crossings(seg, arc) for seg in segments) for arc in self.arc_segments]
        return int(dx), int(dy), tuple(w - counts[0] for w in counts[1:])

    def build(self) -> ComplementPresentation:
        x0 = self.arcs.basepoint
        e1, e2 = (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))
        ax0 = self.apply(x0)

        loop_a = [(x0, geometry.add(x0, e1))]
        loop_b = [(x0, geometry.add(x0, e2))]
        image_a = [(ax0, geometry.add(ax0, self.apply(e1)))]
        image_b = [(ax0, geometry.add(ax0, self.apply(e2)))]
        _, _, w_a = self.measure(loop_a)
        _, _, w_b = self.measure(loop_b)

        def coords(value) -> Tuple[int, ...]:
            dx, dy, u = value
            tail = tuple(ui - dx * wa - dy * wb for ui, wa, wb in zip(u, w_a, w_b))
            return (0, dx, dy, 0) + tail

        size = 3 + self.k
        columns = []
        for image, generator in ((image_a, 1), (image_b, 2)):
            column = list(coords(self.measure(image)))
            column[generator] -= 1
            columns.append(column)
        for g, (i, j) in enumerate(self.owner):
            column = [0] * size
            successor = self.index[(i, (j + 1) % self.orbits[i].period)]
            column[3 + successor] += 1
            column[3 + g] -= 1
            columns.append(column)
        columns.append([0, 0, 0] + [1] * self.k)

        meridians, longitudes = [], []
        for i, orbit in enumerate(self.orbits):
            meridian = [0] * size
            meridian[3 + self.index[(i, 0)]] = 1
            meridians.append(tuple(meridian))
            longitude = list(coords(self.measure(self._longitude_polygon(i))))
            longitude[0] = orbit.period
            longitudes.append(tuple(longitude))

        labels = ("t", "a", "b") + tuple(
            f"c[{self.orbits[i].orbit_id},{j}]" for i, j in self.owner
        )
        return ComplementPresentation(
            tuple(self.orbits),
            labels,
            IntMat.from_columns(columns, size),
            tuple(meridians),
            tuple(longitudes),
            self.arcs,
        )

    def _longitude_polygon(self, i: int) -> List[geometry.Segment]:
        """Fiber part of the pushed-off orbit, as a closed polygon on the torus.

        ``t`` is the vertical segment over the base point closed by the fiber
        segment ``A(x0) -> x0``. Sliding each vertical stretch of the pushoff
        over to the base point turns the pushoff into ``period * t`` plus this
        polygon; the short closing segments ``A(p + v) -> A(p) + v`` stay
        next to the puncture, which fixes the fiber framing.
        """
        x0 = self.arcs.basepoint
        ax0 = self.apply(x0)
        v = self.arcs.pushoff
        segments = []
        for j in range(self.orbits[i].period):
            p = self.lifts[self.index[(i, j)]]
            y = geometry.add(p, v)
            ay = self.apply(y)
            segments.extend(
                [
                    (y, x0),
                    (x0, ax0),
                    (ax0, ay),
                    (ay, geometry.add(self.apply(p), v)),
                ]
            )
        return segments


def h1_complement(
    flow: SuspensionFlow, orbits: Sequence[PeriodicOrbit], seed: int = 0
) -> Tuple[AbelianGroup, ComplementPresentation]:
    """
    First homology of ``M_A`` with the given orbits removed.

    Args:
        flow (SuspensionFlow): The suspension.
        orbits (Sequence[PeriodicOrbit]): Pairwise distinct orbits, at least one.
        seed (int): Seed for the arc system; degenerate draws move on to the next seed.

    Returns:
        tuple: The group in invariant-factor form and its presentation.

    Raises:
        OverlappingOrbitsError: If an orbit is given twice.

    Example:
        >>> flow = build_suspension(Hyperbolic2.from_rows([[2, 1], [1, 1]]))
        >>> str(h1_complement(flow, [flow.catalog(1).get("p1-i0")])[0])
        'Z'
    """

    orbits = list(orbits)
    if not orbits:
        raise InvalidInputError("h1_complement needs at least one orbit")
    if len(set(orbits)) != len(orbits):
        raise OverlappingOrbitsError("the same orbit was given twice")
    for orbit in orbits:
        if not is_orbit_of(flow.matrix, orbit):
            raise InvalidInputError(f"{orbit.orbit_id} is not an orbit of {flow.matrix}")

    punctures = [p.as_fractions() for orbit in orbits for p in orbit.points]
    last_error = None
    for attempt in range(seed, seed + MAX_REDRAWS):
        arcs = ArcSystem.draw(attempt, punctures, flow.matrix.m)
        try:
            presentation = _Builder(flow, orbits, arcs).build()
        except DegenerateGeometryError as exc:
            last_error = exc
            continue
        return presentation.group(), presentation
    raise DegenerateGeometryError(
        f"no arc system in general position after {MAX_REDRAWS} draws: {last_error}"
    )


def h1_surgered(path: SurgeryPath, seed: int = 0) -> AbelianGroup:
    """
    First homology after all moves of the path.

    Example:
        >>> flow = build_suspension(Hyperbolic2.from_rows([[2, 1], [1, 1]]))
        >>> move = SurgeryMove(flow.catalog(1).get("p1-i0"), 3)
        >>> str(h1_surgered(SurgeryPath(flow, (move,))))
        'Z/3'
    """

    if not path.moves:
        return path.base.h1
    _, presentation = h1_complement(path.base, path.orbits, seed)
    return presentation.surgered(path.slopes)


def suspension_fingerprint_check(result: AbelianGroup, flow: SuspensionFlow) -> bool:
    """
    Whether ``result`` equals ``H1(M_A)``.

    Equality is necessary, not sufficient, for the surgered flow to be the
    suspension of ``A`` or ``A^-1``.
    """

    return result == flow.h1


@dataclass(frozen=True)
class CoreOrbit:
    """The core of the filling solid torus that replaces a surgered orbit.

    Attributes:
        orbit (PeriodicOrbit): The surgered orbit.
        slope (int): The slope of its move.
    """

    orbit: PeriodicOrbit
    slope: int

    @property
    def token(self) -> str:
        return f"core({self.orbit.orbit_id})"

    @property
    def period(self) -> int:
        return self.orbit.period

    def to_dict(self) -> dict:
        return {"token": self.token, "surgered": self.orbit.orbit_id, "slope": self.slope}


@dataclass(frozen=True)
class TransportedOrbit:
    """An orbit disjoint from the surgery locus, seen in the surgered flow.

    Attributes:
        orbit (PeriodicOrbit): The orbit, unchanged away from the locus.
        pairing (int): Intersection with the section carried over from the fiber.
    """

    orbit: PeriodicOrbit
    pairing: int

    @property
    def token(self) -> str:
        return f"P({self.orbit.orbit_id})"

    def to_dict(self) -> dict:
        return {"token": self.token, "orbit": self.orbit.orbit_id, "pairing": self.pairing}


def core_orbit(path: SurgeryPath, orbit: PeriodicOrbit) -> CoreOrbit:
    move = path.move_for(orbit)
    if move is None:
        raise InvalidInputError(f"{orbit.orbit_id} is not surgered along this path")
    return CoreOrbit(orbit, move.slope)


def orbit_transport(path: SurgeryPath, orbit: PeriodicOrbit) -> TransportedOrbit:
    """
    Follow an orbit through the surgery.

    Raises:
        SurgeryLocusError: If the orbit is surgered; ``error.core`` holds its core orbit.
    """

    if path.move_for(orbit) is not None:
        core = core_orbit(path, orbit)
        raise SurgeryLocusError(
            f"orbit {orbit.orbit_id} is in the surgery locus; it is replaced by {core.token}",
            core=core,
        )
    return TransportedOrbit(orbit, orbit_class(path.base, orbit).fiber_degree)
