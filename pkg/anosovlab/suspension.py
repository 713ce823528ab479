"""The suspension manifold M_A: first homology, orbit classes and the reversed flow."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from anosovlab import conjugacy
from anosovlab.linalg import AbelianGroup, Cokernel, Hyperbolic2, IntMat
from anosovlab.torus import OrbitCatalog, PeriodicOrbit, TorusPoint, census, is_orbit_of
from anosovlab.errors import InvalidInputError


@dataclass(frozen=True)
class OrbitClass:
    """Homology class of a closed orbit in ``H1(M_A) = Z + coker(A - I)``.

    Attributes:
        fiber_degree (int): Pairing with the fiber, equal to the least period.
        horizontal (tuple): Reduced coordinates of the ``coker(A - I)`` part.
    """

    fiber_degree: int
    horizontal: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {"fiber_degree": self.fiber_degree, "horizontal": list(self.horizontal)}


class SuspensionFlow:
    """Suspension of a positive hyperbolic matrix.

    ``H1(M_A)`` is ``Z`` (the fiber-dual generator) plus ``coker(A - I)``.
    The horizontal part of an orbit class is normalized so the origin's
    orbit has class zero.
    """

    def __init__(self, matrix: Hyperbolic2):
        self.matrix = matrix.require_positive()
        self.coker = Cokernel(matrix.m - IntMat.identity(2))
        self.h1 = AbelianGroup(
            self.coker.group.free_rank + 1, self.coker.group.invariant_factors
        )

    def __repr__(self) -> str:
        return f"SuspensionFlow({self.matrix})"

    def catalog(self, max_period: int, threads: int = 1) -> OrbitCatalog:
        return OrbitCatalog(self.matrix, max_period, threads)

    def horizontal_of(self, vector) -> Tuple[int, ...]:
        return self.coker.reduce(vector)


def build_suspension(a: Hyperbolic2) -> SuspensionFlow:
    """
    Build the suspension flow of ``A``.

    Raises:
        StandingAssumptionError: For det -1 or trace < 3.

    Example:
        >>> str(build_suspension(Hyperbolic2.from_rows([[3, 2], [1, 1]])).h1)
        'Z + Z/2'
    """

    return SuspensionFlow(a)


def per_z(orbit: PeriodicOrbit) -> int:
    """Number of times the suspended orbit crosses a fiber."""
    return orbit.period


def displacement(a: Hyperbolic2, orbit: PeriodicOrbit) -> Tuple[int, int]:
    """``(A^n - I) x`` for the lift of the representative in ``[0, 1)^2``."""
    x = orbit.representative.as_fractions()
    moved = a.power(orbit.period).apply(x)
    vector = tuple(m - c for m, c in zip(moved, x))
    assert all(v.denominator == 1 for v in vector), "orbit representative is not periodic"
    return tuple(int(v) for v in vector)


def orbit_class(flow: SuspensionFlow, orbit: PeriodicOrbit) -> OrbitClass:
    """
    Homology class of the suspended orbit.

    Example:
        >>> flow = build_suspension(Hyperbolic2.from_rows([[2, 1], [1, 1]]))
        >>> orbit_class(flow, flow.catalog(1).get("p1-i0")).fiber_degree
        1
    """

    if not is_orbit_of(flow.matrix, orbit):
        raise InvalidInputError(f"{orbit.orbit_id} is not an orbit of {flow.matrix}")
    return OrbitClass(per_z(orbit), flow.horizontal_of(displacement(flow.matrix, orbit)))


def class_difference(flow: SuspensionFlow, x: TorusPoint, y: TorusPoint) -> Tuple[int, ...]:
    """Horizontal difference of two fixed points from the joint path ``(A - I)(x - y)``."""
    fx, fy = x.as_fractions(), y.as_fractions()
    joint = (flow.matrix.m - IntMat.identity(2)).apply(tuple(a - b for a, b in zip(fx, fy)))
    if any(v.denominator != 1 for v in joint):
        raise InvalidInputError("class_difference needs two fixed points of A")
    return flow.horizontal_of(tuple(int(v) for v in joint))


@dataclass(frozen=True)
class Reversal:
    """The reversed flow, realized as the suspension of a canonical conjugate of ``A^-1``.

    Attributes:
        source (SuspensionFlow): The original flow.
        target (SuspensionFlow): Suspension of ``W = K A^-1 K^-1``.
        conjugator (IntMat): ``K``.
        word (conjugacy.RLWord): Canonical word of ``W``.
    """

    source: SuspensionFlow
    target: SuspensionFlow
    conjugator: IntMat
    word: conjugacy.RLWord

    def transport_point(self, point: TorusPoint) -> TorusPoint:
        return point.apply(self.conjugator)

    def correspondence(self, max_period: int, threads: int = 1) -> List[Tuple[PeriodicOrbit, PeriodicOrbit]]:
        """Pairs (A-orbit of x, W-orbit of Kx), which have equal least periods."""
        target_catalog = self.target.catalog(max_period, threads)
        pairs = []
        for orbit in self.source.catalog(max_period, threads):
            image = target_catalog.containing(self.transport_point(orbit.representative))
            assert per_z(image) == per_z(orbit), "reversal changed a period"
            pairs.append((orbit, image))
        return pairs

    def census(self, max_period: int, threads: int = 1):
        return census(self.target.matrix, max_period, threads)


def reverse(flow: SuspensionFlow) -> Reversal:
    """
    Suspension of ``A^-1``, normalized to its canonical word matrix.

    Example:
        >>> rev = reverse(build_suspension(Hyperbolic2.from_rows([[2, 1], [1, 1]])))
        >>> str(rev.word)
        'R^1L^1'
    """

    word, conjugator = conjugacy.canonical_form(flow.matrix.inverse())
    return Reversal(flow, SuspensionFlow(Hyperbolic2(word.matrix())), conjugator, word)
