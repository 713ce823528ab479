"""Periodic points and orbits of a hyperbolic toral automorphism."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Sequence, Tuple

from sympy import divisors, factorint

from anosovlab import settings
from anosovlab.errors import InvalidInputError, UnknownOrbitError
from anosovlab.linalg import Hyperbolic2, IntMat, snf
from anosovlab.utils import parallel_map, parse_orbit_id


@dataclass(frozen=True)
class TorusPoint:
    """The class of ``(p1/q, p2/q)`` in R^2/Z^2, fully reduced.

    Attributes:
        p1 (int): First numerator, ``0 <= p1 < q``.
        p2 (int): Second numerator, ``0 <= p2 < q``.
        q (int): Common denominator, ``gcd(p1, p2, q) == 1``.
    """

    p1: int
    p2: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise InvalidInputError(f"denominator must be positive, got {self.q}")
        if not (0 <= self.p1 < self.q and 0 <= self.p2 < self.q):
            raise InvalidInputError(f"numerators must lie in [0, {self.q})")
        if gcd(gcd(self.p1, self.p2), self.q) != 1:
            raise InvalidInputError(f"({self.p1}, {self.p2})/{self.q} is not reduced")

    @classmethod
    def reduced(cls, n1: int, n2: int, q: int) -> "TorusPoint":
        """Point ``(n1/q, n2/q) mod 1`` for arbitrary integers."""
        n1, n2 = n1 % q, n2 % q
        g = gcd(gcd(n1, n2), q)
        return cls(n1 // g, n2 // g, q // g)

    @classmethod
    def from_fractions(cls, x, y) -> "TorusPoint":
        x, y = Fraction(x), Fraction(y)
        q = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
        return cls.reduced(x.numerator * (q // x.denominator), y.numerator * (q // y.denominator), q)

    @property
    def key(self) -> Tuple[int, int, int]:
        return (self.q, self.p1, self.p2)

    def __lt__(self, other: "TorusPoint") -> bool:
        return self.key < other.key

    def as_fractions(self) -> Tuple[Fraction, Fraction]:
        return Fraction(self.p1, self.q), Fraction(self.p2, self.q)

    def apply(self, m: IntMat) -> "TorusPoint":
        n1, n2 = m.apply((self.p1, self.p2))
        return TorusPoint.reduced(n1, n2, self.q)

    def to_list(self) -> List[str]:
        return [str(x) for x in self.as_fractions()]

    def __str__(self) -> str:
        return f"({self.p1}/{self.q}, {self.p2}/{self.q})"


@dataclass(frozen=True)
class PeriodicOrbit:
    """An A-orbit ``[x, Ax, ..., A^(n-1)x]`` starting at its least point.

    Attributes:
        points (tuple): The orbit in dynamical order.
        index (int): Position among the orbits of the same least period.
    """

    points: Tuple[TorusPoint, ...]
    index: int = field(default=0, compare=False)

    @property
    def period(self) -> int:
        return len(self.points)

    @property
    def representative(self) -> TorusPoint:
        return self.points[0]

    @property
    def orbit_id(self) -> str:
        return f"p{self.period}-i{self.index}"

    @property
    def sort_key(self):
        return (self.period, self.representative.key)

    def __contains__(self, point: TorusPoint) -> bool:
        return point in self.points

    def to_dict(self) -> dict:
        return {
            "id": self.orbit_id,
            "period": self.period,
            "representative": self.representative.to_list(),
            "points": [p.to_list() for p in self.points],
        }


@dataclass(frozen=True)
class OrbitCensus:
    """Periodic point and orbit counts of A up to a horizon.

    Attributes:
        matrix (Hyperbolic2): The automorphism.
        max_period (int): The horizon t.
        fixed_counts (tuple): ``F(1..t)``, fixed points of ``A^n``.
        least_counts (tuple): ``L(1..t)``, points of least period n.
        orbit_counts (tuple): ``O(1..t) = L(n)/n``.
    """

    matrix: Hyperbolic2
    max_period: int
    fixed_counts: Tuple[int, ...]
    least_counts: Tuple[int, ...]
    orbit_counts: Tuple[int, ...]

    def cumulative_at(self, t: int) -> int:
        """``|P_t|``, the number of orbits of least period at most ``t``."""
        if not 1 <= t <= self.max_period:
            raise InvalidInputError(f"t = {t} outside census range 1..{self.max_period}")
        return sum(self.orbit_counts[:t])

    @property
    def cumulative(self) -> int:
        return self.cumulative_at(self.max_period)

    def rows(self) -> List[dict]:
        total = 0
        out = []
        for n in range(1, self.max_period + 1):
            total += self.orbit_counts[n - 1]
            out.append(
                {
                    "n": n,
                    "fixed": self.fixed_counts[n - 1],
                    "least": self.least_counts[n - 1],
                    "orbits": self.orbit_counts[n - 1],
                    "cumulative": total,
                }
            )
        return out


def mobius(n: int) -> int:
    exponents = factorint(n).values()
    if any(e > 1 for e in exponents):
        return 0
    return -1 if len(exponents) % 2 else 1


def fixed_point_count(a: Hyperbolic2, n: int) -> int:
    """
    Number of fixed points of ``A^n`` on the torus, ``|det(A^n - I)|``.

    Args:
        a (Hyperbolic2): A hyperbolic matrix.
        n (int): A positive exponent.

    Returns:
        int: The count; equal to ``tr(A^n) - 2`` when ``det A = 1`` and ``tr A >= 3``.

    Example:
        >>> fixed_point_count(Hyperbolic2.from_rows([[2, 1], [1, 1]]), 3)
        16
    """

    if n < 1:
        raise InvalidInputError(f"period must be >= 1, got {n}")
    power = a.power(n)
    count = abs((power - IntMat.identity(2)).det())
    if a.is_positive:
        assert count == power.trace() - 2, "fixed point count disagrees with tr(A^n) - 2"
    return count


def enumerate_fixed_points(a: Hyperbolic2, n: int) -> List[TorusPoint]:
    """
    All solutions of ``(A^n - I) x = 0 mod Z^2``, sorted by ``(q, p1, p2)``.

    With ``U (A^n - I) V = diag(d1, d2)`` the solutions are
    ``V (j1/d1, j2/d2)`` for ``0 <= j_i < d_i``.
    """

    if n < 1:
        raise InvalidInputError(f"period must be >= 1, got {n}")
    decomposition = snf(a.power(n) - IntMat.identity(2))
    d1, d2 = decomposition.diagonal
    v = decomposition.V
    points = {
        TorusPoint.from_fractions(*v.apply((Fraction(j1, d1), Fraction(j2, d2))))
        for j1 in range(d1)
        for j2 in range(d2)
    }
    return sorted(points, key=lambda p: p.key)


def orbit_of(a: Hyperbolic2, point: TorusPoint) -> PeriodicOrbit:
    """The orbit through ``point``, rotated to start at its least point."""
    points = [point]
    current = point.apply(a.m)
    while current != point:
        points.append(current)
        current = current.apply(a.m)
    start = min(range(len(points)), key=lambda i: points[i].key)
    return PeriodicOrbit(tuple(points[start:] + points[:start]))


def _orbits_of_least_period(a: Hyperbolic2, n: int) -> List[PeriodicOrbit]:
    seen = set()
    found = []
    for point in enumerate_fixed_points(a, n):
        if point in seen:
            continue
        orbit = orbit_of(a, point)
        seen.update(orbit.points)
        if orbit.period == n:
            found.append(orbit)
    found.sort(key=lambda o: o.representative.key)
    return [PeriodicOrbit(o.points, index=i) for i, o in enumerate(found)]


def enumeration_cost(a: Hyperbolic2, max_period: int) -> int:
    """Points visited when listing every orbit up to ``max_period``: ``sum F(n)``."""
    if max_period < 1:
        raise InvalidInputError(f"max period must be >= 1, got {max_period}")
    return sum(fixed_point_count(a, n) for n in range(1, max_period + 1))


def enumerate_orbits(
    a: Hyperbolic2,
    max_period: int,
    threads: int = 1,
    limit: int = settings.MAX_ENUMERATED_POINTS,
) -> List[PeriodicOrbit]:
    """
    All orbits of least period at most ``max_period``, sorted by (period, representative).

    Args:
        a (Hyperbolic2): A hyperbolic matrix.
        max_period (int): The horizon, at least 1.
        threads (int): Periods are enumerated concurrently on this many threads.
        limit (int): Largest :func:`enumeration_cost` accepted.

    Returns:
        list: Canonical orbits; ``orbit.index`` numbers them within each period.

    Raises:
        InvalidInputError: If listing the orbits would visit more than ``limit`` points.

    Example:
        >>> [o.orbit_id for o in enumerate_orbits(Hyperbolic2.from_rows([[2, 1], [1, 1]]), 2)]
        ['p1-i0', 'p2-i0', 'p2-i1']
    """

    cost = enumeration_cost(a, max_period)
    if cost > limit:
        raise InvalidInputError(
            f"listing the orbits up to period {max_period} visits {cost} points, above the limit of {limit}"
        )
    per_period = parallel_map(
        lambda n: _orbits_of_least_period(a, n), range(1, max_period + 1), threads
    )
    return [orbit for group in per_period for orbit in group]


def census(a: Hyperbolic2, max_period: int, threads: int = 1) -> OrbitCensus:
    """
    Fixed-point, least-period and orbit counts up to ``max_period``.

    Counts come from determinants and Moebius inversion; no orbit is enumerated.

    Example:
        >>> census(Hyperbolic2.from_rows([[2, 1], [1, 1]]), 3).cumulative
        8
    """

    if max_period < 1:
        raise InvalidInputError(f"max period must be >= 1, got {max_period}")
    periods = list(range(1, max_period + 1))
    fixed = parallel_map(lambda n: fixed_point_count(a, n), periods, threads)
    least = [sum(mobius(n // d) * fixed[d - 1] for d in divisors(n)) for n in periods]
    orbits = []
    for n, count in zip(periods, least):
        assert count % n == 0, f"L({n}) = {count} is not divisible by {n}"
        orbits.append(count // n)
    return OrbitCensus(a, max_period, tuple(fixed), tuple(least), tuple(orbits))


class OrbitCatalog:
    """Orbits of A up to a period bound, looked up by id or by point."""

    def __init__(
        self,
        a: Hyperbolic2,
        max_period: int,
        threads: int = 1,
        limit: int = settings.MAX_ENUMERATED_POINTS,
    ):
        self.matrix = a
        self.max_period = max_period
        self.orbits = enumerate_orbits(a, max_period, threads, limit)
        self._by_id: Dict[str, PeriodicOrbit] = {o.orbit_id: o for o in self.orbits}
        self._by_point: Dict[TorusPoint, PeriodicOrbit] = {
            p: o for o in self.orbits for p in o.points
        }

    def __iter__(self):
        return iter(self.orbits)

    def __len__(self) -> int:
        return len(self.orbits)

    def get(self, orbit_id: str) -> PeriodicOrbit:
        period, _ = parse_orbit_id(orbit_id)
        if period > self.max_period:
            raise UnknownOrbitError(
                f"unknown orbit '{orbit_id}': period {period} exceeds the enumerated bound {self.max_period}"
            )
        try:
            return self._by_id[orbit_id]
        except KeyError:
            raise UnknownOrbitError(f"unknown orbit '{orbit_id}'") from None

    def containing(self, point: TorusPoint) -> PeriodicOrbit:
        try:
            return self._by_point[point]
        except KeyError:
            raise UnknownOrbitError(f"no enumerated orbit contains {point}") from None

    def of_period(self, n: int) -> List[PeriodicOrbit]:
        return [o for o in self.orbits if o.period == n]


def is_orbit_of(a: Hyperbolic2, orbit: PeriodicOrbit) -> bool:
    pts: Sequence[TorusPoint] = orbit.points
    return all(pts[i].apply(a.m) == pts[(i + 1) % len(pts)] for i in range(len(pts)))
