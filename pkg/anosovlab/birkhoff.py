"""Boundary bookkeeping for Birkhoff sections of surgered suspensions.

A section is recorded by its genus and, for every boundary orbit, the number
``p`` of boundary components on it and the common multiplicity ``m``. Nothing
here realizes the surface itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple, Union

from anosovlab.errors import InvalidInputError
from anosovlab.suspension import SuspensionFlow, displacement, orbit_class, per_z
from anosovlab.surgery import CoreOrbit, SurgeryMove, SurgeryPath, core_orbit
from anosovlab.torus import PeriodicOrbit
from anosovlab.utils import parallel_map

BoundaryOrbit = Union[PeriodicOrbit, CoreOrbit]

CERTIFIED = "certified"
HYPOTHETICAL = "hypothetical"
SECTION = "section"

RETURN_MAP_NOTE = "first return map of the blow-down is conjugate to A (certified label, not verified dynamically)"
CLOSED_MOVE_NOTE = "not a genuine Birkhoff boundary"


def _token(orbit: BoundaryOrbit) -> str:
    return orbit.token if isinstance(orbit, CoreOrbit) else orbit.orbit_id


@dataclass(frozen=True)
class BoundaryEntry:
    """Boundary data along one orbit.

    Attributes:
        orbit: A base orbit or the core of a surgery.
        p (int): Number of boundary components on the orbit, at least 1.
        m (int): Multiplicity, the same for every component.
    """

    orbit: BoundaryOrbit
    p: int
    m: int

    def __post_init__(self):
        if self.p < 1:
            raise InvalidInputError(f"boundary component count must be >= 1, got {self.p}")

    def to_dict(self) -> dict:
        return {"orbit": _token(self.orbit), "p": self.p, "m": self.m}


@dataclass(frozen=True)
class BirkhoffData:
    """Genus and boundary entries of a Birkhoff section.

    Attributes:
        entries (tuple): One entry per boundary orbit.
        genus (int): Genus of the blown-down surface.
        label (str): ``certified``, ``hypothetical`` or ``section``.
        closed_moves (tuple): Zero-slope moves that leave no boundary.
    """

    entries: Tuple[BoundaryEntry, ...]
    genus: int = 1
    label: str = SECTION
    closed_moves: Tuple[SurgeryMove, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "closed_moves", tuple(self.closed_moves))
        if self.genus < 0:
            raise InvalidInputError(f"genus must be non-negative, got {self.genus}")

    @property
    def boundary_components(self) -> int:
        return sum(e.p for e in self.entries)

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary_components

    @property
    def blow_down_euler(self) -> int:
        return 2 - 2 * self.genus

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "genus": self.genus,
            "entries": [e.to_dict() for e in self.entries],
            "euler_characteristic": self.euler_characteristic,
            "closed_moves": [
                dict(move.to_dict(), note=CLOSED_MOVE_NOTE) for move in self.closed_moves
            ],
            "return_map": RETURN_MAP_NOTE,
        }


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the three consistency checks on one :class:`BirkhoffData`.

    Attributes:
        fiber_sum (int): ``sum p * per_z * m``.
        horizontal_sum (tuple): ``sum p * m * horizontal`` in ``coker(A - I)``.
        euler (int): ``2 - 2g - sum p``.
        expected_euler (int): Euler characteristic of the blow-down minus ``sum p``.
        multiplicities_nonzero (bool): No entry has ``m = 0``.
    """

    fiber_sum: int
    horizontal_sum: Tuple[int, ...]
    euler: int
    expected_euler: int
    multiplicities_nonzero: bool

    @property
    def fiber_ok(self) -> bool:
        return self.fiber_sum == 0

    @property
    def horizontal_ok(self) -> bool:
        return not any(self.horizontal_sum)

    @property
    def boundary_relation(self) -> bool:
        return self.fiber_ok and self.horizontal_ok

    @property
    def euler_ok(self) -> bool:
        return self.euler == self.expected_euler

    @property
    def passed(self) -> bool:
        return self.boundary_relation and self.euler_ok and self.multiplicities_nonzero

    def to_dict(self) -> dict:
        return {
            "boundary_relation": self.boundary_relation,
            "fiber_sum": self.fiber_sum,
            "horizontal_sum": list(self.horizontal_sum),
            "euler_consistent": self.euler_ok,
            "euler": self.euler,
            "expected_euler": self.expected_euler,
            "multiplicities_nonzero": self.multiplicities_nonzero,
            "passed": self.passed,
            "excluded_from_candidacy": self.fiber_ok and not self.horizontal_ok,
        }


def theorem_a_prime_data(gamma: PeriodicOrbit, alpha: PeriodicOrbit, m: int, m0: int = 1) -> BirkhoffData:
    """
    Section data of the length-two surgery loop ``(gamma, m), (alpha, -m)``.

    Args:
        gamma (PeriodicOrbit): First surgered orbit.
        alpha (PeriodicOrbit): Second surgered orbit, distinct from ``gamma``.
        m (int): The slope, nonzero.
        m0 (int): Slopes with ``|m| < m0`` are labeled hypothetical.

    Returns:
        BirkhoffData: ``[(gamma, per_z(alpha), -m), (alpha, per_z(gamma), m)]``, genus 1.

    Example:
        >>> [e.to_dict() for e in theorem_a_prime_data(fixed, period_two, 5).entries]
        [{'orbit': 'p1-i0', 'p': 2, 'm': -5}, {'orbit': 'p2-i0', 'p': 1, 'm': 5}]
    """

    if gamma == alpha:
        raise InvalidInputError(f"the two orbits must differ, got {gamma.orbit_id} twice")
    if m == 0:
        raise InvalidInputError("the slope of a surgery loop must be nonzero")
    label = CERTIFIED if abs(m) >= m0 else HYPOTHETICAL
    return BirkhoffData(
        (BoundaryEntry(gamma, per_z(alpha), -m), BoundaryEntry(alpha, per_z(gamma), m)),
        genus=1,
        label=label,
    )


def validate(data: BirkhoffData, flow: SuspensionFlow) -> ValidationReport:
    """
    Check the boundary relation, the blow-down Euler count and the multiplicities.

    Core orbits must be relabeled to base orbits first (see :func:`relabel`).
    """

    fiber_sum = 0
    horizontal = [0, 0]
    for entry in data.entries:
        if not isinstance(entry.orbit, PeriodicOrbit):
            raise InvalidInputError(f"{_token(entry.orbit)} is not an orbit of the base flow; relabel it first")
        cls = orbit_class(flow, entry.orbit)
        fiber_sum += entry.p * cls.fiber_degree * entry.m
        shift = displacement(flow.matrix, entry.orbit)
        horizontal = [h + entry.p * entry.m * s for h, s in zip(horizontal, shift)]
    return ValidationReport(
        fiber_sum=fiber_sum,
        horizontal_sum=flow.horizontal_of(horizontal),
        euler=data.euler_characteristic,
        expected_euler=data.blow_down_euler - data.boundary_components,
        multiplicities_nonzero=all(entry.m != 0 for entry in data.entries),
    )


def validate_all(
    flow: SuspensionFlow,
    triples: Sequence[Tuple[PeriodicOrbit, PeriodicOrbit, int]],
    m0: int = 1,
    threads: int = 1,
) -> List[ValidationReport]:
    """Validate the section data of many ``(gamma, alpha, m)`` triples, in input order."""
    return parallel_map(
        lambda triple: validate(theorem_a_prime_data(*triple, m0=m0), flow), triples, threads
    )


def section_after_surgery(path: SurgeryPath) -> BirkhoffData:
    """
    The fiber section carried through the surgeries of ``path``.

    Every move ``(gamma, m)`` with ``m != 0`` leaves ``per_z(gamma)`` boundary
    components on the core orbit with multiplicity ``-m``. Zero-slope moves
    refill the same solid torus and are listed as closed moves.

    Example:
        >>> [e.to_dict() for e in section_after_surgery(path).entries]
        [{'orbit': 'core(p1-i0)', 'p': 1, 'm': -3}]
    """

    if not path.moves:
        raise InvalidInputError("section_after_surgery needs at least one move")
    entries, closed = [], []
    for move in path.moves:
        if move.slope == 0:
            closed.append(move)
            continue
        entries.append(BoundaryEntry(core_orbit(path, move.orbit), per_z(move.orbit), -move.slope))
    return BirkhoffData(tuple(entries), genus=1, label=SECTION, closed_moves=tuple(closed))


def relabel(data: BirkhoffData, mapping: Dict[BoundaryOrbit, BoundaryOrbit]) -> BirkhoffData:
    """Replace boundary orbits according to ``mapping``; unmapped orbits stay."""
    entries = tuple(BoundaryEntry(mapping.get(e.orbit, e.orbit), e.p, e.m) for e in data.entries)
    return BirkhoffData(entries, data.genus, data.label, data.closed_moves)


@dataclass(frozen=True)
class TheoremAPath:
    """A surgery loop together with the relabeling of its cores.

    Attributes:
        path (SurgeryPath): The two moves.
        mapping (dict): Core orbit to the base orbit it is compared with.
    """

    path: SurgeryPath
    mapping: Dict[CoreOrbit, PeriodicOrbit]

    def section(self) -> BirkhoffData:
        return relabel(section_after_surgery(self.path), self.mapping)

    def to_dict(self) -> dict:
        return {
            "moves": [move.to_dict() for move in self.path.moves],
            "relabel": {core.token: orbit.orbit_id for core, orbit in self.mapping.items()},
        }


def theorem_a_paths(flow: SuspensionFlow, gamma: PeriodicOrbit, alpha: PeriodicOrbit, m: int) -> Tuple[TheoremAPath, TheoremAPath]:
    """
    The loop ``(gamma, m), (alpha, -m)`` and its swap ``(alpha, m), (gamma, -m)``.

    Each core is relabeled by the other surgered orbit. The relabeled section
    of the swapped loop is :func:`theorem_a_prime_data` of ``(gamma, alpha, m)``
    and that of the forward loop is the same data for ``(alpha, gamma, m)``.
    """

    if gamma == alpha:
        raise InvalidInputError(f"the two orbits must differ, got {gamma.orbit_id} twice")
    out = []
    for first, second in ((gamma, alpha), (alpha, gamma)):
        path = SurgeryPath(flow, (SurgeryMove(first, m), SurgeryMove(second, -m)))
        mapping = {core_orbit(path, first): second, core_orbit(path, second): first}
        out.append(TheoremAPath(path, mapping))
    return out[0], out[1]


def same_entries(left: BirkhoffData, right: BirkhoffData) -> bool:
    """Equal boundary data up to the order of entries."""
    def key(data: BirkhoffData) -> List[tuple]:
        return sorted((_token(e.orbit), e.p, e.m) for e in data.entries)

    return left.genus == right.genus and key(left) == key(right)
