"""Orbit growth and the density bound for surgery loops.

Bounds are evaluated in mpmath interval arithmetic and returned as the
exact rational value of the upper endpoint, so a reported bound is never
below the real quantity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List

import mpmath
from mpmath import iv

from anosovlab.errors import InvalidInputError
from anosovlab.surgery import SurgeryPath, orbit_transport
from anosovlab.suspension import per_z
from anosovlab.torus import OrbitCensus, PeriodicOrbit

BOUND_NOTE = (
    "upper-bound sequence dominating |Q^2_t(m)|/|P^2_t|; the growth rate of the "
    "number of loops itself is not computed"
)


@dataclass(frozen=True)
class PropBParams:
    """Constants of the free-homotopy bound.

    Attributes:
        c0 (Fraction): Constant of the ``C0 sqrt(t) log t`` bound.
        t0 (int): The bound is asserted for ``t > t0`` only.
        kappa3 (Fraction): Period comparison constant.
        tau (Fraction): Duration of one fiber crossing in geometric time.
    """

    c0: Fraction = Fraction(1)
    t0: int = 1
    kappa3: Fraction = Fraction(1)
    tau: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("c0", "kappa3", "tau"):
            value = Fraction(getattr(self, name))
            if value <= 0:
                raise InvalidInputError(f"{name} must be positive, got {value}")
            object.__setattr__(self, name, value)
        if self.t0 < 1:
            raise InvalidInputError(f"t0 must be a positive integer, got {self.t0}")

    @property
    def kappa1(self) -> Fraction:
        """Ratio of fiber crossings to geometric period."""
        return 1 / self.tau

    def to_dict(self) -> dict:
        return {"c0": str(self.c0), "t0": self.t0, "kappa3": str(self.kappa3), "tau": str(self.tau)}


def _interval(value: Fraction):
    value = Fraction(value)
    return iv.mpf(value.numerator) / iv.mpf(value.denominator)


def _upper(interval) -> Fraction:
    upper = mpmath.mpf(interval.b, prec=iv.prec, rounding="c")
    man, exp = upper.man_exp
    return Fraction(man) * Fraction(2) ** exp


def _value(x) -> Fraction:
    man, exp = mpmath.mpf(x).man_exp
    return Fraction(man) * Fraction(2) ** exp


def fh_bound(params: PropBParams, t: int) -> Fraction:
    """
    Certified upper bound of ``C0 * sqrt(1/kappa3) * sqrt(t) * log(t)``.

    Args:
        params (PropBParams): The constants.
        t (int): The horizon, greater than ``params.t0``.

    Returns:
        Fraction: A rational not below the real value.

    Example:
        >>> float(fh_bound(PropBParams(), 8)) > 5.65
        True
    """

    if t <= params.t0:
        raise InvalidInputError(f"the bound is only asserted for t > t0 = {params.t0}, got t = {t}")
    c1 = _interval(params.c0) * iv.sqrt(1 / _interval(params.kappa3))
    return _upper(c1 * iv.sqrt(iv.mpf(t)) * iv.log(iv.mpf(t)))


def fh_bound_unrelaxed(params: PropBParams, t: int) -> Fraction:
    """Certified upper bound of ``C0 * sqrt(t/kappa3) * log(t/kappa3)``."""
    if t <= params.t0:
        raise InvalidInputError(f"the bound is only asserted for t > t0 = {params.t0}, got t = {t}")
    scaled = iv.mpf(t) / _interval(params.kappa3)
    return _upper(_interval(params.c0) * iv.sqrt(scaled) * iv.log(scaled))


def pair_count(census: OrbitCensus, t: int) -> int:
    """Ordered pairs of orbits with both periods at most ``t``."""
    return census.cumulative_at(t) ** 2


@dataclass(frozen=True)
class DensityRow:
    t: int
    cumulative: int
    pairs: int
    bound: Fraction
    unrelaxed: Fraction
    ratio: Fraction

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "cumulative": self.cumulative,
            "pairs": self.pairs,
            "bound": str(self.bound),
            "bound_decimal": _decimal(self.bound),
            "unrelaxed_bound_decimal": _decimal(self.unrelaxed),
            "ratio": str(self.ratio),
            "ratio_decimal": _decimal(self.ratio),
        }


def density_ratio(census: OrbitCensus, params: PropBParams) -> List[DensityRow]:
    """
    Rows ``(t, bound(t) / |P_t|)`` for ``t0 < t <= census.max_period``.

    The ratio dominates ``|Q^2_t(m)| / |P^2_t|``; it is an upper bound and may exceed 1.
    """

    if census.max_period <= params.t0:
        raise InvalidInputError(
            f"census horizon {census.max_period} must exceed t0 = {params.t0}"
        )
    rows = []
    for t in range(params.t0 + 1, census.max_period + 1):
        cumulative = census.cumulative_at(t)
        bound = fh_bound(params, t)
        rows.append(
            DensityRow(
                t=t,
                cumulative=cumulative,
                pairs=pair_count(census, t),
                bound=bound,
                unrelaxed=fh_bound_unrelaxed(params, t),
                ratio=bound / cumulative,
            )
        )
    return rows


@dataclass(frozen=True)
class GrowthEstimate:
    """Exponential growth of ``|P_t|`` at the census horizon.

    Attributes:
        horizon (int): The horizon t.
        cumulative (int): ``|P_t|``.
        estimate (Fraction): ``log(t |P_t|) / t``.
        raw_estimate (Fraction): ``log(|P_t|) / t``.
        target (Fraction): ``log`` of the expanding eigenvalue.
    """

    horizon: int
    cumulative: int
    estimate: Fraction
    raw_estimate: Fraction
    target: Fraction

    @property
    def relative_error(self) -> Fraction:
        return abs(self.estimate - self.target) / self.target

    @property
    def raw_relative_error(self) -> Fraction:
        return abs(self.raw_estimate - self.target) / self.target

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "cumulative": self.cumulative,
            "estimate": _decimal(self.estimate),
            "raw_estimate": _decimal(self.raw_estimate),
            "target": _decimal(self.target),
            "relative_error": _decimal(self.relative_error),
            "raw_relative_error": _decimal(self.raw_relative_error),
        }


def growth_rate(census: OrbitCensus) -> GrowthEstimate:
    """
    Compare the census growth with ``log(lambda)``.

    ``estimate`` is ``log(t |P_t|) / t``, not the plain ``log|P_t| / t``:
    orbits of period about ``t`` number about ``lambda^t / t``, so the plain
    ratio trails ``log(lambda)`` by roughly ``log(t) / t``. The plain ratio is
    kept as ``raw_estimate`` with its own ``raw_relative_error``.

    Example:
        >>> float(growth_rate(census(cat, 20)).relative_error) < 0.05
        True
    """

    t = census.max_period
    if t < 5:
        raise InvalidInputError(f"growth_rate needs a census horizon of at least 5, got {t}")
    a = census.matrix
    cumulative = census.cumulative
    with mpmath.workdps(40):
        lam = (a.trace + mpmath.sqrt(a.trace * a.trace - 4 * a.det)) / 2
        return GrowthEstimate(
            horizon=t,
            cumulative=cumulative,
            estimate=_value(mpmath.log(t * cumulative) / t),
            raw_estimate=_value(mpmath.log(cumulative) / t),
            target=_value(mpmath.log(abs(lam))),
        )


def period_comparison_identity(path: SurgeryPath, orbit: PeriodicOrbit) -> bool:
    """Whether the transported orbit meets the carried section ``per_z(orbit)`` times."""
    return orbit_transport(path, orbit).pairing == per_z(orbit)


def geometric_period(orbit: PeriodicOrbit, tau) -> Fraction:
    """Period in geometric time when one fiber crossing takes ``tau``."""
    return Fraction(tau) * per_z(orbit)


def _decimal(value: Fraction) -> str:
    return mpmath.nstr(mpmath.mpf(value.numerator) / value.denominator, 12)
