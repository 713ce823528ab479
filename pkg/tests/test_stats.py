from fractions import Fraction

import pytest

from anosovlab.errors import InvalidInputError
from anosovlab.linalg import Hyperbolic2
from anosovlab.stats import (
    PropBParams,
    density_ratio,
    fh_bound,
    fh_bound_unrelaxed,
    geometric_period,
    growth_rate,
    pair_count,
    period_comparison_identity,
)
from anosovlab.surgery import SurgeryMove, SurgeryPath
from anosovlab.suspension import build_suspension
from anosovlab.torus import census

CAT = Hyperbolic2.from_rows([[2, 1], [1, 1]])


def test_params():
    params = PropBParams(c0="3/2", t0=4, kappa3=Fraction(1, 2), tau=2)
    assert params.c0 == Fraction(3, 2)
    assert params.kappa1 == Fraction(1, 2)
    assert params.to_dict() == {"c0": "3/2", "t0": 4, "kappa3": "1/2", "tau": "2"}
    for bad in ({"c0": 0}, {"kappa3": -1}, {"tau": "0"}, {"t0": 0}):
        with pytest.raises(InvalidInputError):
            PropBParams(**bad)


def test_fh_bound():
    params = PropBParams()
    with pytest.raises(InvalidInputError, match="t > t0"):
        fh_bound(params, 1)
    with pytest.raises(InvalidInputError):
        fh_bound_unrelaxed(PropBParams(t0=5), 5)

    # sqrt(8) log(8) = 5.8815...
    bound = fh_bound(params, 8)
    assert Fraction(58815, 10000) < bound < Fraction(58816, 10000)
    assert fh_bound(PropBParams(c0=2), 8) >= 2 * bound - Fraction(1, 10**12)
    assert fh_bound(PropBParams(kappa3=Fraction(1, 4)), 8) >= 2 * bound - Fraction(1, 10**12)
    # with kappa3 = 1 both forms agree
    assert abs(fh_bound_unrelaxed(params, 8) - bound) < Fraction(1, 10**12)


def test_pair_count():
    counts = census(CAT, 3)
    assert [pair_count(counts, t) for t in (1, 2, 3)] == [1, 9, 64]


def test_density_ratio_decreases():
    rows = density_ratio(census(CAT, 30), PropBParams())
    assert [row.t for row in rows] == list(range(2, 31))
    tail = [row.ratio for row in rows if row.t >= 5]
    assert all(later < earlier for earlier, later in zip(tail, tail[1:]))
    by_t = {row.t: row for row in rows}
    assert by_t[25].ratio < Fraction(1, 1000)
    assert by_t[3].cumulative == 8 and by_t[3].pairs == 64
    assert by_t[10].to_dict()["ratio"] == str(by_t[10].ratio)

    with pytest.raises(InvalidInputError):
        density_ratio(census(CAT, 4), PropBParams(t0=4))


def test_growth_rate():
    estimate = growth_rate(census(CAT, 20))
    assert estimate.horizon == 20
    assert estimate.relative_error < Fraction(5, 100)
    assert estimate.relative_error < estimate.raw_relative_error
    # log of the golden ratio squared
    assert abs(float(estimate.target) - 0.9624236501) < 1e-9
    sheared = growth_rate(census(Hyperbolic2.from_rows([[3, 2], [1, 1]]), 15))
    assert sheared.relative_error < Fraction(8, 100)
    assert sheared.relative_error < sheared.raw_relative_error
    assert sheared.estimate - sheared.raw_estimate > 0
    with pytest.raises(InvalidInputError):
        growth_rate(census(CAT, 4))


def test_geometric_period():
    flow = build_suspension(CAT)
    catalog = flow.catalog(3)
    orbit = catalog.get("p3-i0")
    assert geometric_period(orbit, Fraction(1, 2)) == Fraction(3, 2)
    assert geometric_period(orbit, 1) == 3

    path = SurgeryPath(flow, (SurgeryMove(catalog.get("p1-i0"), 2), SurgeryMove(catalog.get("p2-i0"), -2)))
    for other in catalog.of_period(3):
        assert period_comparison_identity(path, other)
