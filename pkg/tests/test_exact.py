from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffbench.errors import ParseError
from ffbench.exact import Interval, Q, ceil_q, common_denominator, floor_q, fmt, hull, interval

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=60)


def test_coercion():
    assert Q("14/5") == Fraction(14, 5)
    assert Q(" 3 ") == 3
    assert Q(Fraction(6, 4)) == Fraction(3, 2)
    for bad in ("x", "1/0", 0.5, True, None):
        with pytest.raises(ParseError):
            Q(bad)


def test_fmt_always_writes_denominator():
    assert fmt(3) == "3/1"
    assert fmt(Fraction(-6, 4)) == "-3/2"


def test_rounding_helpers():
    assert ceil_q(Fraction(7, 2)) == 4
    assert floor_q(Fraction(-7, 2)) == -4
    assert ceil_q(Fraction(4)) == 4
    assert common_denominator([Fraction(1, 6), Fraction(3, 4), 2]) == 12


def test_interval_basics():
    a, b = interval(0, 1), interval(1, 2)
    assert a.meets(b) and not a.overlaps(b)
    assert interval(0, 2).overlaps(interval(1, 3))
    assert not a.meets(interval(2, 3))
    assert interval(0, 3).contains_interval(interval(1, 2))
    assert interval(0, 3).middle_third() == interval(1, 2)
    assert a.affine(2, 5) == interval(5, 7)
    assert hull([a, interval(4, 5)]) == interval(0, 5)
    with pytest.raises(ValueError):
        Interval(Fraction(2), Fraction(1))


@given(rationals, rationals, rationals, rationals)
def test_meets_matches_endpoint_rule(a, b, c, d):
    x, y = Interval(min(a, b), max(a, b)), Interval(min(c, d), max(c, d))
    assert x.meets(y) == y.meets(x) == (max(x.lo, y.lo) <= min(x.hi, y.hi))


@given(rationals)
def test_fmt_roundtrip(x):
    assert Q(fmt(x)) == x
