"""Exact rationals and closed intervals.

``fractions.Fraction`` already keeps numerator/denominator in lowest terms with
a positive denominator, so it is used directly as the exact number type.  This
module adds the closed :class:`Interval`, the ``"p/q"`` text format used by all
file formats, and a few integer helpers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Union

from .errors import ParseError

RationalLike = Union[int, Fraction, str]


def Q(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: they would silently smuggle rounding into exact paths.
    """
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {value!r}") from exc
    raise ParseError(f"not an exact rational: {value!r}")


def fmt(x: Fraction | int) -> str:
    """Serialize as ``"p/q"`` in lowest terms (denominator always written)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def ceil_q(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def floor_q(x: Fraction) -> int:
    return x.numerator // x.denominator


def common_denominator(values: Iterable[Fraction]) -> int:
    return lcm(1, *(Fraction(v).denominator for v in values))


@dataclass(frozen=True, order=True)
class Interval:
    """Closed interval ``[lo, hi]`` with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Q(self.lo), Q(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def meets(self, other: Interval) -> bool:
        return max(self.lo, other.lo) <= min(self.hi, other.hi)

    def overlaps(self, other: Interval) -> bool:
        """True when the intersection has positive length."""
        return max(self.lo, other.lo) < min(self.hi, other.hi)

    def contains(self, p: Fraction) -> bool:
        return self.lo <= p <= self.hi

    def contains_interval(self, other: Interval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def affine(self, scale: Fraction, shift: Fraction) -> Interval:
        """Image under ``x -> scale*x + shift`` (orientation-aware)."""
        a, b = scale * self.lo + shift, scale * self.hi + shift
        return Interval(a, b) if a <= b else Interval(b, a)

    def middle_third(self) -> Interval:
        third = self.length / 3
        return Interval(self.lo + third, self.hi - third)

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def interval(lo: RationalLike, hi: RationalLike) -> Interval:
    return Interval(Q(lo), Q(hi))


def hull(intervals: Iterable[Interval]) -> Interval:
    ivs = list(intervals)
    if not ivs:
        raise ValueError("hull of no intervals")
    return Interval(min(i.lo for i in ivs), max(i.hi for i in ivs))
