"""Interval graphs, first-fit, and wall verification.

A family is a tuple of closed :class:`~ffbench.exact.Interval` objects indexed
by vertex id; two vertices are adjacent when their intervals meet.  Colorings
are tuples of ints indexed the same way.

All sweeps run on integer ranks of the distinct endpoints, so the exact
rationals are compared once (while sorting) and never again.
"""

from __future__ import annotations

import logging
from bisect import bisect_right
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Sequence

from .errors import BadOrder, DegenerateTarget, EmptyInput
from .exact import Interval, Q, hull

log = logging.getLogger(__name__)

IntervalFamily = tuple  # tuple[Interval, ...], vertex id = position
Coloring = tuple  # tuple[int, ...], vertex id = position


@dataclass(frozen=True)
class Wall:
    family: tuple
    colors: tuple
    declared_ratio: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "family", tuple(self.family))
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        object.__setattr__(self, "declared_ratio", Q(self.declared_ratio))
        if len(self.family) != len(self.colors):
            raise ValueError("family and colors differ in length")

    def __len__(self):
        return len(self.family)

    @property
    def color_count(self) -> int:
        return len(set(self.colors))


@dataclass
class WallReport:
    clique_size: int
    color_count: int
    ratio: Fraction
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _ranks(family: Sequence[Interval]):
    """Map endpoints to dense integer ranks preserving order and equality."""
    coords = sorted({x for iv in family for x in (iv.lo, iv.hi)})
    rank = {x: i for i, x in enumerate(coords)}
    return [rank[iv.lo] for iv in family], [rank[iv.hi] for iv in family]


def clique_size(family: Sequence[Interval]) -> int:
    """Maximum number of intervals sharing a point (= omega for interval graphs)."""
    if not family:
        raise EmptyInput("clique_size of an empty family")
    los, his = _ranks(family)
    # closed intervals: at equal coordinates openings (0) sort before closings (1)
    events = sorted([(x, 0) for x in los] + [(x, 1) for x in his])
    depth = best = 0
    for _, kind in events:
        if kind == 0:
            depth += 1
            best = max(best, depth)
        else:
            depth -= 1
    return best


def edges(family: Sequence[Interval]) -> set:
    """Edge set as pairs ``(u, v)`` with ``u < v``.  Quadratic; for tests."""
    n = len(family)
    return {
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if family[u].meets(family[v])
    }


class _ColorIndex:
    """Per-color sorted interval lists answering 'does color c meet [a, b]?'.

    Works for arbitrary (possibly overlapping) classes by keeping a prefix
    maximum of right ends over the lo-sorted list.
    """

    def __init__(self, los, his, colors):
        by_color = defaultdict(list)
        for lo, hi, c in zip(los, his, colors):
            by_color[c].append((lo, hi))
        self._los = {}
        self._premax = {}
        for c, ivs in by_color.items():
            ivs.sort()
            self._los[c] = [a for a, _ in ivs]
            self._premax[c] = list(accumulate((b for _, b in ivs), max))

    def meets(self, c, a, b) -> bool:
        los = self._los.get(c)
        if not los:
            return False
        idx = bisect_right(los, b) - 1
        return idx >= 0 and self._premax[c][idx] >= a


def first_fit(family: Sequence[Interval], order: Sequence[int]) -> Coloring:
    """Color vertices in ``order`` with the least positive color not on a colored neighbor."""
    n = len(family)
    if sorted(order) != list(range(n)):
        raise BadOrder("order is not a permutation of the vertex ids")
    los, his = _ranks(family)
    # first-fit colorings are proper, so each class is a set of disjoint intervals
    class_los: list = []
    class_his: list = []
    colors = [0] * n
    for v in order:
        a, b = los[v], his[v]
        c = 0
        while c < len(class_los):
            cl = class_los[c]
            idx = bisect_right(cl, b) - 1
            if idx >= 0 and class_his[c][idx] >= a:
                c += 1
                continue
            break
        if c == len(class_los):
            class_los.append([])
            class_his.append([])
        pos = bisect_right(class_los[c], a)
        class_los[c].insert(pos, a)
        class_his[c].insert(pos, b)
        colors[v] = c + 1
    return tuple(colors)


def color_sorted_order(wall: Wall) -> list:
    """Vertex ids by ascending color, ties by id."""
    return sorted(range(len(wall)), key=lambda v: (wall.colors[v], v))


def verify_wall(wall: Wall) -> WallReport:
    """Check properness, positivity, support, the ratio bound, and the first-fit replay."""
    n = len(wall)
    colors = wall.colors
    if n == 0:
        # r * 0 = 0 colors are required, so the empty wall is vacuously clean
        return WallReport(0, 0, Fraction(0))

    omega = clique_size(wall.family)
    count = wall.color_count
    violations = []
    los, his = _ranks(wall.family)

    for v, c in enumerate(colors):
        if c < 1:
            violations.append((v, f"color {c} is not positive"))

    by_color = defaultdict(list)
    for v, c in enumerate(colors):
        by_color[c].append(v)
    for c, members in sorted(by_color.items()):
        members.sort(key=lambda v: (los[v], his[v]))
        reach, holder = -1, None
        for v in members:
            if los[v] <= reach:
                violations.append((v, f"improper: shares color {c} with adjacent vertex {holder}"))
            if his[v] > reach:
                reach, holder = his[v], v

    index = _ColorIndex(los, his, colors)
    for v, c in enumerate(colors):
        missing = [k for k in range(1, c) if not index.meets(k, los[v], his[v])]
        if missing:
            shown = ", ".join(map(str, missing[:8])) + (", ..." if len(missing) > 8 else "")
            violations.append((v, f"unsupported: colors {shown} absent from N[v]"))

    if count < wall.declared_ratio * omega:
        violations.append(
            (None, f"{count} colors < declared ratio {wall.declared_ratio} * clique size {omega}")
        )

    if not any(c < 1 for c in colors):
        replay = first_fit(wall.family, color_sorted_order(wall))
        for v in range(n):
            if replay[v] != colors[v]:
                violations.append((v, f"first-fit replay gives color {replay[v]}, wall has {colors[v]}"))

    report = WallReport(omega, count, Fraction(count, omega), violations)
    log.debug("verify_wall: n=%d omega=%d colors=%d violations=%d", n, omega, count, len(violations))
    return report


def squeeze(family: Sequence[Interval], target: Interval) -> tuple:
    """Increasing affine image of ``family`` whose bounding interval becomes ``target``."""
    if target.length <= 0:
        raise DegenerateTarget(f"target {target} has no length")
    if not family:
        return ()
    box = hull(family)
    if box.length == 0:
        # all intervals are the same point; any interior point preserves adjacency
        mid = (target.lo + target.hi) / 2
        return tuple(Interval(mid, mid) for _ in family)
    if box == target:
        return tuple(family)
    scale = target.length / box.length
    shift = target.lo - scale * box.lo
    return tuple(Interval(scale * iv.lo + shift, scale * iv.hi + shift) for iv in family)


def is_proper(family: Sequence[Interval], colors: Sequence[int]) -> bool:
    los, his = _ranks(family)
    by_color = defaultdict(list)
    for v, c in enumerate(colors):
        by_color[c].append((los[v], his[v]))
    for ivs in by_color.values():
        ivs.sort()
        reach = -1
        for a, b in ivs:
            if a <= reach:
                return False
            reach = max(reach, b)
    return True
