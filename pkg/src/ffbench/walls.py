"""Wall builders: cliques, towers, color dropping and the cap-to-wall expansion."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .caps import VertexCap, verify_vertex_cap
from .errors import BudgetExceeded, EmptyInput, InvalidCap
from .exact import Interval, ceil_q, floor_q, hull
from .ivg import Wall, clique_size, squeeze

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExpansionBudget:
    max_vertices: int = 1_000_000
    parallel_fill: bool = False

    def __post_init__(self):
        if self.max_vertices < 1:
            raise ValueError("max_vertices must be at least 1")


@dataclass(frozen=True)
class ExpansionConstants:
    c: Fraction
    b: Fraction


def clique_wall(k: int) -> Wall:
    """k copies of [0, 1] colored 1..k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    unit = Interval(0, 1)
    return Wall((unit,) * k, range(1, k + 1), Fraction(1) if k else Fraction(0))


def _ratio(family, colors) -> Fraction:
    if not family:
        return Fraction(0)
    return Fraction(len(set(colors)), clique_size(family))


def drop_color(wall: Wall, end: str = "highest") -> Wall:
    """Remove the highest color class, or the lowest one and shift the rest down."""
    if len(wall) == 0:
        raise EmptyInput("cannot drop a color from an empty wall")
    if end not in ("highest", "lowest"):
        raise ValueError("end must be 'highest' or 'lowest'")
    target = max(wall.colors) if end == "highest" else min(wall.colors)
    shift = 1 if end == "lowest" else 0
    keep = [v for v, c in enumerate(wall.colors) if c != target]
    family = [wall.family[v] for v in keep]
    colors = [wall.colors[v] - shift for v in keep]
    return Wall(family, colors, _ratio(family, colors))


# towers

_SLOTS = ((2, 3), (6, 7), (10, 11), (14, 15))


def tower_size(i: int) -> int:
    n = 1
    for _ in range(i):
        n = 4 * n + 4
    return n


def tower_wall(i: int, budget: ExpansionBudget | None = None) -> Wall:
    """The tower T_i: 3i+1 colors on clique size i+1.

    T_i places four copies of T_{i-1} at [2,3], [6,7], [10,11], [14,15] and
    adds [1,5], [12,16] (new color m+1), [4,9] (m+2) and [8,13] (m+3), where
    m = 3i-2 is the color count of T_{i-1}.
    """
    if i < 0:
        raise ValueError("i must be nonnegative")
    budget = budget or ExpansionBudget()
    if tower_size(i) > budget.max_vertices:
        raise BudgetExceeded(f"T_{i} has {tower_size(i)} vertices > {budget.max_vertices}")
    family = [Interval(0, 1)]
    colors = [1]
    for level in range(1, i + 1):
        m = 3 * level - 2
        new_family, new_colors = [], []
        for lo, hi in _SLOTS:
            new_family.extend(squeeze(family, Interval(lo, hi)))
            new_colors.extend(colors)
        for (lo, hi), c in (((1, 5), m + 1), ((12, 16), m + 1), ((4, 9), m + 2), ((8, 13), m + 3)):
            new_family.append(Interval(lo, hi))
            new_colors.append(c)
        family, colors = new_family, new_colors
    return Wall(family, colors, Fraction(3 * i + 1, i + 1))


# cap -> wall


def expansion_constants(cap: VertexCap) -> ExpansionConstants:
    c = Fraction(max(-run.c for run in cap.runs))
    return ExpansionConstants(c, cap.r * c)


def cap_to_wall(cap: VertexCap, k: int, budget: ExpansionBudget | None = None) -> Wall:
    """Expand a vertex cap into a wall of clique size at most k (exactly k when k >= 1).

    For k < c the wall is a k-clique.  Otherwise, every void under a strip J
    (deepest cone level c_J) receives a copy of the wall built for
    k - floor(-c_J / r), squeezed into the middle third of J and recolored so
    its top color lands on c_J.  Shifting by T = ceil(rk - b) and discarding
    colors <= 0 leaves T or more colors; a k-clique is appended on the right
    when the assembly falls short of clique size k.
    """
    budget = budget or ExpansionBudget()
    if k < 0:
        raise ValueError("k must be nonnegative")
    report = verify_vertex_cap(cap)
    if not report.ok:
        raise InvalidCap(f"cap fails verification: {report.violations[:3]}")
    consts = expansion_constants(cap)
    r = cap.r
    if k >= consts.c and len(cap) > budget.max_vertices:
        raise BudgetExceeded(f"cap alone has {len(cap)} vertices > {budget.max_vertices}")
    n_cap = len(cap)
    groups = {}
    for run in cap.runs:
        groups[run.J] = max(groups.get(run.J, run.c), run.c)
    voids = sorted(groups.items(), key=lambda item: (item[0].lo, item[0].hi))
    right = hull(run.I for run in cap.runs).hi
    memo: dict = {}

    def build(kk: int) -> Wall:
        if kk in memo:
            return memo[kk]
        if kk < consts.c:
            wall = clique_wall(kk)
        else:
            subs = [build(kk - floor_q(Fraction(-cg) / r)) for _, cg in voids]
            size = n_cap + sum(len(w) for w in subs) + kk
            if size > budget.max_vertices:
                raise BudgetExceeded(f"expansion at k={kk} needs up to {size} vertices > {budget.max_vertices}")
            wall = _assemble(kk, subs)
        log.debug("template k=%d: %d vertices, %d colors", kk, len(wall), wall.color_count)
        memo[kk] = wall
        return wall

    def _fill(args):
        (J, cg), sub, shift = args
        top = max(sub.colors, default=0)
        fam = squeeze(sub.family, J.middle_third())
        return [(iv, cg - (top - x) + shift) for iv, x in zip(fam, sub.colors)]

    def _assemble(kk: int, subs) -> Wall:
        shift = ceil_q(r * kk - consts.b)
        family, colors = [], []
        for run in cap.runs:
            for f in range(run.top_color, max(run.low_color, 1 - shift) - 1, -1):
                family.append(run.I)
                colors.append(f + shift)
        jobs = [(void, sub, shift) for void, sub in zip(voids, subs)]
        if budget.parallel_fill and len(jobs) > 1:
            with ThreadPoolExecutor() as pool:
                filled = list(pool.map(_fill, jobs))
        else:
            filled = [_fill(job) for job in jobs]
        for part in filled:
            for iv, col in part:
                if col >= 1:
                    family.append(iv)
                    colors.append(col)
        omega = clique_size(family) if family else 0
        if omega < kk:
            family.extend(Interval(right + 1, right + 2) for _ in range(kk))
            colors.extend(range(1, kk + 1))
        return Wall(family, colors, Fraction(max(shift, 0), kk) if kk else Fraction(0))

    return build(k)
