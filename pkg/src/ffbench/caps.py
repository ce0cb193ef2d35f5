"""Box-level rational caps, vertex-level caps, and their verifiers.

Depths are measured downward from the cap top and are nonnegative rationals.
A box occupies the rectangle ``x × [top, top + height]``; its cone is the top
of a void ``cone_x × [cone_depth, ∞)`` reserved for an older wall.

Each box records the box it supports and on which side of that box's cone it
sits (``"L"`` or ``"R"``; the top box has side ``"C"``).  That binary tree,
read in order, fixes the left-to-right order of the cones, which is all
:func:`assign_layout` needs to turn declared weight sets into coordinates.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import NonIntegral, Unembeddable
from .exact import Interval, Q, common_denominator

SIDES = ("L", "R", "C")


@dataclass(frozen=True)
class CapBox:
    id: str
    top: Fraction
    height: Fraction
    cone_depth: Fraction
    supports: str | None = None
    side: str = "C"
    x: Interval | None = None
    cone_x: Interval | None = None
    weight: frozenset | None = None  # declared weight set, used by assign_layout

    def __post_init__(self):
        for name in ("top", "height", "cone_depth"):
            object.__setattr__(self, name, Q(getattr(self, name)))
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {self.side!r}")
        if self.weight is not None:
            object.__setattr__(self, "weight", frozenset(self.weight))

    @property
    def bottom(self) -> Fraction:
        return self.top + self.height


@dataclass(frozen=True)
class BoxCap:
    r: Fraction
    boxes: tuple

    def __post_init__(self):
        object.__setattr__(self, "r", Q(self.r))
        object.__setattr__(self, "boxes", tuple(self.boxes))
        ids = [b.id for b in self.boxes]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate box ids")

    def __len__(self):
        return len(self.boxes)

    def box(self, box_id: str) -> CapBox:
        return self._index()[box_id]

    def _index(self) -> dict:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {b.id: b for b in self.boxes}
            object.__setattr__(self, "_idx", idx)
        return idx

    def supporters(self, box_id: str) -> list:
        return [b for b in self.boxes if b.supports == box_id]

    def children(self) -> dict:
        kids = defaultdict(list)
        for b in self.boxes:
            if b.supports is not None:
                kids[b.supports].append(b)
        return kids

    def subtree(self, root_id: str) -> list:
        """Ids of ``root_id`` and everything that (transitively) supports it."""
        kids = self.children()
        out, stack = [], [root_id]
        while stack:
            bid = stack.pop()
            out.append(bid)
            stack.extend(k.id for k in reversed(kids.get(bid, [])))
        return out

    def with_r(self, r) -> BoxCap:
        return BoxCap(Q(r), self.boxes)

    @property
    def total_height(self) -> Fraction:
        return sum((b.height for b in self.boxes), Fraction(0))


@dataclass(frozen=True)
class Quasicap:
    cap: BoxCap
    key_box: str
    twins: tuple  # (upper, lower)
    theta: Fraction

    @property
    def r(self) -> Fraction:
        return self.cap.r

    @property
    def gap(self) -> tuple:
        """Depth range the twins may leave uncovered: from the lower twin's bottom to the key top."""
        return (Fraction(2), self.cap.r - self.theta)


@dataclass
class CapReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, ident, condition, witness):
        self.violations.append((ident, condition, witness))

    def conditions(self) -> set:
        return {c for _, c, _ in self.violations}


# ---------------------------------------------------------------------------
# box-level verification


def _union_length(spans) -> Fraction:
    total = Fraction(0)
    end = None
    for a, b in sorted(spans):
        if end is None or a > end:
            total += b - a
            end = b
        elif b > end:
            total += b - end
            end = b
    return total


def _cells(iv: Interval, cuts) -> list:
    """Points and open pieces of ``iv`` between the given cut coordinates.

    Each cell is ``(probe_lo, probe_hi)``: a box's closed x contains the whole
    cell iff ``x.lo <= probe_lo and probe_hi <= x.hi``.
    """
    pts = sorted({iv.lo, iv.hi, *(c for c in cuts if iv.lo < c < iv.hi)})
    cells = [(p, p) for p in pts]
    cells += [(a, b) for a, b in zip(pts, pts[1:])]
    return cells


def cone_weight(cap: BoxCap, box: CapBox):
    """Worst cell of ``box``'s cone: returns ``(weight, cell, boxes_over_cell)``.

    Weight is the length of depth ``[0, cone_depth]`` covered by boxes whose
    closed x-extent contains the cell.
    """
    near = [b for b in cap.boxes if b.x.meets(box.cone_x)]
    cuts = {e for b in near for e in (b.x.lo, b.x.hi)}
    worst = (Fraction(-1), None, [])
    for lo, hi in _cells(box.cone_x, cuts):
        over = [b for b in near if b.x.lo <= lo and hi <= b.x.hi]
        spans = [(b.top, min(b.bottom, box.cone_depth)) for b in over if b.top < box.cone_depth]
        w = _union_length(spans)
        if w > worst[0]:
            worst = (w, (lo, hi), over)
    return worst


def weight_set(cap: BoxCap, box: CapBox) -> frozenset:
    """Ids of boxes above the cone whose x meets ``cone_x`` (geometric weight set)."""
    return frozenset(
        b.id for b in cap.boxes if b.x.meets(box.cone_x) and b.top < box.cone_depth
    )


def verify_box_cap(cap: BoxCap, gaps: Mapping | None = None) -> CapReport:
    """Check emptiness, sparseness, support and area-0 overlap of a rational cap.

    ``gaps`` maps box id to a depth range ``(lo, hi)`` excused from the support
    requirement; quasicaps use it for the twins' gap above the key box.
    """
    gaps = gaps or {}
    rep = CapReport()
    r = cap.r
    boxes = sorted(cap.boxes, key=lambda b: b.id)
    if not boxes:
        rep.add(None, "nonempty", "cap has no boxes")
        return rep

    tops = [b for b in boxes if b.supports is None]
    if len(tops) != 1:
        rep.add(None, "top", f"expected one top box, found {len(tops)}")
    if not any(b.top == 0 for b in boxes):
        rep.add(None, "top", "no box at depth 0")
    index = cap._index()

    for b in boxes:
        if b.height <= 0:
            rep.add(b.id, "shape", f"height {b.height} not positive")
        if b.top < 0:
            rep.add(b.id, "shape", f"top {b.top} above the cap top")
        if b.x is None or b.cone_x is None:
            rep.add(b.id, "shape", "missing horizontal extent")
            continue
        if b.cone_x.length <= 0:
            rep.add(b.id, "emptiness", f"cone strip {b.cone_x} has no width")
        if not b.x.contains_interval(b.cone_x):
            rep.add(b.id, "emptiness", f"cone strip {b.cone_x} not inside {b.x}")
        if b.cone_depth < b.bottom:
            rep.add(b.id, "emptiness", f"cone at {b.cone_depth} above own bottom {b.bottom}")
        if b.supports is not None and b.supports not in index:
            rep.add(b.id, "support", f"supports unknown box {b.supports!r}")
    if rep.violations and any(c == "shape" for c in rep.conditions()):
        return rep

    # cone strips must coincide or be disjoint
    strips = sorted({b.cone_x for b in boxes}, key=lambda iv: (iv.lo, iv.hi))
    for a, c in zip(strips, strips[1:]):
        if a.meets(c):
            rep.add(None, "cones", f"cone strips {a} and {c} meet without being equal")

    # pairwise area 0: sweep over x
    order = sorted(boxes, key=lambda b: b.x.lo)
    active = []
    for b in order:
        active = [a for a in active if a.x.hi > b.x.lo]
        for a in active:
            if a.x.overlaps(b.x) and max(a.top, b.top) < min(a.bottom, b.bottom):
                rep.add(b.id, "overlap", f"meets {a.id} in positive area")
        active.append(b)

    for b in boxes:
        d = b.cone_depth
        w, cell, over = cone_weight(cap, b)
        for o in over:
            if o.bottom > d:
                rep.add(b.id, "emptiness", f"box {o.id} reaches depth {o.bottom} below cone at {d}")
        if d < r * w:
            rep.add(b.id, "sparseness", f"cell {cell}: d={d} < r*w={r}*{w}")

        sups = [s for s in boxes if s.supports == b.id]
        if len(sups) > 2:
            rep.add(b.id, "support", f"{len(sups)} supporters (at most two allowed)")
        for s in sups:
            if not s.x.meets(b.x):
                rep.add(b.id, "support", f"supporter {s.id} does not meet it horizontally")
        spans = [(s.top, s.bottom) for s in sups if s.x.meets(b.x)]
        if b.id in gaps:
            spans.append(tuple(Q(v) for v in gaps[b.id]))
        hole = _first_uncovered(b.bottom, d, spans)
        if hole is not None:
            rep.add(b.id, "support", f"depths {hole} between bottom {b.bottom} and cone {d} uncovered")
    return rep


def _first_uncovered(lo, hi, spans):
    at = lo
    for a, b in sorted(spans):
        if a > at:
            break
        at = max(at, b)
        if at >= hi:
            return None
    return None if at >= hi else (at, hi)


# ---------------------------------------------------------------------------
# layout


def _in_order(cap: BoxCap) -> list:
    roots = [b for b in cap.boxes if b.supports is None]
    if len(roots) != 1:
        raise Unembeddable(f"need exactly one top box, found {len(roots)}")
    index = cap._index()
    kids = defaultdict(dict)
    for b in cap.boxes:
        if b.supports is None:
            continue
        if b.supports not in index:
            raise Unembeddable(f"{b.id} supports unknown box {b.supports!r}")
        if b.side not in ("L", "R"):
            raise Unembeddable(f"supporter {b.id} must sit left or right of the cone")
        if b.side in kids[b.supports]:
            raise Unembeddable(f"{b.supports} has two supporters on side {b.side}")
        kids[b.supports][b.side] = b.id
    out, stack, node = [], [], roots[0].id
    while stack or node is not None:
        while node is not None:
            stack.append(node)
            node = kids[node].get("L")
        node = stack.pop()
        out.append(node)
        node = kids[node].get("R")
    if len(out) != len(cap.boxes):
        raise Unembeddable("support links do not form a single tree")
    return out


def _depth_overlap(a: CapBox, b: CapBox) -> bool:
    return max(a.top, b.top) < min(a.bottom, b.bottom)


def assign_layout(skeleton: BoxCap) -> BoxCap:
    """Assign x-extents and cone strips realizing every declared weight set.

    Cone strips are unit slots in support-tree in-order.  Each box covers
    exactly the slots of the cones that must see it; its ends sit in the gaps
    next to those slots, ordered so that supporters meet the boxes they support
    and boxes sharing a level stay apart.  The layout is normalized to [0, 1].
    """
    order = _in_order(skeleton)
    pos = {bid: i for i, bid in enumerate(order)}
    index = skeleton._index()
    m = len(order)

    seen_by = defaultdict(list)
    for b in skeleton.boxes:
        if b.weight is None:
            raise Unembeddable(f"{b.id} declares no weight set")
        if b.id not in b.weight:
            raise Unembeddable(f"cone of {b.id} must see {b.id} itself")
        for a in b.weight:
            if a not in index:
                raise Unembeddable(f"weight set of {b.id} names unknown box {a!r}")
            seen_by[a].append(pos[b.id])

    span = {}
    for bid, slots in seen_by.items():
        lo, hi = min(slots), max(slots)
        if hi - lo + 1 != len(slots):
            missing = sorted(set(range(lo, hi + 1)) - set(slots))
            raise Unembeddable(
                f"{bid} must cover cones at slots {sorted(slots)} but avoid slot(s) {missing} between them"
            )
        span[bid] = (lo, hi)

    by_slot = defaultdict(list)
    for bid, (lo, hi) in span.items():
        for s in range(lo, hi + 1):
            by_slot[s].append(index[bid])
    for s, over in by_slot.items():
        over.sort(key=lambda b: b.top)
        for a, b in zip(over, over[1:]):
            if a.bottom > b.top:
                raise Unembeddable(f"{a.id} and {b.id} share levels above the cone of {order[s]}")

    # endpoints living in each gap; gap g lies just left of slot g
    ends = defaultdict(list)  # gap -> ids whose right end is there
    starts = defaultdict(list)  # gap -> ids whose left end is there
    for bid in order:
        lo, hi = span[bid]
        starts[lo].append(bid)
        ends[hi + 1].append(bid)

    for b in skeleton.boxes:
        if b.supports is None:
            continue
        p, s = span[b.supports], span[b.id]
        if max(p[0], s[0]) <= min(p[1], s[1]):
            continue
        if s[1] + 1 != p[0] and p[1] + 1 != s[0]:
            raise Unembeddable(
                f"supporter {b.id} (slots {s}) cannot reach {b.supports} (slots {p})"
            )
    for a in skeleton.boxes:
        for b in skeleton.boxes:
            if a.id < b.id and _depth_overlap(a, b):
                (a0, a1), (b0, b1) = span[a.id], span[b.id]
                if max(a0, b0) <= min(a1, b1):
                    raise Unembeddable(f"{a.id} and {b.id} share levels and a cone slot")

    coord = {}  # (id, 'lo'|'hi') -> position in slot units
    for g in range(m + 1):
        placed = _order_gap(ends[g], starts[g], index)
        k = len(placed)
        for t, key in enumerate(placed):
            if g == 0:
                x = Fraction(t, k)
            elif g == m:
                x = 3 * m - 1 + Fraction(t + 1, k)
            else:
                x = 3 * g - 1 + Fraction(2 * (t + 1), k + 1)
            coord[key] = x

    scale = Fraction(1, 3 * m)
    boxes = []
    for b in skeleton.boxes:
        i = pos[b.id]
        boxes.append(
            replace(
                b,
                x=Interval(coord[(b.id, "lo")] * scale, coord[(b.id, "hi")] * scale),
                cone_x=Interval((3 * i + 1) * scale, (3 * i + 2) * scale),
            )
        )
    return BoxCap(skeleton.r, boxes)


def _order_gap(enders, starters, index) -> list:
    """Order the endpoints inside one gap.

    Edges ``u -> v`` mean ``u`` lies left of ``v``: a supporter pair must
    overlap (left end of the starter before right end of the ender); a pair
    sharing levels must not.  Unconstrained right ends go first.
    """
    nodes = [(e, "hi") for e in enders] + [(s, "lo") for s in starters]
    succ = defaultdict(list)
    indeg = {n: 0 for n in nodes}
    for e in enders:
        for s in starters:
            be, bs = index[e], index[s]
            if be.supports == s or bs.supports == e:
                u, v = (s, "lo"), (e, "hi")
            elif _depth_overlap(be, bs):
                u, v = (e, "hi"), (s, "lo")
            else:
                continue
            succ[u].append(v)
            indeg[v] += 1
    rank = {n: i for i, n in enumerate(nodes)}
    heap = [(0 if n[1] == "hi" else 1, rank[n], n) for n in nodes if indeg[n] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        _, _, n = heapq.heappop(heap)
        out.append(n)
        for v in succ[n]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, (0 if v[1] == "hi" else 1, rank[v], v))
    if len(out) != len(nodes):
        raise Unembeddable("supporter and level constraints in one gap are cyclic")
    return out


def skeleton_of(cap: BoxCap) -> BoxCap:
    """Strip coordinates, recording each box's geometric weight set instead."""
    boxes = [
        replace(b, x=None, cone_x=None, weight=weight_set(cap, b)) for b in cap.boxes
    ]
    return BoxCap(cap.r, boxes)


# ---------------------------------------------------------------------------
# the Chrobak-Slusarek 4-cap

# (id, top, height, cone, supports, side, weight) for the right half; "TWIN" is
# the lower twin, the box this half hangs from.
_CS_RIGHT = (
    ("c", 2, 2, 8, "TWIN", "R", ("c",)),
    ("e", 7, 1, 8, "c", "L", ("TWIN", "e")),
    ("f", 4, 3, 12, "c", "R", ("f",)),
    ("h", 11, 1, 12, "f", "L", ("c", "h")),
    ("i", 7, 4, 16, "f", "R", ("i",)),
    ("k", 15, 1, 16, "i", "L", ("f", "k")),
    ("l", 11, 4, 16, "i", "R", ("l",)),
    ("n", 15, 1, 16, "l", "R", ("n",)),
)


@dataclass(frozen=True)
class HalfNode:
    """A box of the key-side half of a normal cap, in local names.

    ``parent`` and ``weight`` may name ``"TWIN"``: the twin the half hangs
    from.  ``side`` is absolute for the right half and is flipped on mirroring.
    """

    id: str
    top: Fraction
    height: Fraction
    cone_depth: Fraction
    parent: str
    side: str
    weight: frozenset


TWIN = "TWIN"


def mirror_side(side: str) -> str:
    return {"L": "R", "R": "L"}.get(side, side)


def assemble_normal(r, half: Iterable[HalfNode], layout: bool = True) -> BoxCap:
    """Twins at the top, ``half`` on the right, its mirror image on the left."""
    r = Q(r)
    half = list(half)
    boxes = [
        CapBox("U", 0, 1, r, None, "C", weight={"U"}),
        CapBox("W", 1, 1, r, "U", "R", weight={"W"}),
    ]
    for prefix, twin, flip in (("R.", "W", False), ("L.", "U", True)):
        name = lambda local: twin if local == TWIN else prefix + local  # noqa: E731
        for nd in half:
            boxes.append(
                CapBox(
                    prefix + nd.id,
                    nd.top,
                    nd.height,
                    nd.cone_depth,
                    name(nd.parent),
                    mirror_side(nd.side) if flip else nd.side,
                    weight={name(a) for a in nd.weight},
                )
            )
    skeleton = BoxCap(r, boxes)
    return assign_layout(skeleton) if layout else skeleton


def cs_half() -> list:
    return [
        HalfNode(i, Q(t), Q(h), Q(c), p, s, frozenset(w)) for i, t, h, c, p, s, w in _CS_RIGHT
    ]


def build_cs_4cap() -> BoxCap:
    """The 4-cap of Chrobak and Slusarek: 2 twins and 8 boxes per side."""
    return assemble_normal(4, cs_half())


# ---------------------------------------------------------------------------
# scaling and the vertex-level model


def scale_to_integers(cap: BoxCap) -> BoxCap:
    """Multiply all depths and heights by the lcm of their denominators."""
    L = common_denominator(v for b in cap.boxes for v in (b.top, b.height, b.cone_depth))
    if L == 1:
        return cap
    return BoxCap(
        cap.r,
        [replace(b, top=b.top * L, height=b.height * L, cone_depth=b.cone_depth * L) for b in cap.boxes],
    )


@dataclass(frozen=True)
class VertexRun:
    """``count`` vertices with interval ``I``, strip ``J`` and colors
    ``top_color, top_color - 1, ...``; all share cone level ``c``."""

    I: Interval
    J: Interval
    top_color: int
    count: int
    c: int
    label: str = ""

    @property
    def low_color(self) -> int:
        return self.top_color - self.count + 1


@dataclass(frozen=True)
class VertexCap:
    """Vertex-level cap stored as runs so that huge scaled heights stay cheap."""

    r: Fraction
    runs: tuple

    def __post_init__(self):
        object.__setattr__(self, "r", Q(self.r))
        object.__setattr__(self, "runs", tuple(self.runs))

    def __len__(self):
        return sum(run.count for run in self.runs)

    def vertices(self):
        """Yield ``(vertex_id, I, J, f, c)`` for every vertex."""
        vid = 0
        for run in self.runs:
            for j in range(run.count):
                yield vid, run.I, run.J, run.top_color - j, run.c
                vid += 1

    @classmethod
    def from_vertices(cls, r, vertices) -> VertexCap:
        runs = [VertexRun(I, J, f, 1, c) for _, I, J, f, c in sorted(vertices, key=lambda v: v[0])]
        return cls(r, runs)

    def first_ids(self) -> list:
        out, vid = [], 0
        for run in self.runs:
            out.append(vid)
            vid += run.count
        return out


def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


def lower_to_vertex_cap(cap: BoxCap) -> VertexCap:
    """Each h-tall box becomes h unit vertices sharing ``I = x`` and ``J = cone_x``."""
    runs = []
    for b in cap.boxes:
        if not (_is_int(b.top) and _is_int(b.height) and _is_int(b.cone_depth)):
            raise NonIntegral(f"box {b.id} has non-integral depths; scale first")
        runs.append(
            VertexRun(b.x, b.cone_x, -int(b.top), int(b.height), -int(b.cone_depth), b.id)
        )
    return VertexCap(cap.r, runs)


def _merge(ranges):
    out = []
    for a, b in sorted(ranges):
        if out and a <= out[-1][1] + 1:
            if b > out[-1][1]:
                out[-1][1] = b
        else:
            out.append([a, b])
    return out


def _count_in(merged, lo, hi) -> int:
    """Integers of the merged ranges inside [lo, hi]."""
    total = 0
    for a, b in merged:
        a, b = max(a, lo), min(b, hi)
        if a <= b:
            total += b - a + 1
    return total


def _missing(merged, lo, hi):
    """First integer of [lo, hi] not covered by the merged ranges, or None."""
    at = lo
    for a, b in merged:
        if b < at:
            continue
        if a > at:
            return at
        at = b + 1
        if at > hi:
            return None
    return at if at <= hi else None


def verify_vertex_cap(cap: VertexCap) -> CapReport:
    """Emptiness, sparseness and support over integer colors, plus properness."""
    rep = CapReport()
    runs = cap.runs
    ids = cap.first_ids()
    if not runs:
        rep.add(None, "nonempty", "cap has no vertices")
        return rep
    if not any(run.top_color == 0 for run in runs):
        rep.add(None, "top", "no vertex has color 0")
    for k, run in enumerate(runs):
        if run.count < 1:
            rep.add(ids[k], "shape", "empty run")
        if run.top_color > 0:
            rep.add(ids[k], "shape", f"color {run.top_color} is positive")
        if run.c > -1:
            rep.add(ids[k], "shape", f"cone level {run.c} is not negative")
        if run.J.length <= 0 or not run.I.contains_interval(run.J):
            rep.add(ids[k], "shape", f"J={run.J} must have positive length inside I={run.I}")

    strips = sorted({run.J for run in runs}, key=lambda iv: (iv.lo, iv.hi))
    for a, b in zip(strips, strips[1:]):
        if a.meets(b):
            rep.add(None, "cones", f"strips {a} and {b} meet without being equal")

    for i, a in enumerate(runs):
        for j in range(i + 1, len(runs)):
            b = runs[j]
            if max(a.low_color, b.low_color) <= min(a.top_color, b.top_color) and a.I.meets(b.I):
                rep.add(ids[j], "proper", f"shares a color with adjacent vertex {ids[i]}")

    seen_colors = {}
    for J in strips:
        seen_colors[J] = _merge((run.low_color, run.top_color) for run in runs if run.I.meets(J))

    for k, run in enumerate(runs):
        C = seen_colors[run.J]
        if C and C[0][0] <= run.c:
            rep.add(ids[k], "emptiness", f"color {C[0][0]} <= c={run.c} meets J")
        n_above = _count_in(C, run.c + 1, 0)
        if n_above * cap.r > -run.c:
            rep.add(ids[k], "sparseness", f"|C ∩ (c,0]| = {n_above} > -c/r = {-run.c}/{cap.r}")
        nbr = _merge((o.low_color, o.top_color) for o in runs if o.I.meets(run.I))
        hole = _missing(nbr, run.c + 1, run.top_color)
        if hole is not None:
            rep.add(ids[k], "support", f"color {hole} missing from N[v]")
    return rep
