"""Strand sequences, stop detection, the gap-reducing step and the certification pipeline.

A quasicap is kept as a normal cap: twins ``U`` (depths [0,1]) and ``W``
([1,2]) at the top, the key box ``R.<key>`` hanging from ``W`` on the right,
and a mirror image hanging from ``U`` on the left.  A gap step rebuilds only
the right half (in local box names) and re-mirrors it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .caps import (
    TWIN,
    BoxCap,
    HalfNode,
    Quasicap,
    assemble_normal,
    mirror_side,
    verify_box_cap,
    weight_set,
)
from .errors import BudgetExceeded, NotStopped, OutOfDomain, Stalled
from .exact import Q

log = logging.getLogger(__name__)

DEFAULT_CUTOFF = 10_000
DEFAULT_DIGITS = 400  # decimal digits of u_n before a scan is declared divergent


@dataclass(frozen=True)
class StrandParams:
    r: Fraction
    theta: Fraction
    delta: Fraction

    def __post_init__(self):
        for name in ("r", "theta", "delta"):
            object.__setattr__(self, name, Q(getattr(self, name)))


@dataclass(frozen=True)
class Stopped:
    N: int


@dataclass(frozen=True)
class Diverged:
    cutoff: int
    exhausted: bool = False  # True when the digit budget, not the cutoff, ended the scan


@dataclass(frozen=True)
class PatternBroken:
    n: int


def strand_sequence(p: StrandParams, limit: int) -> list:
    """u_0, ..., u_{limit-1} with u_0 = u_1 = 1 and u_2 = θ + δ."""
    a, b, c = p.r - p.theta, p.r - 2 * p.theta, p.theta
    u = [Fraction(1), Fraction(1), p.theta + p.delta][:limit]
    while len(u) < limit:
        u.append(a * u[-1] - b * u[-2] - c * u[-3])
    return u


def find_stop(p: StrandParams, cutoff: int = DEFAULT_CUTOFF, digit_budget: int = DEFAULT_DIGITS):
    """First N >= 2 with u_{N+1} <= u_N, scanning u_{n+1} for n+1 <= cutoff.

    Runs on integers v_n = M^n u_n (M the lcm of the denominators), so the
    comparison u_{n+1} <= u_n becomes v_{n+1} <= M v_n.
    """
    M = math.lcm(p.r.denominator, p.theta.denominator, p.delta.denominator)
    A = int((p.r - p.theta) * M)
    B = int((p.r - 2 * p.theta) * M * M)
    C = int(p.theta * M**3)
    v0, v1, v2 = 1, M, int((p.theta + p.delta) * M * M)
    if v2 < M * v1:
        return PatternBroken(2)
    max_bits = digit_budget * math.log2(10)
    m_bits = math.log2(M)
    n = 2  # v2 holds v_n
    while n + 1 <= cutoff:
        v3 = A * v2 - B * v1 - C * v0
        if v3 <= M * v2:
            return Stopped(n)
        v0, v1, v2 = v1, v2, v3
        n += 1
        # log2 u_n is about bits(v_n) - n log2 M
        if v2.bit_length() - n * m_bits > max_bits:
            return Diverged(n, exhausted=True)
    return Diverged(cutoff)


# quasicaps


def _half_nodes(qc: Quasicap) -> list:
    """The right half of ``qc`` in local names, weight sets read off the geometry."""
    cap = qc.cap
    upper, lower = qc.twins
    out = []
    for bid in cap.subtree(qc.key_box):
        b = cap.box(bid)
        local = lambda x: TWIN if x == lower else x[2:]  # noqa: E731
        weight = {local(a) for a in weight_set(cap, b) if a != upper}
        out.append(
            HalfNode(local(bid), b.top, b.height, b.cone_depth, local(b.supports), b.side, frozenset(weight))
        )
    return out


def initial_quasicap(r) -> Quasicap:
    """Twins with cones at depth r and a 1-tall key box at [r-1, r] on each side."""
    r = Q(r)
    if r <= 3:
        raise OutOfDomain("the initial quasicap needs r > 3")
    half = [HalfNode("k", r - 1, Fraction(1), r, TWIN, "R", frozenset({"k"}))]
    return Quasicap(assemble_normal(r, half), "R.k", ("U", "W"), Fraction(1))


def quasicap_gaps(qc: Quasicap) -> dict:
    lo, hi = qc.gap
    if hi <= lo:
        return {}
    return {qc.twins[0]: (lo, hi), qc.twins[1]: (lo, hi)}


def verify_quasicap(qc: Quasicap):
    """Box-cap verification with the twins' gap excused, plus the normality checks."""
    cap, r, theta = qc.cap, qc.r, qc.theta
    rep = verify_box_cap(cap, quasicap_gaps(qc))
    upper, lower = qc.twins
    try:
        U, W, K = cap.box(upper), cap.box(lower), cap.box(qc.key_box)
    except KeyError as exc:
        rep.add(None, "normal", f"missing box {exc}")
        return rep
    if (U.top, U.height, U.supports) != (0, 1, None):
        rep.add(upper, "normal", "upper twin must be the 1-tall top box")
    if (W.top, W.height, W.supports) != (1, 1, upper):
        rep.add(lower, "normal", "lower twin must be 1-tall at [1,2] under the upper twin")
    sups = cap.supporters(lower)
    if [s.id for s in sups] != [qc.key_box]:
        rep.add(lower, "normal", f"lower twin supporters {[s.id for s in sups]} != key box only")
    if K.height != theta or K.bottom != r:
        rep.add(qc.key_box, "key", f"key box spans [{K.top}, {K.bottom}], expected [{r - theta}, {r}]")
    for b in cap.boxes:
        if b.id not in (upper, lower) and b.top < K.top:
            rep.add(b.id, "key", f"top {b.top} above the key box top {K.top}")
    right = cap.subtree(qc.key_box)
    others = [s for s in cap.supporters(upper) if s.id != lower]
    left = cap.subtree(others[0].id) if len(others) == 1 else []

    def shape(ids, flip):
        out = []
        for bid in ids:
            b = cap.box(bid)
            out.append((b.top, b.height, b.cone_depth, mirror_side(b.side) if flip else b.side))
        return sorted(out)

    if shape(right, False) != shape(left, True):
        rep.add(None, "normal", "left and right halves are not mirror images")
    return rep


def gap_step(qc: Quasicap, delta, cutoff: int = DEFAULT_CUTOFF, budget: int | None = None) -> Quasicap:
    """Turn a θ-quasicap into a (θ+δ)-quasicap.

    The new right half is an outer strand of boxes with heights u_2..u_{N+1}
    (hanging from the lower twin) and N copies of the old right half squeezed
    vertically by y -> (u_{n+1} - u_n) y + r u_n, copy n hanging from u_{n+1}.
    Copies 1..N-1 are mirrored; copy N reuses the map of copy N-1.
    """
    r, theta, delta = qc.r, qc.theta, Q(delta)
    if delta <= 0 or theta + delta > r - 2:
        raise OutOfDomain(f"need 0 < δ and θ+δ <= r-2, got θ={theta}, δ={delta}")
    stop = find_stop(StrandParams(r, theta, delta), cutoff)
    if not isinstance(stop, Stopped):
        raise NotStopped(f"strand for (r={r}, θ={theta}, δ={delta}) gives {stop}")
    N = stop.N
    u = strand_sequence(StrandParams(r, theta, delta), N + 2)
    old = _half_nodes(qc)
    size = 2 + 2 * (N + N * len(old))
    if budget is not None and size > budget:
        raise BudgetExceeded(f"gap step would build {size} boxes > {budget}")

    def strand(n):  # local name of the outer box of height u_n; u_1 is the twin
        return TWIN if n == 1 else f"u{n}"

    half = []
    bottom = r  # the u_2 box ends at depth r; u_n for n > 2 ends at r + u_3 + ... + u_n
    for n in range(2, N + 2):
        if n > 2:
            bottom += u[n]
        top = bottom - u[n]
        cone = r * u[min(n, N)]
        half.append(HalfNode(strand(n), top, u[n], cone, strand(n - 1), "R", frozenset({strand(n)})))
    for n in range(1, N + 1):
        j = min(n, N - 1)
        scale, shift = u[j + 1] - u[j], r * u[j]
        last = n == N
        name = lambda x: strand(n + 1) if x == TWIN else f"c{n}.{x}"  # noqa: E731
        for nd in old:
            if nd.parent == TWIN:
                parent, side = strand(n + 1), ("R" if last else "L")
            else:
                parent, side = name(nd.parent), (nd.side if last else mirror_side(nd.side))
            weight = {name(a) for a in nd.weight}
            if TWIN not in nd.weight and not last:
                weight.add(strand(n))
            half.append(
                HalfNode(
                    name(nd.id),
                    scale * nd.top + shift,
                    scale * nd.height,
                    scale * nd.cone_depth + shift,
                    parent,
                    side,
                    frozenset(weight),
                )
            )
    cap = assemble_normal(r, half)
    log.debug("gap step θ=%s δ=%s N=%d: %d boxes", theta, delta, N, len(cap))
    return Quasicap(cap, "R.u2", ("U", "W"), theta + delta)


# certification pipeline


@dataclass
class Recipe:
    r: Fraction
    steps: list = field(default_factory=list)  # (theta, delta, N)

    def __post_init__(self):
        self.r = Q(self.r)
        self.steps = [(Q(t), Q(d), int(n)) for t, d, n in self.steps]

    @property
    def final_theta(self) -> Fraction:
        if not self.steps:
            return Fraction(1)
        t, d, _ = self.steps[-1]
        return t + d


def certify_r(
    r,
    delta0=1,
    cutoff: int = DEFAULT_CUTOFF,
    delta_min=Fraction(1, 2**20),
    budget: int | None = None,
    execute: bool = False,
    digit_budget: int = DEFAULT_DIGITS,
):
    """Plan (and optionally build) gap steps from θ = 1 until θ = r - 2.

    Each step tries δ = min(delta0, r-2-θ); if that strand does not stop,
    halving resumes from the previous step's δ (the margin only shrinks as θ
    grows, so larger values would fail again).  δ < delta_min raises
    :class:`Stalled`.  Returns ``(recipe, cap)``
    where ``cap`` is the final Quasicap when ``execute`` is set, else None.
    """
    r, delta0, delta_min = Q(r), Q(delta0), Q(delta_min)
    if r <= 3:
        raise OutOfDomain("certification needs r > 3")
    if delta0 <= 0 or delta_min <= 0:
        raise ValueError("delta0 and delta_min must be positive")
    theta = Fraction(1)
    steps = []
    qc = initial_quasicap(r) if execute else None
    resume = delta0
    while theta < r - 2:
        delta = min(delta0, r - 2 - theta)
        while True:
            stop = find_stop(StrandParams(r, theta, delta), cutoff, digit_budget)
            if isinstance(stop, Stopped):
                break
            # after delta0 fails, continue halving from the last accepted δ
            delta = min(delta / 2, resume)
            if delta < delta_min:
                raise Stalled(f"no δ >= {delta_min} stops the strand at θ={theta}", theta, steps)
        resume = delta
        log.info("step θ=%s δ=%s N=%d", theta, delta, stop.N)
        steps.append((theta, delta, stop.N))
        if execute:
            qc = gap_step(qc, delta, cutoff, budget)
        theta += delta
    return Recipe(r, steps), qc


def execute_recipe(recipe: Recipe, cutoff: int = DEFAULT_CUTOFF, budget: int | None = None) -> Quasicap:
    qc = initial_quasicap(recipe.r)
    for theta, delta, N in recipe.steps:
        if qc.theta != theta:
            raise ValueError(f"recipe step starts at θ={theta} but the quasicap has θ={qc.theta}")
        qc = gap_step(qc, delta, cutoff, budget)
    return qc


def as_cap(qc: Quasicap) -> BoxCap:
    """The underlying rational cap; valid as a cap once θ = r - 2."""
    return qc.cap
