"""Binary caps as words over {H, L}, their derived quantities, and the r = 5 refuter.

A node ``w`` is present when ``kappa > 0``; ``wH`` is its high supporter and
``wL`` its low one.  When ``wL`` is absent its top depth is taken to be the
cone depth ``r(β_w + κ_w)``, so that ``wH`` alone must reach the cone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .caps import BoxCap
from .errors import Inconsistent, MissingParent
from .exact import Q


def fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


@dataclass(frozen=True)
class BinaryCapNode:
    word: str
    kappa: Fraction
    tau: Fraction

    def __post_init__(self):
        if set(self.word) - {"H", "L"}:
            raise ValueError(f"word {self.word!r} is not over {{H, L}}")
        object.__setattr__(self, "kappa", Q(self.kappa))
        object.__setattr__(self, "tau", Q(self.tau))


@dataclass(frozen=True)
class BinaryCap:
    r: Fraction
    nodes: dict

    def __post_init__(self):
        object.__setattr__(self, "r", Q(self.r))
        nodes = self.nodes
        if not isinstance(nodes, dict):
            nodes = {nd.word: nd for nd in nodes}
        object.__setattr__(self, "nodes", dict(nodes))

    def present(self, w: str) -> bool:
        nd = self.nodes.get(w)
        return nd is not None and nd.kappa > 0

    def kappa(self, w: str) -> Fraction:
        nd = self.nodes.get(w)
        return nd.kappa if nd is not None else Fraction(0)

    def words(self) -> list:
        """Present words, shortest first."""
        return sorted((w for w in self.nodes if self.present(w)), key=lambda w: (len(w), w))


@dataclass
class DerivedQuantities:
    beta: dict
    pi: dict
    tau: dict  # given τ for present nodes

    def alpha(self, w: str) -> Fraction:
        return self.beta[w] + self.pi[w]


def derive_quantities(cap: BinaryCap) -> DerivedQuantities:
    """β and π from (Cap-λ), (L-β), (L-π), (H-β), (H-π), for every present word and its children."""
    if not cap.present(""):
        raise MissingParent("the top box λ must be present")
    beta, pi, tau = {"": Fraction(0)}, {"": Fraction(0)}, {}
    for w in cap.words():
        if w and not cap.present(w[:-1]):
            raise MissingParent(f"{w} is present but its parent {w[:-1] or 'λ'} is not")
        tau[w] = cap.nodes[w].tau
        k = cap.kappa(w)
        beta[w + "H"], pi[w + "H"] = beta[w], k
        beta[w + "L"], pi[w + "L"] = beta[w] + pi[w], k - pi[w]
    return DerivedQuantities(beta, pi, tau)


def tau_of(cap: BinaryCap, dq: DerivedQuantities, w: str) -> Fraction:
    """τ_w, extended to absent children: wH by (H-τ), wL by the cone-depth default."""
    if cap.present(w):
        return dq.tau[w]
    parent = w[:-1]
    if w.endswith("H"):
        return dq.tau[parent] + cap.kappa(parent)
    return cap.r * (dq.beta[parent] + cap.kappa(parent))


@dataclass
class RelationReport:
    violations: list = field(default_factory=list)  # (word, relation, detail)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_relations(cap: BinaryCap) -> RelationReport:
    """(Cap-λ), (L-κ), (H-κ) and (H-τ) at every present node."""
    dq = derive_quantities(cap)
    rep = RelationReport()
    r = cap.r
    if dq.tau[""] != 0:
        rep.violations.append(("", "Cap-λ", f"τ_λ = {dq.tau['']} != 0"))
    for v in cap.words():
        k, b, t = cap.kappa(v), dq.beta[v], dq.tau[v]
        tL = tau_of(cap, dq, v + "L")
        need = r * (b + k) - tL
        if cap.kappa(v + "L") < need:
            rep.violations.append((v + "L", "L-κ", f"κ = {cap.kappa(v + 'L')} < r(β+κ) - τ = {need}"))
        # Cones may sit deeper than r(β+κ), so r(β+κ) - τ_vL >= 0 is not implied and is
        # not checked.  τ_vL - τ_v - κ_v >= 0 places a real low child below v; a
        # defaulted τ_vL is no box, so that clause is skipped when vL is absent.
        has_low = cap.present(v + "L")
        need = tL - t - k
        if cap.kappa(v + "H") < need:
            rep.violations.append((v + "H", "H-κ", f"κ = {cap.kappa(v + 'H')} < τ_L - τ - κ = {need}"))
        if has_low and need < 0:
            rep.violations.append((v + "H", "H-κ", f"τ_L - τ - κ = {need} < 0"))
        if cap.present(v + "H") and dq.tau[v + "H"] != t + k:
            rep.violations.append((v + "H", "H-τ", f"τ = {dq.tau[v + 'H']} != {t + k}"))
    return rep


# the refutation


@dataclass(frozen=True)
class ChainLink:
    word: str
    u: str  # the word with w = u H^m
    m: int
    kappa: Fraction
    beta: Fraction
    pi: Fraction
    tau: Fraction
    pi_u: Fraction
    checks: tuple  # (name, lhs, rhs) meaning lhs >= rhs


@dataclass(frozen=True)
class Failure:
    word: str
    required: Fraction
    actual: Fraction
    strict: bool  # True: κ > required was needed; False: κ >= required (and > 0)


@dataclass
class RefutationWitness:
    r: Fraction
    chain: list
    failure: Failure | None
    relation_violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.failure is not None or bool(self.relation_violations)


def _hard_checks(w, u, m, cap, dq):
    """(H0)-(H2) for w_i = uH^i, i = 0..m, plus the growth bound κ_w >= π_u f_{m+3}; as (name, lhs, rhs)."""
    out = []
    pu = dq.pi[u]
    for i in range(m + 1):
        wi = u + "H" * i
        k, b, p, t = cap.kappa(wi), dq.beta[wi], dq.pi[wi], tau_of(cap, dq, wi)
        out.append((f"H0[{i}]", p, Fraction(0)))
        out.append((f"H1[{i}]", k, 2 * p - pu * fib(i)))
        out.append((f"H2[{i}]", 5 * b + 2 * p + pu * fib(i + 1), t))
    out.append(("growth", cap.kappa(w), pu * fib(m + 3)))
    return tuple(out)


def refute_five(cap: BinaryCap) -> RefutationWitness:
    """Follow the chain of hard boxes from λ until a required box is missing or too small."""
    if cap.r != 5:
        raise ValueError("refute_five needs r = 5")
    relations = check_relations(cap).violations
    dq = derive_quantities(cap)
    chain = []
    w, u, m = "", "", 0
    for _ in range(len(cap.words()) + 2):
        checks = _hard_checks(w, u, m, cap, dq)
        if not all(lhs >= rhs for _, lhs, rhs in checks):
            if relations:
                return RefutationWitness(cap.r, chain, None, relations)
            raise Inconsistent(f"{w or 'λ'} fails hardness although every relation holds")
        k, b, p = cap.kappa(w), dq.beta[w], dq.pi[w]
        chain.append(ChainLink(w, u, m, k, b, p, tau_of(cap, dq, w), dq.pi[u], checks))
        tL = tau_of(cap, dq, w + "L")
        if tL < 5 * b + 3 * k + 2 * p:
            nxt, required, strict = w + "L", 2 * dq.pi[w + "L"], True
            u2, m2 = nxt, 0
        else:
            nxt, strict = w + "H", False
            pu = dq.pi[u]
            required = 2 * dq.pi[w + "H"] - pu * fib(m + 1)
            required = max(required, pu * fib(m + 4) if pu > 0 else 2 * k)
            u2, m2 = u, m + 1
        actual = cap.kappa(nxt)
        short = actual <= required if strict else actual < required
        if short or actual <= 0:
            return RefutationWitness(cap.r, chain, Failure(nxt, required, actual, strict), relations)
        w, u, m = nxt, u2, m2
    raise Inconsistent("hard chain outgrew the cap")


def _recompute(cap: BinaryCap, word: str):
    """β, π and τ of ``word`` by walking from λ letter by letter."""
    r = cap.r
    beta = pi = Fraction(0)
    tau = cap.nodes[""].tau
    prefix = ""
    for letter in word:
        k = cap.kappa(prefix)
        child = prefix + letter
        if letter == "H":
            nbeta, npi, ntau = beta, k, tau + k
        else:
            nbeta, npi, ntau = beta + pi, k - pi, r * (beta + k)
        if cap.present(child):
            ntau = cap.nodes[child].tau
        beta, pi, tau, prefix = nbeta, npi, ntau, child
    return beta, pi, tau


def verify_witness(cap: BinaryCap, wit: RefutationWitness) -> bool:
    """Re-check every recorded inequality and the final shortfall from scratch."""
    if not wit.valid:
        return False
    for link in wit.chain:
        if not link.word.startswith(link.u) or link.word != link.u + "H" * link.m:
            return False
        _, pi_u, _ = _recompute(cap, link.u)
        if pi_u != link.pi_u:
            return False
        seen = set()
        for i in range(link.m + 1):
            wi = link.u + "H" * i
            b, p, t = _recompute(cap, wi)
            k = cap.kappa(wi)
            if not (p >= 0 and k >= 2 * p - pi_u * fib(i) and t <= 5 * b + 2 * p + pi_u * fib(i + 1)):
                return False
            seen.update({f"H0[{i}]", f"H1[{i}]", f"H2[{i}]"})
        if cap.kappa(link.word) < pi_u * fib(link.m + 3):
            return False
        for name, lhs, rhs in link.checks:
            if lhs < rhs:
                return False
        if not seen <= {name for name, _, _ in link.checks}:
            return False
    f = wit.failure
    if f is None:
        return bool(wit.relation_violations) and not check_relations(cap).ok
    if not wit.chain:
        return False
    last = wit.chain[-1]
    if f.word[:-1] != last.word:
        return False
    actual = cap.kappa(f.word)
    if actual != f.actual:
        return False
    if f.strict:
        return actual <= f.required
    return actual < f.required or actual <= 0


# corpus and encoding


def consistent_taus(shape: list, kappas: dict) -> dict:
    """τ by (H-τ) for high children and 'top = bottom of the high sibling' for low ones."""
    tau = {"": Fraction(0)}
    for w in sorted(shape, key=lambda x: (len(x), x)):
        if not w:
            continue
        p = w[:-1]
        if w.endswith("H"):
            tau[w] = tau[p] + kappas[p]
        elif p + "H" in kappas:
            tau[w] = tau[p] + kappas[p] + kappas[p + "H"]
        else:
            tau[w] = tau[p] + kappas[p]
    return tau


def tree_shapes(max_nodes: int) -> list:
    """All binary tree shapes (sets of words closed under parent) with 1..max_nodes nodes."""
    shapes = {frozenset({""})}
    frontier = set(shapes)
    for _ in range(max_nodes - 1):
        nxt = set()
        for s in frontier:
            for w in s:
                for c in (w + "H", w + "L"):
                    if c not in s:
                        nxt.add(s | {c})
        shapes |= nxt
        frontier = nxt
    return sorted((sorted(s, key=lambda x: (len(x), x)) for s in shapes), key=lambda s: (len(s), s))


def corpus(max_nodes: int = 5, kappas=(Fraction(1, 2), Fraction(1), Fraction(2)), r=5):
    """Every shape with up to ``max_nodes`` boxes and every κ assignment, with consistent τ."""
    for shape in tree_shapes(max_nodes):
        for ks in itertools.product(kappas, repeat=len(shape)):
            kap = dict(zip(shape, ks))
            tau = consistent_taus(shape, kap)
            yield BinaryCap(r, {w: BinaryCapNode(w, kap[w], tau[w]) for w in shape})


def encode_box_cap(cap: BoxCap, r=None) -> BinaryCap:
    """Top box is λ; a supporter whose top meets its parent's bottom is H, the other is L."""
    tops = [b for b in cap.boxes if b.supports is None]
    if len(tops) != 1:
        raise ValueError("need exactly one top box")
    kids = cap.children()
    nodes = {}
    stack = [(tops[0], "")]
    while stack:
        box, w = stack.pop()
        nodes[w] = BinaryCapNode(w, box.height, box.top)
        sups = kids.get(box.id, [])
        if len(sups) > 2:
            raise ValueError(f"{box.id} has more than two supporters")
        high = [s for s in sups if s.top == box.bottom]
        low = [s for s in sups if s.top != box.bottom]
        if len(high) > 1 or len(low) > 1:
            raise ValueError(f"supporters of {box.id} are not one high and one low")
        stack += [(s, w + "H") for s in high] + [(s, w + "L") for s in low]
    return BinaryCap(cap.r if r is None else Q(r), nodes)
