"""The characteristic cubic of the strand recurrence, exactly.

Polynomials are lists of Fractions, constant term first.  Real roots are
isolated with a Sturm chain and narrowed by bisection; a rational root is
reported exactly whenever one lies in an isolating interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm

from .errors import ComplexRoots, DiscriminantZero, Inconsistent, OutOfDomain
from .exact import Q

DEFAULT_EPS = Fraction(1, 10**8)


# polynomial helpers


def trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def peval(p, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for a in reversed(p):
        acc = acc * x + a
    return acc


def pderiv(p) -> list:
    return [i * a for i, a in enumerate(p)][1:]


def pmul(p, q) -> list:
    out = [Fraction(0)] * (len(p) + len(q) - 1) if p and q else []
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def prem(p, q) -> list:
    """Remainder of p divided by q."""
    p, q = trim(p), trim(q)
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    while len(p) >= len(q):
        f = p[-1] / q[-1]
        shift = len(p) - len(q)
        for i, b in enumerate(q):
            p[i + shift] -= f * b
        p = trim(p)
    return p


def sturm_chain(p) -> list:
    chain = [trim(p), trim(pderiv(p))]
    while chain[-1] and len(chain[-1]) > 1:
        rem = prem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-a for a in rem])
    return chain


def _sign_changes(chain, x) -> int:
    signs = [s for s in (peval(p, x) for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a < 0) != (b < 0))


def count_roots(chain, a: Fraction, b: Fraction) -> int:
    """Distinct real roots in (a, b] of a squarefree polynomial."""
    return _sign_changes(chain, a) - _sign_changes(chain, b)


def root_bound(p) -> Fraction:
    p = trim(p)
    lead = abs(p[-1])
    return 1 + max((abs(a) / lead for a in p[:-1]), default=Fraction(0))


def primitive_integer(p) -> list:
    """Scale to coprime integer coefficients (same roots)."""
    p = trim(p)
    den = lcm(1, *(a.denominator for a in p))
    ints = [int(a * den) for a in p]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return [a // g for a in ints]


def _divisors(n: int, limit: int = 10**12) -> list:
    n = abs(n)
    if n == 0 or n > limit:
        return []
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def rational_root_in(p, lo: Fraction, hi: Fraction):
    """A rational root of p in [lo, hi], if any (by the rational root theorem)."""
    ints = primitive_integer(p)
    for q in _divisors(ints[-1]):
        first = -((-lo.numerator * q) // lo.denominator)  # ceil(lo*q)
        last = (hi.numerator * q) // hi.denominator  # floor(hi*q)
        if last - first > 64:
            continue
        for num in range(first, last + 1):
            x = Fraction(num, q)
            if peval(p, x) == 0:
                return x
    return None


@dataclass(frozen=True)
class RootEnclosure:
    lo: Fraction
    hi: Fraction
    exact: Fraction | None = None
    label: str = ""

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return self.exact if self.exact is not None else (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


def isolate_poly_roots(p, eps=DEFAULT_EPS) -> list:
    """Enclosures of all distinct real roots of a squarefree polynomial, ascending."""
    p = trim([Q(a) for a in p])
    eps = Q(eps)
    if len(p) < 2:
        return []
    chain = sturm_chain(p)
    B = root_bound(p)
    found = []
    stack = [(-B, B)]
    while stack:
        a, b = stack.pop()
        n = count_roots(chain, a, b)
        if n == 0:
            continue
        if n == 1:
            found.append(_narrow(p, chain, a, b, eps))
            continue
        m = (a + b) / 2
        if peval(p, m) == 0:
            h = (b - a) / 4
            while count_roots(chain, m - h, m + h) != 1:
                h /= 2
            found.append(RootEnclosure(m, m, m))
            stack += [(a, m - h), (m + h, b)]
        else:
            stack += [(a, m), (m, b)]
    return sorted(found, key=lambda e: e.lo)


def _narrow(p, chain, a, b, eps) -> RootEnclosure:
    """One root in (a, b]: pin it exactly if rational, else bisect to width <= eps."""
    if peval(p, b) == 0:
        return RootEnclosure(b, b, b)
    exact = rational_root_in(p, a, b)
    if exact is not None:
        return RootEnclosure(exact, exact, exact)
    sa = peval(p, a) > 0
    while b - a > eps:
        m = (a + b) / 2
        sm = peval(p, m)
        if sm == 0:
            return RootEnclosure(m, m, m)
        if (sm > 0) == sa:
            a = m
        else:
            b = m
    return RootEnclosure(a, b)


# the cubic


@dataclass(frozen=True)
class Cubic:
    """q(x) = 1 - (r-θ)x + (r-2θ)x² + θx³."""

    r: Fraction
    theta: Fraction

    @property
    def coeffs(self) -> list:
        r, t = self.r, self.theta
        return [Fraction(1), -(r - t), r - 2 * t, t]

    def __call__(self, x) -> Fraction:
        return peval(self.coeffs, Q(x))


def _factored_coeffs(r, t) -> list:
    # 1 + r x(x-1) + θ x(x-1)^2, expanded independently
    xm1 = [Fraction(-1), Fraction(1)]
    x_xm1 = pmul([Fraction(0), Fraction(1)], xm1)
    a = [r * c for c in x_xm1]
    b = [t * c for c in pmul(x_xm1, xm1)]
    out = [Fraction(0)] * 4
    out[0] += 1
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def char_poly(r, theta) -> Cubic:
    r, theta = Q(r), Q(theta)
    if theta <= 0:
        raise OutOfDomain("θ must be positive")
    c = Cubic(r, theta)
    if c.coeffs != _factored_coeffs(r, theta):
        raise Inconsistent("the two forms of q disagree")
    return c


def discriminant(r, theta) -> Fraction:
    r, t = Q(r), Q(theta)
    return (
        -27 * t**2 - 4 * t**3 + 6 * t**2 * r + 6 * t * r**2
        + t**2 * r**2 - 4 * r**3 - 2 * t * r**3 + r**4
    )


def discriminant_theta1(r) -> Fraction:
    """The θ = 1 specialization as a quartic in r."""
    r = Q(r)
    return -31 + 6 * r + 7 * r**2 - 6 * r**3 + r**4


DISCRIMINANT_THETA1 = [Fraction(c) for c in (-31, 6, 7, -6, 1)]


def dD_dr(r, theta) -> Fraction:
    r, t = Q(r), Q(theta)
    return 6 * t**2 + 12 * t * r + 2 * t**2 * r - 12 * r**2 - 6 * t * r**2 + 4 * r**3


def isolate_real_roots(c: Cubic, eps=DEFAULT_EPS) -> list:
    """Root enclosures labeled by order: one root is 'alpha'; three are alpha < gamma < beta."""
    D = discriminant(c.r, c.theta)
    if D == 0:
        raise DiscriminantZero(f"D(r={c.r}, θ={c.theta}) = 0: repeated root")
    roots = isolate_poly_roots(c.coeffs, eps)
    expected = 3 if D > 0 else 1
    if len(roots) != expected:
        raise Inconsistent(f"D={D} but found {len(roots)} real roots")
    labels = ("alpha", "gamma", "beta") if expected == 3 else ("alpha",)
    return [RootEnclosure(e.lo, e.hi, e.exact, lab) for e, lab in zip(roots, labels)]


def gamma_enclosure(r, theta, eps=DEFAULT_EPS) -> RootEnclosure:
    c = char_poly(r, theta)
    if discriminant(c.r, c.theta) < 0:
        raise ComplexRoots(f"β, γ are complex at r={c.r}, θ={c.theta}")
    return isolate_real_roots(c, eps)[1]


def feasibility_margin(r, theta, eps=DEFAULT_EPS) -> tuple:
    """Enclosure (lo, hi) of 1/(1-γ) - θ; a point when γ is rational."""
    theta = Q(theta)
    g = gamma_enclosure(r, theta, eps)
    if g.hi >= 1:
        raise OutOfDomain("γ enclosure reaches 1")
    return (1 / (1 - g.lo) - theta, 1 / (1 - g.hi) - theta)


def c_sign(r, theta, delta, eps=DEFAULT_EPS) -> int:
    """Sign of (θ+δ)(1-γ) - 1, which is the sign of the coefficient C of γ^{-n}."""
    c = char_poly(r, theta)
    s = c.theta + Q(delta)
    if s == 0:
        raise OutOfDomain("θ + δ must be nonzero")
    g_star = 1 - 1 / s  # (θ+δ)(1-x) - 1 vanishes here and decreases in x
    g = gamma_enclosure(r, theta, eps)
    if g.exact is not None:
        return (g_star > g.exact) - (g_star < g.exact)
    if g_star in g:
        if c(g_star) == 0:
            return 0
        # refine until g_star leaves the enclosure
        while g_star in g:
            eps = eps / 1024
            g = gamma_enclosure(r, theta, eps)
    return 1 if g_star > g.hi else -1


def boundary_curve_r(theta) -> Fraction:
    """The r for which 1 - 1/θ is a root of q, i.e. the margin vanishes at δ = 0."""
    theta = Q(theta)
    if theta <= 1:
        raise OutOfDomain("the boundary curve needs θ > 1")
    return 1 + theta**2 / (theta - 1)


@dataclass(frozen=True)
class AnalysisReport:
    r: Fraction
    theta: Fraction
    D: Fraction
    real_root_count: int
    roots: tuple  # RootEnclosure per real root, ascending
    margin: tuple | None

    def root(self, label: str):
        for e in self.roots:
            if e.label == label:
                return e
        return None


def analyze(r, theta, eps=DEFAULT_EPS) -> AnalysisReport:
    c = char_poly(r, theta)
    D = discriminant(c.r, c.theta)
    if D == 0:
        return AnalysisReport(c.r, c.theta, D, 0, (), None)
    roots = tuple(isolate_real_roots(c, eps))
    margin = None
    if len(roots) == 3 and roots[1].hi < 1:
        g = roots[1]
        margin = (1 / (1 - g.lo) - c.theta, 1 / (1 - g.hi) - c.theta)
    return AnalysisReport(c.r, c.theta, D, len(roots), roots, margin)
