from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from ffbench.errors import ComplexRoots, DiscriminantZero, Inconsistent, OutOfDomain
from ffbench.quasicap import Stopped, StrandParams, find_stop
from ffbench.roots import (
    DISCRIMINANT_THETA1,
    Cubic,
    analyze,
    boundary_curve_r,
    c_sign,
    char_poly,
    count_roots,
    dD_dr,
    discriminant,
    discriminant_theta1,
    feasibility_margin,
    gamma_enclosure,
    isolate_poly_roots,
    isolate_real_roots,
    peval,
    rational_root_in,
    sturm_chain,
)

F = Fraction
R, T, X = sympy.symbols("r theta x")
Q1 = 1 - (R - T) * X + (R - 2 * T) * X**2 + T * X**3


def test_char_poly_examples():
    assert char_poly(4, 1).coeffs == [1, -3, 2, 1]
    assert char_poly(5, 2).coeffs == [1, -3, 1, 2]
    assert char_poly(5, 1).coeffs == [1, -4, 3, 1]
    with pytest.raises(OutOfDomain):
        char_poly(5, 0)


def test_char_poly_forms_agree_symbolically():
    q2 = 1 + R * X * (X - 1) + T * X * (X - 1) ** 2
    assert sympy.expand(Q1 - q2) == 0


def test_discriminant_examples():
    assert discriminant(4, 1) == -23
    assert discriminant(5, 1) == 49
    assert discriminant(5, 2) == 5


def test_discriminant_against_sympy():
    ours = (
        -27 * T**2 - 4 * T**3 + 6 * T**2 * R + 6 * T * R**2
        + T**2 * R**2 - 4 * R**3 - 2 * T * R**3 + R**4
    )
    assert sympy.expand(sympy.discriminant(Q1, X) - ours) == 0


def generic_cubic_discriminant(a, b, c, d):
    """b²c² − 4ac³ − 4b³d − 27a²d² + 18abcd for a x³ + b x² + c x + d."""
    return b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d + 18 * a * b * c * d


@given(st.fractions(3, 6, max_denominator=40), st.fractions(F(1, 2), 3, max_denominator=40))
def test_discriminant_generic_formula(r, t):
    d0, c1, b2, a3 = Cubic(r, t).coeffs
    assert generic_cubic_discriminant(a3, b2, c1, d0) == discriminant(r, t)


def test_theta_one_specialization_on_grid():
    for i in range(101):
        r = 4 + F(i, 100)
        assert discriminant(r, 1) == discriminant_theta1(r) == peval(DISCRIMINANT_THETA1, r)


def test_theta_one_root_location():
    roots = isolate_poly_roots(DISCRIMINANT_THETA1, F(1, 10**6))
    inside = [e for e in roots if F(448, 100) < e.lo and e.hi < F(449, 100)]
    assert len(inside) == 1
    # r+ = 3/2 + sqrt(13 + 16 sqrt 2)/2
    r_plus = float(sympy.Rational(3, 2) + sympy.sqrt(13 + 16 * sympy.sqrt(2)) / 2)
    assert float(inside[0].lo) <= r_plus <= float(inside[0].hi)


def test_roots_fibonacci_point():
    roots = isolate_real_roots(char_poly(5, 2), F(1, 10**6))
    a, g, b = roots
    assert [e.label for e in roots] == ["alpha", "gamma", "beta"]
    assert g.exact == F(1, 2)
    assert F(61, 100) < b.lo and b.hi < F(62, 100)
    assert F(-162, 100) < a.lo and a.hi < F(-161, 100)


def test_roots_other_examples():
    g = isolate_real_roots(char_poly(5, 1))[1]
    assert F(35, 100) < g.lo and g.hi < F(36, 100)
    (a,) = isolate_real_roots(char_poly(4, 1))
    assert a.label == "alpha" and F(-7, 2) < a.lo and a.hi < -3


def test_discriminant_zero_reported():
    # q and q' vanish together at x = 2/3 when r = θ = 27/4
    r = t = F(27, 4)
    assert discriminant(r, t) == 0
    assert char_poly(r, t)(F(2, 3)) == 0
    with pytest.raises(DiscriminantZero):
        isolate_real_roots(char_poly(r, t))
    assert analyze(r, t).real_root_count == 0


@pytest.mark.parametrize("r,t", [(F(9, 2), F(3, 2)), (5, 1), (F(49, 10), F(21, 10)), (4, 1), (5, F(43, 20))])
def test_roots_match_sympy(r, t):
    encl = isolate_real_roots(char_poly(r, t), F(1, 10**9))
    real = [x for x in sympy.Poly(Q1.subs({R: sympy.Rational(r), T: sympy.Rational(t)}), X).nroots(n=30)
            if x.is_real]
    assert len(real) == len(encl)
    for e, x in zip(encl, sorted(real)):
        assert float(e.lo) - 1e-12 <= float(x) <= float(e.hi) + 1e-12


def test_coherence_grid():
    for i in range(0, 101, 5):
        r = 4 + F(i, 100)
        for j in range(0, 121, 10):
            t = 1 + F(j, 100)
            D = discriminant(r, t)
            n = count_roots(sturm_chain(char_poly(r, t).coeffs), F(-100), F(100))
            assert (D > 0 and n == 3) or (D < 0 and n == 1)


@given(st.fractions(4, 5, max_denominator=100), st.fractions(1, F(11, 5), max_denominator=100))
def test_coherence_random(r, t):
    rep = analyze(r, t)
    if rep.D > 0:
        assert rep.real_root_count == 3
    elif rep.D < 0:
        assert rep.real_root_count == 1


@pytest.mark.parametrize("r,t", [(5, 1), (F(9, 2), F(1, 2)), (5, 2), (F(49, 10), F(1))])
def test_product_of_roots(r, t):
    encl = isolate_real_roots(char_poly(r, t), F(1, 10**12))
    lo = hi = F(1)
    for e in encl:
        a, b = (e.exact, e.exact) if e.exact is not None else (e.lo, e.hi)
        cands = [lo * a, lo * b, hi * a, hi * b]
        lo, hi = min(cands), max(cands)
    assert lo <= -F(1) / t <= hi
    assert hi - lo < F(1, 10**9)


def test_gamma_bracket_near_five():
    for r in (F(4999, 1000), 5):
        for j in range(0, 114):
            t = 1 + F(j, 100)
            q = char_poly(r, t)
            assert q(0) > 0 and q(F(56, 100)) < 0 and q(1) > 0


@given(st.fractions(F(11, 10), 10, max_denominator=50))
def test_witness_identity(t):
    assert char_poly(5, t)(1 - 1 / t) == (1 - 2 / t) ** 2


def test_witness_identity_symbolic():
    q5 = Q1.subs(R, 5)
    assert sympy.simplify(q5.subs(X, 1 - 1 / T) - (1 - 2 / T) ** 2) == 0


def test_monotone_in_r():
    for j in range(0, 114, 8):
        t = 1 + F(j, 100)
        g5 = gamma_enclosure(5, t)
        g4999 = gamma_enclosure(F(4999, 1000), t)
        assert g5.hi < g4999.lo


def test_complex_region():
    t = F(215, 100)
    for r in (F(4999, 1000), 5):
        assert discriminant(r, t) < 0
    for r in (F(4999, 1000), 5, F(9, 2)):
        assert dD_dr(r, t) > 0


def test_oscillation_linkage():
    count = 0
    for i in range(0, 21):
        r = 4 + F(i, 20)
        for j in range(0, 13):
            t = 1 + F(j, 10)
            if t >= r - 2 or discriminant(r, t) >= 0:
                continue
            for d in (F(1, 10), F(1, 100)):
                if t + d <= r - 2:
                    assert isinstance(find_stop(StrandParams(r, t, d)), Stopped)
                    count += 1
    assert count > 20


def test_margins():
    assert feasibility_margin(5, 2) == (0, 0)
    lo, hi = feasibility_margin(5, F(213, 100))
    assert lo > F(1, 25)
    g = gamma_enclosure(5, F(213, 100))
    assert F(54, 100) < g.lo and g.hi < F(56, 100)
    lo, hi = feasibility_margin(5, 1)
    assert F(53, 100) < lo <= hi < F(57, 100)
    with pytest.raises(ComplexRoots):
        feasibility_margin(4, 1)


def test_c_sign():
    assert c_sign(5, 2, 0) == 0
    assert c_sign(5, 1, F(1, 2)) == -1
    assert c_sign(5, 1, 1) == 1
    with pytest.raises(ComplexRoots):
        c_sign(4, 1, 1)


def test_boundary_curve():
    assert boundary_curve_r(2) == 5
    assert boundary_curve_r(F(3, 2)) == F(11, 2) == boundary_curve_r(3)
    grid = [F(3, 2) + F(k, 20) for k in range(31)]
    assert min(grid, key=boundary_curve_r) == 2
    with pytest.raises(OutOfDomain):
        boundary_curve_r(1)


def test_rational_root_helper():
    assert rational_root_in([F(-1), F(2)], F(0), F(1)) == F(1, 2)
    assert rational_root_in([F(-2), F(0), F(1)], F(0), F(2)) is None


def test_inconsistent_forms_detected(monkeypatch):
    import ffbench.roots as roots

    monkeypatch.setattr(roots, "_factored_coeffs", lambda r, t: [F(0)] * 4)
    with pytest.raises(Inconsistent):
        roots.char_poly(5, 2)
