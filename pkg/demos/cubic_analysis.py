"""Discriminant signs and the feasibility margin of the characteristic cubic."""

from fractions import Fraction

from ffbench import analyze, boundary_curve_r, discriminant

print("D(r, 1) for r = 4.0 .. 5.0")
for i in range(0, 11):
    r = 4 + Fraction(i, 10)
    print(f"  r={float(r):.1f}  D={float(discriminant(r, 1)):9.3f}")

print("\nmargin 1/(1-gamma) - theta at r = 5")
for t in (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(213, 100)):
    rep = analyze(5, t)
    if rep.margin is None:
        print(f"  theta={t}: complex pair")
    else:
        lo, hi = rep.margin
        print(f"  theta={float(t):.2f}: [{float(lo):.6f}, {float(hi):.6f}]")
print(f"  theta=2.15: D = {float(discriminant(5, Fraction(215, 100))):.4f}")

print("\nboundary curve r(theta) = 1 + theta^2/(theta-1)")
for k in range(0, 31, 5):
    t = Fraction(3, 2) + Fraction(k, 20)
    print(f"  theta={float(t):.2f}  r={float(boundary_curve_r(t)):.4f}")
