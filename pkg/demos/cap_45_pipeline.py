"""Build a rational 4.5-cap with two gap steps and verify it twice."""

from fractions import Fraction

from ffbench import (
    StrandParams,
    certify_r,
    find_stop,
    lower_to_vertex_cap,
    scale_to_integers,
    strand_sequence,
    verify_box_cap,
    verify_vertex_cap,
)

r = Fraction(9, 2)
recipe, qc = certify_r(r, Fraction(4, 5), execute=True)
for theta, delta, N in recipe.steps:
    p = StrandParams(r, theta, delta)
    terms = ", ".join(map(str, strand_sequence(p, N + 2)))
    print(f"theta={theta}, delta={delta}: {terms}  -> {find_stop(p)}")

cap = qc.cap
key = cap.box(qc.key_box)
print(f"\n{len(cap)} boxes; key box spans depths [{key.top}, {key.bottom}]")
print("box-level verifier clean:", verify_box_cap(cap).ok)
vc = lower_to_vertex_cap(scale_to_integers(cap))
print(f"vertex-level verifier clean: {verify_vertex_cap(vc).ok} ({len(vc)} vertices, {len(vc.runs)} runs)")

for target in (Fraction(47, 10), Fraction(49, 10)):
    rec, _ = certify_r(target)
    print(f"r={target}: {len(rec.steps)} steps, largest N {max(n for *_, n in rec.steps)}")
