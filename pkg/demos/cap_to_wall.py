"""Expand small caps into walls and check them with the wall verifier."""

from ffbench import build_cs_4cap, cap_to_wall, lower_to_vertex_cap, verify_wall
from ffbench.caps import BoxCap, CapBox, assign_layout
from ffbench.walls import expansion_constants

two_box = assign_layout(
    BoxCap(2, [CapBox("A", 0, 1, 2, weight={"A"}), CapBox("B", 1, 1, 2, "A", "R", weight={"B"})])
)

cases = (("two-box 2-cap", two_box, (2, 6, 10, 14)), ("4-cap", build_cs_4cap(), (8, 16, 20, 24)))
for name, cap, ks in cases:
    vc = lower_to_vertex_cap(cap)
    consts = expansion_constants(vc)
    print(f"{name}: {len(vc)} cap vertices, c={consts.c}, b={consts.b}")
    for k in ks:
        w = cap_to_wall(vc, k)
        rep = verify_wall(w)
        print(f"  k={k:2d}: {len(w):6d} vertices, omega={rep.clique_size}, colors={rep.color_count}, clean={rep.ok}")
