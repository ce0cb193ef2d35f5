"""Exact constructions and verifiers for first-fit lower bounds on interval graphs."""

from .binary import BinaryCap, BinaryCapNode, check_relations, derive_quantities, refute_five, verify_witness
from .caps import (
    BoxCap,
    CapBox,
    Quasicap,
    VertexCap,
    assign_layout,
    build_cs_4cap,
    lower_to_vertex_cap,
    scale_to_integers,
    verify_box_cap,
    verify_vertex_cap,
)
from .exact import Interval, Q, fmt, interval
from .ivg import Wall, clique_size, color_sorted_order, first_fit, squeeze, verify_wall
from .quasicap import (
    Diverged,
    PatternBroken,
    Recipe,
    Stopped,
    StrandParams,
    certify_r,
    find_stop,
    gap_step,
    initial_quasicap,
    strand_sequence,
    verify_quasicap,
)
from .roots import (
    analyze,
    boundary_curve_r,
    c_sign,
    char_poly,
    discriminant,
    feasibility_margin,
    isolate_real_roots,
)
from .walls import ExpansionBudget, cap_to_wall, clique_wall, drop_color, tower_wall

__version__ = "0.1.0"
