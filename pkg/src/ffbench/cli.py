"""``ffbench`` command line.

Exit codes: 0 success, 1 verification failure, 2 budget exceeded,
3 unreadable input, 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import io
from .binary import check_relations, refute_five, verify_witness
from .caps import (
    build_cs_4cap,
    lower_to_vertex_cap,
    scale_to_integers,
    verify_box_cap,
    verify_vertex_cap,
)
from .errors import BudgetExceeded, FFBenchError, Inconsistent, ParseError, Stalled
from .exact import Q, fmt
from .ivg import Wall, color_sorted_order, first_fit, verify_wall
from .quasicap import (
    DEFAULT_CUTOFF,
    StrandParams,
    certify_r,
    find_stop,
    initial_quasicap,
    quasicap_gaps,
    strand_sequence,
)
from .roots import DEFAULT_EPS, analyze
from .walls import ExpansionBudget, cap_to_wall, clique_wall, tower_wall

log = logging.getLogger("ffbench")

OK, FAILED, BUDGET, PARSE, INCONSISTENT = 0, 1, 2, 3, 4


def rational(text: str) -> Fraction:
    try:
        return Q(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _emit(obj: dict, out: str | None) -> None:
    if out:
        io.dump_json(obj, out)
    else:
        sys.stdout.write(json.dumps(obj, indent=1, ensure_ascii=False) + "\n")


def _emit_text(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_build(a) -> int:
    if a.what == "tower":
        _emit(io.wall_to_json(tower_wall(a.i, ExpansionBudget(a.max_vertices))), a.out)
    elif a.what == "clique":
        _emit(io.wall_to_json(clique_wall(a.k)), a.out)
    elif a.what == "cs4cap":
        _emit(io.boxcap_to_json(build_cs_4cap()), a.out)
    else:
        qc = initial_quasicap(a.r)
        _emit(io.boxcap_to_json(qc.cap, qc), a.out)
    return OK


def _vertex_cap_from(d: dict):
    if io.detect_kind(d) == "boxcap":
        return lower_to_vertex_cap(scale_to_integers(io.boxcap_from_json(d)))
    return io.vertexcap_from_json(d)


def cmd_expand(a) -> int:
    cap = _vertex_cap_from(io.load_json(a.cap))
    budget = ExpansionBudget(a.max_vertices, parallel_fill=a.jobs > 1)
    wall = cap_to_wall(cap, a.k, budget)
    log.info("expanded k=%d: %d vertices, %d colors", a.k, len(wall), wall.color_count)
    _emit(io.wall_to_json(wall), a.out)
    return OK


def cmd_firstfit(a) -> int:
    family = io.family_from_json(io.load_json(a.family))
    if a.order:
        order = io.order_from_text(Path(a.order).read_text(encoding="utf-8"))
    else:
        order = list(range(len(family)))
    colors = first_fit(family, order)
    _emit(io.coloring_to_json(family, colors), a.out)
    return OK


def _report(ok: bool, body: dict, out: str | None) -> int:
    body = {"ok": ok, **body}
    _emit(body, out)
    return OK if ok else FAILED


def cmd_verify(a) -> int:
    d = io.load_json(a.path)
    kind = a.kind or io.detect_kind(d)
    if kind == "wall":
        wall = io.wall_from_json(d)
        if a.ratio is not None:
            wall = Wall(wall.family, wall.colors, a.ratio)
        if a.order_out:
            Path(a.order_out).write_text(io.order_to_text(color_sorted_order(wall)), encoding="utf-8")
        rep = verify_wall(wall)
        return _report(rep.ok, {
            "kind": "wall",
            "clique_size": rep.clique_size,
            "color_count": rep.color_count,
            "ratio": fmt(rep.ratio),
            "violations": [{"vertex": v, "reason": why} for v, why in rep.violations],
        }, a.report)
    if kind == "boxcap":
        cap = io.boxcap_from_json(d)
        if a.ratio is not None:
            cap = cap.with_r(a.ratio)
        qc = io.quasicap_from_json(d)
        gaps = quasicap_gaps(qc) if qc is not None and a.ratio is None else None
        rep = verify_box_cap(cap, gaps)
    elif kind == "vertexcap":
        cap = io.vertexcap_from_json(d)
        if a.ratio is not None:
            cap = type(cap)(a.ratio, cap.runs)
        rep = verify_vertex_cap(cap)
    elif kind == "bincap":
        rel = check_relations(io.bincap_from_json(d))
        return _report(rel.ok, {
            "kind": "bincap",
            "violations": [{"word": w, "relation": r, "detail": x} for w, r, x in rel.violations],
        }, a.report)
    else:
        raise ParseError(f"cannot verify a {kind}")
    return _report(rep.ok, {
        "kind": kind,
        "violations": [{"id": i, "condition": c, "witness": w} for i, c, w in rep.violations],
    }, a.report)


def cmd_sequence(a) -> int:
    p = StrandParams(a.r, a.theta, a.delta)
    terms = strand_sequence(p, a.limit)
    if a.format == "csv":
        _emit_text(io.sequence_to_csv(terms), a.out)
    else:
        stop = find_stop(p, a.cutoff)
        body = io.sequence_to_json(terms)
        body["stop"] = {"kind": type(stop).__name__, "n": next(iter(vars(stop).values()))}
        _emit(body, a.out)
    return OK


def cmd_certify(a) -> int:
    try:
        rec, qc = certify_r(a.r, a.delta0, a.cutoff, a.delta_min, a.budget, execute=bool(a.cap_out))
    except Stalled as exc:
        log.error("stalled: %s", exc)
        body = {"r": fmt(a.r), "stalled": True, "theta": fmt(exc.theta),
                "steps": [{"theta": fmt(t), "delta": fmt(d), "N": n} for t, d, n in exc.steps]}
        _emit(body, a.out)
        return FAILED
    _emit(io.recipe_to_json(rec), a.out)
    if a.cap_out:
        io.dump_json(io.boxcap_to_json(qc.cap, qc), a.cap_out)
        rep = verify_box_cap(qc.cap)
        if not rep.ok:
            log.error("built cap fails verification: %s", rep.violations[:3])
            return FAILED
    return OK


def _grid(lo: Fraction, hi: Fraction, steps: int):
    if steps <= 1:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def cmd_analyze(a) -> int:
    if a.r_range or a.theta_range:
        rs = _grid(*a.r_range, a.steps) if a.r_range else [a.r]
        ts = _grid(*a.theta_range, a.steps) if a.theta_range else [a.theta]
        reports = [analyze(r, t, a.eps) for r in rs for t in ts]
        _emit_text(io.analysis_grid_to_csv(reports), a.out)
        return OK
    rep = analyze(a.r, a.theta, a.eps)
    if a.format == "csv":
        _emit_text(io.analysis_grid_to_csv([rep]), a.out)
    else:
        _emit(io.analysis_to_json(rep), a.out)
    return OK


def cmd_refute(a) -> int:
    cap = io.bincap_from_json(io.load_json(a.path))
    wit = refute_five(cap)
    if not verify_witness(cap, wit):
        raise Inconsistent("the witness does not re-verify")
    _emit(io.witness_to_json(wit), a.out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ffbench", description="First-fit lower-bound certificates.")
    p.add_argument("-v", "--verbose", action="count", default=0, help="log progress to stderr")
    p.add_argument("--jobs", type=int, default=1, help="allow parallel void fills")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a wall or cap")
    b.add_argument("what", choices=["tower", "clique", "cs4cap", "initialqc"])
    b.add_argument("--i", type=int, default=1, help="tower level")
    b.add_argument("--k", type=int, default=1, help="clique size")
    b.add_argument("--r", type=rational, default=Fraction(9, 2), help="ratio for initialqc")
    b.add_argument("--max-vertices", type=int, default=1_000_000)
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    e = sub.add_parser("expand", help="expand a cap into a wall")
    e.add_argument("cap")
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--max-vertices", type=int, default=1_000_000)
    e.add_argument("--out")
    e.set_defaults(func=cmd_expand)

    f = sub.add_parser("firstfit", help="run first-fit on a family")
    f.add_argument("family")
    f.add_argument("--order", help="text file, one vertex id per line (default: by id)")
    f.add_argument("--out")
    f.set_defaults(func=cmd_firstfit)

    v = sub.add_parser("verify", help="verify a wall, box cap, vertex cap or binary cap")
    v.add_argument("path")
    v.add_argument("--kind", choices=["wall", "boxcap", "vertexcap", "bincap"])
    v.add_argument("--ratio", type=rational, help="override the declared ratio / r")
    v.add_argument("--order-out", help="write the color-sorted order of a wall")
    v.add_argument("--report", help="write the report here instead of stdout")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sequence", help="dump a strand sequence")
    s.add_argument("--r", type=rational, required=True)
    s.add_argument("--theta", type=rational, required=True)
    s.add_argument("--delta", type=rational, required=True)
    s.add_argument("--limit", type=int, default=20)
    s.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sequence)

    c = sub.add_parser("certify", help="plan (and optionally build) an r-cap")
    c.add_argument("--r", type=rational, required=True)
    c.add_argument("--delta0", type=rational, default=Fraction(1))
    c.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    c.add_argument("--delta-min", type=rational, default=Fraction(1, 2**20))
    c.add_argument("--budget", type=int, help="maximum boxes when building")
    c.add_argument("--cap-out", help="also build the cap and write it here")
    c.add_argument("--out")
    c.set_defaults(func=cmd_certify)

    an = sub.add_parser("analyze", help="discriminant and root report")
    an.add_argument("--r", type=rational, default=Fraction(5))
    an.add_argument("--theta", type=rational, default=Fraction(1))
    an.add_argument("--eps", type=rational, default=DEFAULT_EPS)
    an.add_argument("--r-range", type=rational, nargs=2, metavar=("LO", "HI"))
    an.add_argument("--theta-range", type=rational, nargs=2, metavar=("LO", "HI"))
    an.add_argument("--steps", type=int, default=11, help="grid points per range")
    an.add_argument("--format", choices=["json", "csv"], default="json")
    an.add_argument("--out")
    an.set_defaults(func=cmd_analyze)

    rf = sub.add_parser("refute", help="refute a binary cap at r = 5")
    rf.add_argument("path")
    rf.add_argument("--out")
    rf.set_defaults(func=cmd_refute)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return PARSE if exc.code else OK
    logging.basicConfig(
        level=logging.WARNING - 10 * min(a.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return a.func(a)
    except BudgetExceeded as exc:
        log.error("%s", exc)
        return BUDGET
    except Inconsistent as exc:
        log.error("inconsistent: %s", exc)
        return INCONSISTENT
    except (ParseError, FFBenchError, ValueError) as exc:
        log.error("%s", exc)
        return PARSE


def run_cli(argv) -> int:
    return main(list(argv))


if __name__ == "__main__":
    sys.exit(main())
