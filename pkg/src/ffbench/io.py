"""JSON, CSV and plain-text formats.  Every rational is written as ``"p/q"``."""

from __future__ import annotations

import csv
import io as _io
import json
from fractions import Fraction
from pathlib import Path

from .binary import BinaryCap, BinaryCapNode, ChainLink, Failure, RefutationWitness
from .caps import BoxCap, CapBox, Quasicap, VertexCap, VertexRun
from .errors import ParseError
from .exact import Interval, Q, fmt
from .ivg import Wall
from .quasicap import Recipe
from .roots import AnalysisReport


def _q(value) -> Fraction:
    try:
        return Q(value)
    except ParseError:
        raise
    except Exception as exc:  # noqa: BLE001
        raise ParseError(f"bad rational {value!r}") from exc


def _iv(pair) -> Interval:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ParseError(f"interval must be a [lo, hi] pair, got {pair!r}")
    try:
        return Interval(_q(pair[0]), _q(pair[1]))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _pair(iv: Interval | None):
    return None if iv is None else [fmt(iv.lo), fmt(iv.hi)]


# walls


def wall_to_json(wall: Wall) -> dict:
    return {
        "declared_ratio": fmt(wall.declared_ratio),
        "vertices": [
            {"id": v, "lo": fmt(iv.lo), "hi": fmt(iv.hi), "color": c}
            for v, (iv, c) in enumerate(zip(wall.family, wall.colors))
        ],
    }


def _vertex_rows(d: dict, need_color: bool):
    rows = d.get("vertices")
    if not isinstance(rows, list):
        raise ParseError("missing 'vertices' list")
    rows = sorted(rows, key=lambda row: row.get("id", 0))
    if [row.get("id") for row in rows] != list(range(len(rows))):
        raise ParseError("vertex ids must be dense 0..n-1")
    family, colors = [], []
    for row in rows:
        try:
            family.append(Interval(_q(row["lo"]), _q(row["hi"])))
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad vertex {row!r}: {exc}") from exc
        if need_color:
            c = row.get("color")
            if not isinstance(c, int) or isinstance(c, bool):
                raise ParseError(f"vertex {row.get('id')} needs an integer color")
            colors.append(c)
    return family, colors


def wall_from_json(d: dict) -> Wall:
    family, colors = _vertex_rows(d, True)
    return Wall(family, colors, _q(d.get("declared_ratio", "0/1")))


def family_from_json(d: dict) -> tuple:
    family, _ = _vertex_rows(d, False)
    return tuple(family)


def coloring_to_json(family, colors) -> dict:
    return wall_to_json(Wall(family, colors))


# caps


def boxcap_to_json(cap: BoxCap, qc: Quasicap | None = None) -> dict:
    out = {
        "r": fmt(cap.r),
        "boxes": [
            {
                "id": b.id,
                "x": _pair(b.x),
                "top": fmt(b.top),
                "height": fmt(b.height),
                "cone_depth": fmt(b.cone_depth),
                "cone_x": _pair(b.cone_x),
                "supports": b.supports,
                "side": b.side,
            }
            for b in cap.boxes
        ],
    }
    if qc is not None:
        out["quasicap"] = {"key_box": qc.key_box, "twins": list(qc.twins), "theta": fmt(qc.theta)}
    return out


def boxcap_from_json(d: dict) -> BoxCap:
    try:
        boxes = [
            CapBox(
                str(row["id"]),
                _q(row["top"]),
                _q(row["height"]),
                _q(row["cone_depth"]),
                row.get("supports"),
                row.get("side", "C"),
                _iv(row["x"]) if row.get("x") is not None else None,
                _iv(row["cone_x"]) if row.get("cone_x") is not None else None,
            )
            for row in d["boxes"]
        ]
        return BoxCap(_q(d["r"]), boxes)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad box cap: {exc}") from exc


def quasicap_from_json(d: dict) -> Quasicap | None:
    meta = d.get("quasicap")
    if not meta:
        return None
    cap = boxcap_from_json(d)
    return Quasicap(cap, meta["key_box"], tuple(meta["twins"]), _q(meta["theta"]))


def vertexcap_to_json(cap: VertexCap, compact: bool = False) -> dict:
    if compact:
        runs = [
            {"I": _pair(run.I), "J": _pair(run.J), "f": run.top_color, "count": run.count, "c": run.c}
            for run in cap.runs
        ]
        return {"r": fmt(cap.r), "runs": runs}
    return {
        "r": fmt(cap.r),
        "vertices": [
            {"id": vid, "I": _pair(I), "J": _pair(J), "f": f, "c": c}
            for vid, I, J, f, c in cap.vertices()
        ],
    }


def vertexcap_from_json(d: dict) -> VertexCap:
    try:
        r = _q(d["r"])
        if "runs" in d:
            runs = [
                VertexRun(_iv(x["I"]), _iv(x["J"]), int(x["f"]), int(x["count"]), int(x["c"]))
                for x in d["runs"]
            ]
            return VertexCap(r, runs)
        verts = [(int(x["id"]), _iv(x["I"]), _iv(x["J"]), int(x["f"]), int(x["c"])) for x in d["vertices"]]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad vertex cap: {exc}") from exc
    return VertexCap.from_vertices(r, verts)


def detect_kind(d: dict) -> str:
    if "boxes" in d:
        return "boxcap"
    if "nodes" in d:
        return "bincap"
    if "runs" in d or ("vertices" in d and d["vertices"] and "J" in d["vertices"][0]):
        return "vertexcap"
    if "vertices" in d:
        return "wall"
    if "steps" in d:
        return "recipe"
    raise ParseError("cannot tell what kind of document this is")


# recipes and sequences


def recipe_to_json(rec: Recipe) -> dict:
    return {
        "r": fmt(rec.r),
        "steps": [{"theta": fmt(t), "delta": fmt(d), "N": n} for t, d, n in rec.steps],
    }


def recipe_from_json(d: dict) -> Recipe:
    try:
        return Recipe(_q(d["r"]), [(_q(s["theta"]), _q(s["delta"]), int(s["N"])) for s in d["steps"]])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad recipe: {exc}") from exc


def sequence_to_csv(terms) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "numerator", "denominator"])
    for i, u in enumerate(terms):
        u = Fraction(u)
        w.writerow([i, u.numerator, u.denominator])
    return buf.getvalue()


def sequence_from_csv(text: str) -> list:
    rows = list(csv.DictReader(_io.StringIO(text)))
    return [Fraction(int(row["numerator"]), int(row["denominator"])) for row in rows]


def sequence_to_json(terms) -> dict:
    return {"terms": [fmt(u) for u in terms]}


# binary caps and witnesses


def bincap_to_json(cap: BinaryCap) -> dict:
    return {
        "r": fmt(cap.r),
        "nodes": [
            {"word": w, "kappa": fmt(nd.kappa), "tau": fmt(nd.tau)}
            for w, nd in sorted(cap.nodes.items(), key=lambda item: (len(item[0]), item[0]))
        ],
    }


def bincap_from_json(d: dict) -> BinaryCap:
    try:
        nodes = {}
        for row in d["nodes"]:
            word = row.get("word", "")
            word = "" if word in ("λ", "lambda") else word
            nodes[word] = BinaryCapNode(word, _q(row["kappa"]), _q(row["tau"]))
        return BinaryCap(_q(d["r"]), nodes)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad binary cap: {exc}") from exc


def witness_to_json(wit: RefutationWitness) -> dict:
    return {
        "r": fmt(wit.r),
        "chain": [
            {
                "word": link.word,
                "u": link.u,
                "m": link.m,
                "kappa": fmt(link.kappa),
                "beta": fmt(link.beta),
                "pi": fmt(link.pi),
                "tau": fmt(link.tau),
                "pi_u": fmt(link.pi_u),
                "inequalities": [
                    {"name": name, "lhs": fmt(lhs), "rhs": fmt(rhs), "holds": lhs >= rhs}
                    for name, lhs, rhs in link.checks
                ],
            }
            for link in wit.chain
        ],
        "failure": None
        if wit.failure is None
        else {
            "word": wit.failure.word,
            "required_kappa": fmt(wit.failure.required),
            "actual_kappa": fmt(wit.failure.actual),
            "strict": wit.failure.strict,
        },
        "relation_violations": [
            {"word": w, "relation": rel, "detail": detail} for w, rel, detail in wit.relation_violations
        ],
    }


def witness_from_json(d: dict) -> RefutationWitness:
    chain = [
        ChainLink(
            x["word"], x["u"], int(x["m"]), _q(x["kappa"]), _q(x["beta"]), _q(x["pi"]),
            _q(x["tau"]), _q(x["pi_u"]),
            tuple((i["name"], _q(i["lhs"]), _q(i["rhs"])) for i in x["inequalities"]),
        )
        for x in d["chain"]
    ]
    f = d.get("failure")
    failure = None if f is None else Failure(f["word"], _q(f["required_kappa"]), _q(f["actual_kappa"]), bool(f["strict"]))
    rel = [(x["word"], x["relation"], x["detail"]) for x in d.get("relation_violations", [])]
    return RefutationWitness(_q(d["r"]), chain, failure, rel)


# analysis


def _enc(e):
    return {"label": e.label, "lo": fmt(e.lo), "hi": fmt(e.hi), "exact": None if e.exact is None else fmt(e.exact)}


def analysis_to_json(rep: AnalysisReport) -> dict:
    roots = {e.label: _enc(e) for e in rep.roots}
    complex_pair = rep.real_root_count == 1
    return {
        "r": fmt(rep.r),
        "theta": fmt(rep.theta),
        "D": fmt(rep.D),
        "real_root_count": rep.real_root_count,
        "alpha": roots.get("alpha"),
        "gamma": "complex" if complex_pair else roots.get("gamma"),
        "beta": "complex" if complex_pair else roots.get("beta"),
        "margin": None if rep.margin is None else [fmt(rep.margin[0]), fmt(rep.margin[1])],
    }


def analysis_grid_to_csv(reports) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "theta", "D", "real_root_count", "gamma_lo", "gamma_hi", "margin_lo", "margin_hi"])
    for rep in reports:
        g = rep.root("gamma")
        w.writerow([
            fmt(rep.r), fmt(rep.theta), fmt(rep.D), rep.real_root_count,
            "" if g is None else fmt(g.lo), "" if g is None else fmt(g.hi),
            "" if rep.margin is None else fmt(rep.margin[0]),
            "" if rep.margin is None else fmt(rep.margin[1]),
        ])
    return buf.getvalue()


# files


def dump_json(obj: dict, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def order_to_text(order) -> str:
    return "".join(f"{v}\n" for v in order)


def order_from_text(text: str) -> list:
    try:
        return [int(line) for line in text.split() if line.strip()]
    except ValueError as exc:
        raise ParseError(f"bad order file: {exc}") from exc
