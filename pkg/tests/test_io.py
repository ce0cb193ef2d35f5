import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffbench import io
from ffbench.binary import BinaryCap, BinaryCapNode, refute_five
from ffbench.caps import lower_to_vertex_cap
from ffbench.errors import ParseError
from ffbench.exact import Interval
from ffbench.ivg import Wall
from ffbench.quasicap import Recipe, initial_quasicap
from ffbench.roots import analyze
from ffbench.walls import tower_wall

F = Fraction


def through_text(d):
    return json.loads(json.dumps(d))


def test_wall_roundtrip():
    w = tower_wall(2)
    w = Wall(w.family, w.colors, F(7, 3))
    assert io.wall_from_json(through_text(io.wall_to_json(w))) == w


@given(st.lists(st.tuples(st.fractions(-9, 9, max_denominator=30), st.fractions(0, 5, max_denominator=30)), min_size=1, max_size=8))
def test_family_roundtrip(pairs):
    fam = tuple(Interval(a, a + b) for a, b in pairs)
    d = through_text(io.coloring_to_json(fam, [1] * len(fam)))
    assert io.family_from_json(d) == fam


def test_boxcap_roundtrip(cs_cap):
    d = through_text(io.boxcap_to_json(cs_cap))
    back = io.boxcap_from_json(d)
    # declared weight sets are a construction aid and are not serialized
    assert [(b.id, b.top, b.height, b.cone_depth, b.x, b.cone_x, b.supports, b.side) for b in back.boxes] == [
        (b.id, b.top, b.height, b.cone_depth, b.x, b.cone_x, b.supports, b.side) for b in cs_cap.boxes
    ]
    assert io.detect_kind(d) == "boxcap"


def test_quasicap_roundtrip():
    qc = initial_quasicap(F(9, 2))
    back = io.quasicap_from_json(through_text(io.boxcap_to_json(qc.cap, qc)))
    assert (back.key_box, back.twins, back.theta) == (qc.key_box, qc.twins, qc.theta)
    assert io.quasicap_from_json(io.boxcap_to_json(qc.cap)) is None


@pytest.mark.parametrize("compact", [False, True])
def test_vertexcap_roundtrip(cs_cap, compact):
    vc = lower_to_vertex_cap(cs_cap)
    back = io.vertexcap_from_json(through_text(io.vertexcap_to_json(vc, compact)))
    assert list(back.vertices()) == list(vc.vertices())
    assert io.detect_kind(io.vertexcap_to_json(vc, compact)) == "vertexcap"


def test_recipe_roundtrip():
    rec = Recipe(F(9, 2), [(1, F(4, 5), 7), (F(9, 5), F(7, 10), 7)])
    d = through_text(io.recipe_to_json(rec))
    assert io.recipe_from_json(d) == rec
    assert d["steps"][0] == {"theta": "1/1", "delta": "4/5", "N": 7}


def test_sequence_csv_roundtrip():
    terms = [F(1), F(9, 5), F(-3, 7)]
    text = io.sequence_to_csv(terms)
    assert text.splitlines()[0] == "index,numerator,denominator"
    assert io.sequence_from_csv(text) == terms


def test_bincap_and_witness_roundtrip():
    cap = BinaryCap(5, {"": BinaryCapNode("", 1, 0), "H": BinaryCapNode("H", F(1, 2), 1)})
    assert io.bincap_from_json(through_text(io.bincap_to_json(cap))) == cap
    d = io.bincap_to_json(cap)
    d["nodes"][0]["word"] = "λ"
    assert io.bincap_from_json(d) == cap
    wit = refute_five(cap)
    assert io.witness_from_json(through_text(io.witness_to_json(wit))) == wit


def test_analysis_json():
    d = io.analysis_to_json(analyze(5, 2))
    assert d["D"] == "5/1" and d["gamma"]["exact"] == "1/2" and d["margin"] == ["0/1", "0/1"]
    d = io.analysis_to_json(analyze(4, 1))
    assert d["gamma"] == "complex" and d["real_root_count"] == 1
    csv_text = io.analysis_grid_to_csv([analyze(5, 2), analyze(4, 1)])
    assert len(csv_text.splitlines()) == 3


def test_order_text():
    assert io.order_from_text(io.order_to_text([3, 1, 2])) == [3, 1, 2]
    with pytest.raises(ParseError):
        io.order_from_text("1\nx\n")


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(ParseError):
        io.load_json(bad)
    with pytest.raises(ParseError):
        io.wall_from_json({"vertices": [{"id": 0, "lo": "1", "hi": "0", "color": 1}]})
    with pytest.raises(ParseError):
        io.wall_from_json({"vertices": [{"id": 1, "lo": "0", "hi": "1", "color": 1}]})
    with pytest.raises(ParseError):
        io.wall_from_json({"vertices": [{"id": 0, "lo": "0", "hi": "1", "color": "2"}]})
    with pytest.raises(ParseError):
        io.boxcap_from_json({"r": "4", "boxes": [{"id": "a"}]})
    with pytest.raises(ParseError):
        io.detect_kind({})
