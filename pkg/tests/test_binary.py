from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import two_box_cap
from ffbench.binary import (
    BinaryCap,
    BinaryCapNode,
    check_relations,
    consistent_taus,
    corpus,
    derive_quantities,
    encode_box_cap,
    fib,
    refute_five,
    tree_shapes,
    verify_witness,
)
from ffbench.errors import MissingParent

F = Fraction


def cap_of(r, spec):
    return BinaryCap(r, {w: BinaryCapNode(w, k, t) for w, (k, t) in spec.items()})


def test_fib():
    assert [fib(n) for n in range(10)] == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34]


def test_derive_examples():
    dq = derive_quantities(cap_of(5, {"": (1, 0)}))
    assert dq.beta[""] == dq.pi[""] == 0
    dq = derive_quantities(cap_of(5, {"": (1, 0), "H": (1, 1)}))
    assert (dq.beta["H"], dq.pi["H"]) == (0, 1)
    dq = derive_quantities(cap_of(5, {"": (1, 0), "L": (2, 3)}))
    assert (dq.beta["L"], dq.pi["L"]) == (0, 1)
    assert dq.alpha("L") == 1


def test_missing_parent():
    with pytest.raises(MissingParent):
        derive_quantities(cap_of(5, {"": (1, 0), "HL": (1, 2)}))
    with pytest.raises(MissingParent):
        derive_quantities(cap_of(5, {"H": (1, 0)}))


def test_bad_word():
    with pytest.raises(ValueError):
        BinaryCapNode("HX", 1, 0)


def test_relations_single_box():
    assert check_relations(cap_of(1, {"": (1, 0)})).ok
    rep = check_relations(cap_of(1, {"": (1, 2)}))
    assert [rel for _, rel, _ in rep.violations] == ["Cap-λ"]


def test_relations_h_tau():
    rep = check_relations(cap_of(1, {"": (1, 0), "H": (1, 3)}))
    assert "H-τ" in {rel for _, rel, _ in rep.violations}


def test_cs_encoding(cs_cap):
    assert check_relations(encode_box_cap(cs_cap)).ok
    at_five = encode_box_cap(cs_cap, 5)
    rep = check_relations(at_five)
    assert ("L", "L-κ") in {(w, rel) for w, rel, _ in rep.violations}
    wit = refute_five(at_five)
    assert wit.valid and wit.relation_violations and verify_witness(at_five, wit)


@pytest.mark.parametrize("which", ["two_box", "cap_45"])
def test_cross_model_soundness(which, cap_45):
    cap = two_box_cap() if which == "two_box" else cap_45[1].cap
    assert check_relations(encode_box_cap(cap)).ok


def test_refute_single_box():
    cap = cap_of(5, {"": (1, 0)})
    wit = refute_five(cap)
    assert [link.word for link in wit.chain] == [""]
    assert wit.failure.word == "H" and wit.failure.required == 2 and wit.failure.actual == 0
    assert verify_witness(cap, wit)


def test_refute_needs_five():
    with pytest.raises(ValueError):
        refute_five(cap_of(4, {"": (1, 0)}))


def test_tampered_witness_rejected():
    cap = cap_of(5, {"": (1, 0), "H": (2, 1)})
    wit = refute_five(cap)
    assert verify_witness(cap, wit)
    bogus = replace(wit.failure, actual=wit.failure.actual + 7)
    assert not verify_witness(cap, type(wit)(wit.r, wit.chain, bogus, wit.relation_violations))
    if wit.chain:
        link = replace(wit.chain[0], pi_u=F(99))
        assert not verify_witness(cap, type(wit)(wit.r, [link, *wit.chain[1:]], wit.failure, []))
    empty = type(wit)(wit.r, [], None, [])
    assert not verify_witness(cap, empty)


def test_tree_shapes_counts():
    # binary trees with n nodes: Catalan numbers
    counts = [sum(1 for s in tree_shapes(5) if len(s) == n) for n in range(1, 6)]
    assert counts == [1, 2, 5, 14, 42]


def test_consistent_taus():
    shape = ["", "H", "L", "HH"]
    kap = {"": F(1), "H": F(2), "L": F(1), "HH": F(1)}
    tau = consistent_taus(shape, kap)
    assert tau == {"": 0, "H": 1, "L": 3, "HH": 3}


def _chain_ok(cap, wit):
    lengths = [len(link.word) for link in wit.chain]
    assert lengths == sorted(set(lengths))
    deepest = max(len(w) for w in cap.words())
    assert len(wit.chain) <= deepest + 2
    for link in wit.chain:
        assert link.kappa >= link.pi_u * fib(link.m + 3)
        for _, lhs, rhs in link.checks:
            assert lhs >= rhs


def test_small_corpus():
    n = 0
    for cap in corpus(max_nodes=4):
        wit = refute_five(cap)
        assert wit.valid and verify_witness(cap, wit)
        _chain_ok(cap, wit)
        n += 1
    assert n == 1 * 3 + 2 * 9 + 5 * 27 + 14 * 81


words = st.sampled_from(["", "H", "L", "HH", "HL", "LH", "LL", "HHH", "HHL", "LHH"])
values = st.fractions(0, 4, max_denominator=4)


@given(st.dictionaries(words, st.tuples(values, values), min_size=1, max_size=8))
def test_random_caps_refuted(spec):
    spec[""] = (max(spec.get("", (1, 0))[0], F(1, 4)), spec.get("", (1, 0))[1])
    nodes = {w: v for w, v in spec.items() if all(p in spec and spec[p][0] > 0 for p in (w[:i] for i in range(len(w))))}
    cap = cap_of(5, nodes)
    wit = refute_five(cap)
    assert wit.valid and verify_witness(cap, wit)
