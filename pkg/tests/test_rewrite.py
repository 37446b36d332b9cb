import json

import pytest
from hypothesis import given

import oracles
from conftest import formulas
from logicaug.formula import Atom, parse_formula, replace_at, size, subformula_at
from logicaug.rewrite import (
    BACKWARD, FORWARD, UnboundMetavariable, applicable_rewrites, instantiate, match_pattern,
)
from logicaug.rules import RuleBase, builtin_rules, dump_rules
from logicaug.semantics import entails, equivalent

P = parse_formula
RB = builtin_rules()


class TestMatch:
    def test_modus_ponens_pattern(self):
        assert match_pattern(P("(X -> Y) & X"), P("(a -> b) & a")) == {"X": P("a"), "Y": P("b")}

    def test_non_linear_conflict(self):
        assert match_pattern(P("(X -> Y) & X"), P("(a -> b) & c")) is None

    def test_compound_bindings(self):
        assert match_pattern(P("X & Y"), P("(a -> b) & a")) == {"X": P("a -> b"), "Y": P("a")}

    def test_constants_must_match_exactly(self):
        assert match_pattern(P("X & F"), P("a & F")) == {"X": P("a")}
        assert match_pattern(P("X & F"), P("a & T")) is None

    def test_prior_bindings_respected(self):
        assert match_pattern(P("X & Y"), P("a & b"), {"X": P("b")}) is None


class TestInstantiate:
    def test_examples(self):
        b = {"X": P("a"), "Y": P("b")}
        assert instantiate(P("Y"), b) == P("b")
        assert instantiate(P("~X | Y"), b) == P("~a | b")

    def test_unbound(self):
        with pytest.raises(UnboundMetavariable):
            instantiate(P("X & Z"), {"X": P("a")})

    @given(formulas("abc", 8), formulas("abc", 8), formulas("abc", 8))
    def test_match_recovers_bindings_for_linear_patterns(self, x, y, z):
        b = {"X": x, "Y": y, "Z": z}
        for p in ["X & (Y | Z)", "(X -> Y) <-> ~Z"]:
            assert match_pattern(P(p), instantiate(P(p), b)) == b


def _summary(rewrites):
    return [(r.rule_id, r.orientation, r.position, r.after.key) for r in rewrites]


class TestApplicable:
    def test_two_rule_example(self):
        rb = RuleBase([RB.lookup("I1"), RB.lookup("E2")])
        assert _summary(applicable_rewrites(P("(a -> b) & a"), rb)) == [
            ("I1", FORWARD, (), "b"),
            ("E2", FORWARD, (), "(a & (a -> b))"),
        ]

    def test_bare_atom_only_backward_equivalences(self):
        # every builtin orientation whose source is a bare metavariable
        got = _summary(applicable_rewrites(Atom("a"), RB))
        assert got == [
            ("E1", BACKWARD, (), "~~a"),
            ("E14", BACKWARD, (), "(a & T)"),
            ("E15", BACKWARD, (), "(a | F)"),
            ("E19", BACKWARD, (), "(a & a)"),
            ("E20", BACKWARD, (), "(a | a)"),
        ]

    def test_empty_rulebase(self):
        assert applicable_rewrites(P("(a -> b) & a"), RuleBase([])) == []

    def test_self_mirroring_backward_orientation_skipped(self):
        assert [r.orientation for r in applicable_rewrites(P("a & b"), RB.only(["E2"]))] == [FORWARD]

    def test_implications_only_at_root(self):
        f = P("~((a -> b) & a)")
        assert not [r for r in applicable_rewrites(f, RB) if r.kind == "implication" and r.position]
        assert [r.rule_id for r in applicable_rewrites(f, RB.only(["I1", "I5"]))] == []

    def test_collapsing_backward_orientation_skipped(self):
        # X & ~X <=> F backward would need to invent X
        assert not [r for r in applicable_rewrites(P("F"), RB) if r.rule_id in {"E12", "E13", "E16", "E17"}]

    def test_node_cap(self):
        f = P("a & b")
        capped = applicable_rewrites(f, RB.only(["E19"]), node_cap=3)
        assert all(size(r.after) <= 3 for r in capped)
        assert len(applicable_rewrites(f, RB.only(["E19"]), node_cap=None)) > len(capped)

    def test_order_is_position_then_rule_then_orientation(self):
        rs = applicable_rewrites(P("(a -> b) & ~~a"), RB)
        index = {rid: i for i, rid in enumerate(RB.ids)}
        keys = [(r.position, index[r.rule_id], r.orientation != FORWARD) for r in rs]
        preorder = [(), (0,), (0, 0), (0, 1), (1,), (1, 0), (1, 0, 0)]
        assert [preorder.index(k[0]) for k in keys] == sorted(preorder.index(k[0]) for k in keys)
        for (p1, r1, o1), (p2, r2, o2) in zip(keys, keys[1:]):
            if p1 == p2:
                assert (r1, o1) <= (r2, o2)

    def test_deterministic(self):
        f = P("(a | b) & ~(c -> a)")
        assert applicable_rewrites(f, RB) == applicable_rewrites(f, RB)


@given(formulas("abcde", 14))
def test_rewrites_sound_and_well_positioned(f):
    for r in applicable_rewrites(f, RB):
        assert r.before == f
        assert r.sub_before == subformula_at(f, r.position)
        assert r.after == replace_at(f, r.position, r.sub_after)
        assert r.step_label == RB.lookup(r.rule_id).label
        if r.step_label == 1:
            assert entails(r.before, r.after)
            if r.kind == "equivalence":
                assert equivalent(r.before, r.after)


@given(formulas("abcd", 10))
def test_successor_set_matches_reference_rewriter(f):
    orients = oracles.orientations([json.loads(x) for x in dump_rules(RB).splitlines()])
    ref = {oracles.write_canonical(t) for t, _ in oracles.successors(oracles.read_canonical(f.key), orients)}
    assert {r.after.key for r in applicable_rewrites(f, RB)} == ref
