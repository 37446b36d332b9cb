from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from logicaug.formula import Atom, parse_formula
from logicaug.pairs import (
    CHAIN, CORRUPTED, EQUIVALENCE, IMPLICATION, InsufficientPairs, PairStats, SamplePair,
    apportion, balance, build_pairs, candidate_pairs, pair_id, split_dataset,
)
from logicaug.rules import builtin_rules
from logicaug.search import DerivationPath, SearchConfig, explore
from logicaug.semantics import entails

P = parse_formula
RB = builtin_rules()
MP = P("(a -> b) & a")


def triples(pairs):
    return {(p.formula_a.key, p.formula_b.key, p.label, p.relation) for p in pairs}


def synthetic(n_pos, n_neg, shared_groups=0):
    """Pairs over fresh atoms; the first ``shared_groups`` positives get a reversed twin."""
    out = []
    for i in range(n_pos):
        a, b = Atom(f"x{i}"), Atom(f"y{i}")
        out.append(SamplePair(a, b, 1, EQUIVALENCE, DerivationPath(a)))
    for i in range(n_neg):
        a, b = Atom(f"u{i}"), Atom(f"v{i}")
        out.append(SamplePair(a, b, 0, CORRUPTED, DerivationPath(a)))
    for i in range(shared_groups):
        a, b = Atom(f"x{i}"), Atom(f"y{i}")
        out.append(SamplePair(b, a, 0, IMPLICATION, DerivationPath(b)))
    return out


class TestCandidates:
    def test_implication_pair_and_swap(self):
        res = explore(MP, RB.only(["I1"]), SearchConfig(d_max=1))
        assert triples(candidate_pairs(res, MP)) == {
            ("((a -> b) & a)", "b", 1, IMPLICATION),
            ("b", "((a -> b) & a)", 0, IMPLICATION),
        }

    def test_equivalence_both_directions(self):
        start = P("a -> b")
        res = explore(start, RB.only(["E9"]), SearchConfig(d_max=1))
        got = triples(candidate_pairs(res, start))
        assert ("(a -> b)", "(~b -> ~a)", 1, EQUIVALENCE) in got
        assert ("(~b -> ~a)", "(a -> b)", 1, EQUIVALENCE) in got

    def test_converse_error_negative(self):
        start = P("a -> b")
        res = explore(start, RB.only(["F1"]), SearchConfig(d_max=1))
        assert triples(candidate_pairs(res, start)) == {("(a -> b)", "(b -> a)", 0, CORRUPTED)}

    def test_chain_pairs_follow_path_extensions(self):
        res = explore(MP, RB.only(["E2", "I6"]), SearchConfig(d_max=2))
        chains = [p for p in candidate_pairs(res, MP) if p.relation == CHAIN]
        assert chains
        for p in chains:
            assert p.derivation.start == p.formula_a and p.derivation.final == p.formula_b
            assert p.label == 1

    def test_accidentally_valid_error_output_dropped(self):
        start = P("a -> a")
        stats = PairStats()
        res = explore(start, RB.only(["F1"]), SearchConfig(d_max=1))
        assert res.s1 == [] and res.s2 == []  # F1 maps a -> a to itself, never a new state
        start = P("(a -> a) & a")
        res = explore(start, RB.only(["F2"]), SearchConfig(d_max=1))
        assert [e.formula for e in res.s2] == [P("a")]
        assert candidate_pairs(res, start, stats=stats) == []
        assert stats.dropped[CORRUPTED] == 1


class TestBalance:
    def test_ten_positives_four_negatives(self):
        kept = balance(synthetic(10, 4), seed=42)
        assert sum(p.label for p in kept) == 4 and len(kept) == 8

    def test_seeded(self):
        pool = synthetic(10, 4)
        assert balance(pool, seed=1) == balance(pool, seed=1)

    def test_ratio(self):
        kept = balance(synthetic(10, 9), ratio=(2, 1))
        assert (sum(p.label for p in kept), len(kept)) == (10, 15)

    def test_bad_ratio(self):
        with pytest.raises(ValueError):
            balance(synthetic(1, 1), ratio=(0, 1))


def test_build_pairs_on_seed_space_is_consistent_and_balanced():
    start = P("((a -> b) & (b -> c)) & a")
    res = explore(start, RB, SearchConfig(d_max=2))
    stats = PairStats()
    pairs = build_pairs(res, start, seed=42, stats=stats)
    assert pairs
    pos = sum(p.label for p in pairs)
    assert pos == len(pairs) - pos
    for p in pairs:
        assert entails(p.formula_a, p.formula_b) == (p.label == 1)
    assert build_pairs(res, start, seed=42) == pairs
    assert len({p.id for p in pairs}) == len(pairs)
    assert stats.candidates == stats.downsampled + sum(stats.dropped.values()) + len(pairs)


def test_build_pairs_matches_full_check_then_downsample_counts():
    start = P("(a | b) & ~a")
    res = explore(start, RB, SearchConfig(d_max=2))
    full = candidate_pairs(res, start)
    pos = sum(p.label for p in full)
    lazy = build_pairs(res, start)
    assert len(lazy) == 2 * min(pos, len(full) - pos)
    assert triples(lazy) <= triples(full)


def test_pair_id_is_content_hash():
    a, b = P("a"), P("b")
    assert pair_id(a, b, 1, CHAIN) == pair_id(P("a"), P("b"), 1, CHAIN)
    assert pair_id(a, b, 1, CHAIN) != pair_id(b, a, 1, CHAIN)
    assert len(pair_id(a, b, 0, CORRUPTED)) == 16


def test_record_fields():
    res = explore(MP, RB.only(["I1"]), SearchConfig(d_max=1))
    rec = candidate_pairs(res, MP)[0].to_record()
    assert list(rec) == ["id", "seed_id", "relation", "label", "formula_a", "formula_b", "derivation_text"]
    assert rec["derivation_text"].startswith("PREMISE: (a -> b) & a")


class TestSplit:
    def test_full_scale_counts(self):
        pool = synthetic(7000, 7000)
        splits = split_dataset(pool, (Fraction(8, 14), Fraction(3, 14), Fraction(3, 14)), seed=42)
        assert {k: len(v) for k, v in splits.items()} == {"train": 8000, "dev": 3000, "test": 3000}
        for rows in splits.values():
            pos = sum(p.label for p in rows)
            assert abs(pos - (len(rows) - pos)) <= 1

    def test_absolute_counts_leave_rest_out(self):
        splits = split_dataset(synthetic(60, 60), seed=1, counts=(50, 20, 20))
        assert [len(v) for v in splits.values()] == [50, 20, 20]

    def test_insufficient(self):
        with pytest.raises(InsufficientPairs):
            split_dataset(synthetic(5, 5), counts=(8, 3, 3))

    def test_all_train(self):
        pool = synthetic(7, 3)
        splits = split_dataset(pool, (1, 0, 0))
        assert splits["train"] == pool and splits["dev"] == splits["test"] == []

    def test_deterministic_and_seed_sensitive(self):
        pool = synthetic(50, 50, shared_groups=20)
        fr = (0.6, 0.2, 0.2)
        assert split_dataset(pool, fr, seed=42) == split_dataset(pool, fr, seed=42)
        assert split_dataset(pool, fr, seed=42) != split_dataset(pool, fr, seed=43)

    def test_bad_fractions(self):
        with pytest.raises(ValueError):
            split_dataset(synthetic(2, 2), (0.5, 0.5, 0.5))
        with pytest.raises(ValueError):
            split_dataset(synthetic(2, 2))

    @given(st.integers(0, 60), st.integers(0, 60), st.integers(0, 30), st.integers(0, 10**6))
    def test_partition_without_straddling(self, n_pos, n_neg, shared, seed):
        pool = synthetic(n_pos, n_neg, min(shared, n_pos))
        splits = split_dataset(pool, (0.7, 0.15, 0.15), seed=seed)
        ids = [p.id for rows in splits.values() for p in rows]
        assert sorted(ids) == sorted(p.id for p in pool)
        owner = {}
        for name, rows in splits.items():
            for p in rows:
                assert owner.setdefault(p.group_key, name) == name


@given(st.integers(0, 10**4), st.lists(st.integers(0, 50), min_size=1, max_size=5).filter(any))
def test_apportion_sums_and_stays_within_one(total, raw):
    weights = [Fraction(r, sum(raw)) for r in raw]
    got = apportion(total, weights)
    assert sum(got) == total
    assert all(abs(g - total * w) < 1 for g, w in zip(got, weights))
