"""Contrastive sample pairs from explored state sets.

Pairs come from four relations:

* ``equivalence`` - a state reached by equivalence rules only is paired with
  the start in both directions, both labeled 1;
* ``implication`` - a state reached through an implication step yields
  (start, state, 1) and the swapped (state, start, 0);
* ``chain`` - an intermediate state of a sound path is paired with the path's
  final state, labeled 1;
* ``corrupted`` - every state reached through an error rule yields
  (start, state, 0).

Every candidate is checked against the truth-table oracle before it is kept:
positives must be entailed, negatives must not be.
"""

from __future__ import annotations

import hashlib
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .formula import Formula, print_formula
from .search import DerivationPath, ExplorationResult
from .semantics import entails, equivalent
from .trace import format_path

EQUIVALENCE = "equivalence"
IMPLICATION = "implication"
CHAIN = "chain"
CORRUPTED = "corrupted"
RELATIONS = (EQUIVALENCE, IMPLICATION, CHAIN, CORRUPTED)
SPLITS = ("train", "dev", "test")


class InsufficientPairs(ValueError):
    pass


def pair_id(a: Formula, b: Formula, label: int, relation: str) -> str:
    digest = hashlib.sha1(f"{a.key}\t{b.key}\t{label}\t{relation}".encode()).hexdigest()
    return digest[:16]


@dataclass(frozen=True)
class SamplePair:
    formula_a: Formula
    formula_b: Formula
    label: int
    relation: str
    derivation: DerivationPath
    seed_id: int = 0

    @property
    def id(self) -> str:
        return pair_id(self.formula_a, self.formula_b, self.label, self.relation)

    @property
    def group_key(self) -> tuple[str, str]:
        """Unordered formula pair; both orientations of a pair share a split."""
        return tuple(sorted((self.formula_a.key, self.formula_b.key)))  # type: ignore[return-value]

    @property
    def derivation_text(self) -> str:
        return format_path(self.derivation)

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "seed_id": self.seed_id,
            "relation": self.relation,
            "label": self.label,
            "formula_a": self.formula_a.key,
            "formula_b": self.formula_b.key,
            "derivation_text": self.derivation_text,
        }


@dataclass
class PairStats:
    candidates: int = 0
    dropped: Counter = field(default_factory=Counter)
    duplicates: int = 0
    downsampled: int = 0

    def merge(self, other: "PairStats"):
        self.candidates += other.candidates
        self.dropped.update(other.dropped)
        self.duplicates += other.duplicates
        self.downsampled += other.downsampled

    def summary(self) -> str:
        drops = ", ".join(f"{k}={v}" for k, v in sorted(self.dropped.items())) or "none"
        return (f"candidates={self.candidates} oracle_drops[{drops}] "
                f"duplicates={self.duplicates} downsampled={self.downsampled}")


@dataclass(frozen=True)
class _Candidate:
    formula_a: Formula
    formula_b: Formula
    label: int
    relation: str
    path: DerivationPath
    suffix: int = 0  # derivation starts at this state of ``path``

    def consistent(self) -> bool:
        if self.relation == EQUIVALENCE:
            return equivalent(self.formula_a, self.formula_b)
        return entails(self.formula_a, self.formula_b) == bool(self.label)

    def make(self, seed_id: int) -> SamplePair:
        path = self.path.suffix(self.suffix) if self.suffix else self.path
        return SamplePair(self.formula_a, self.formula_b, self.label, self.relation, path, seed_id)


def _candidates(res: ExplorationResult, start: Formula, stats: PairStats) -> list[_Candidate]:
    buckets: dict[str, list[_Candidate]] = {r: [] for r in RELATIONS}
    for entry in res.s1:
        g, path = entry.formula, entry.path
        if path.equivalence_only:
            buckets[EQUIVALENCE].append(_Candidate(start, g, 1, EQUIVALENCE, path))
            buckets[EQUIVALENCE].append(_Candidate(g, start, 1, EQUIVALENCE, path))
        else:
            buckets[IMPLICATION].append(_Candidate(start, g, 1, IMPLICATION, path))
            buckets[IMPLICATION].append(_Candidate(g, start, 0, IMPLICATION, path))
        states = path.states
        for i in range(1, len(path)):
            if states[i] != g:
                buckets[CHAIN].append(_Candidate(states[i], g, 1, CHAIN, path, i))
    for entry in res.s2:
        buckets[CORRUPTED].append(_Candidate(start, entry.formula, 0, CORRUPTED, entry.path))

    out = []
    seen: set[tuple] = set()
    for relation in RELATIONS:
        for c in buckets[relation]:
            ident = (c.formula_a.key, c.formula_b.key, c.label, relation)
            if ident in seen:
                stats.duplicates += 1
                continue
            seen.add(ident)
            out.append(c)
    stats.candidates += len(out)
    return out


def candidate_pairs(res: ExplorationResult, start: Formula, seed_id: int = 0,
                    stats: PairStats | None = None) -> list[SamplePair]:
    """Every oracle-consistent pair, grouped by relation in a fixed order."""
    stats = stats if stats is not None else PairStats()
    out = []
    for c in _candidates(res, start, stats):
        if c.consistent():
            out.append(c.make(seed_id))
        else:
            stats.dropped[c.relation] += 1
    return out


def balance(pairs: Sequence[SamplePair], ratio: tuple[int, int] = (1, 1), seed: int | str = 42,
            stats: PairStats | None = None) -> list[SamplePair]:
    """Downsample the larger label class to ``positive:negative`` = ``ratio``.

    The surviving pairs keep their input order.
    """
    p, q = _check_ratio(ratio)
    pos = [i for i, x in enumerate(pairs) if x.label == 1]
    neg = [i for i, x in enumerate(pairs) if x.label == 0]
    keep_pos, keep_neg = _quota(len(pos), len(neg), p, q)
    rng = random.Random(f"balance:{seed}")
    chosen = set(rng.sample(pos, keep_pos)) | set(rng.sample(neg, keep_neg))
    if stats is not None:
        stats.downsampled += len(pairs) - len(chosen)
    return [x for i, x in enumerate(pairs) if i in chosen]


def _check_ratio(ratio: tuple[int, int]) -> tuple[int, int]:
    p, q = ratio
    if p <= 0 or q <= 0:
        raise ValueError(f"ratio terms must be positive, got {p}:{q}")
    return p, q


def _quota(n_pos: int, n_neg: int, p: int, q: int) -> tuple[int, int]:
    """Largest (positives, negatives) within the available counts with pos:neg = p:q."""
    units = min(n_pos // p, n_neg // q)
    return units * p, units * q


def build_pairs(res: ExplorationResult, start: Formula, seed: int | str = 42,
                ratio: tuple[int, int] = (1, 1), seed_id: int = 0,
                stats: PairStats | None = None) -> list[SamplePair]:
    """Oracle-filtered, ratio-balanced pairs for one explored start formula.

    The scarcer label class is oracle-checked in full.  The other class is
    visited in a seeded random order and checked only until its quota is
    met, so the result equals seeded downsampling of the consistent pairs.
    """
    p, q = _check_ratio(ratio)
    stats = stats if stats is not None else PairStats()
    cands = _candidates(res, start, stats)
    by_label = {1: [], 0: []}
    for i, c in enumerate(cands):
        by_label[c.label].append(i)
    # check the class that limits the quota first
    small, large = (1, 0) if len(by_label[1]) * q <= len(by_label[0]) * p else (0, 1)
    rng = random.Random(f"balance:{seed}:{seed_id}")

    drops = Counter()

    def accept(i: int) -> bool:
        if cands[i].consistent():
            return True
        drops[cands[i].relation] += 1
        return False

    valid_small = [i for i in by_label[small] if accept(i)]
    n_small = len(valid_small)
    per_unit = {1: p, 0: q}
    need_large = n_small // per_unit[small] * per_unit[large]
    order = list(by_label[large])
    rng.shuffle(order)
    valid_large = []
    for i in order:
        if len(valid_large) >= need_large:
            break
        if accept(i):
            valid_large.append(i)
    counts = {small: n_small, large: len(valid_large)}
    keep_pos, keep_neg = _quota(counts[1], counts[0], p, q)
    keep = {small: keep_pos if small == 1 else keep_neg, large: keep_pos if large == 1 else keep_neg}
    chosen = set(rng.sample(valid_small, keep[small])) | set(valid_large[:keep[large]])
    stats.dropped.update(drops)
    stats.downsampled += len(cands) - len(chosen) - sum(drops.values())
    return [cands[i].make(seed_id) for i in sorted(chosen)]


# ---------------------------------------------------------------------------
# splitting


def apportion(total: int, weights: Sequence[Fraction]) -> list[int]:
    """Largest-remainder apportionment of ``total`` by ``weights`` (summing to 1)."""
    exact = [total * w for w in weights]
    base = [int(x) for x in exact]
    rest = total - sum(base)
    order = sorted(range(len(weights)), key=lambda i: (-(exact[i] - base[i]), i))
    for i in order[:rest]:
        base[i] += 1
    return base


def _fractions(values: Iterable[float]) -> list[Fraction]:
    fr = [Fraction(v).limit_denominator(10**6) for v in values]
    if any(f < 0 for f in fr) or sum(fr) != 1:
        raise ValueError(f"split fractions must be non-negative and sum to 1, got {list(values)}")
    return fr


def split_dataset(pairs: Sequence[SamplePair], fractions: Sequence[float] | None = None,
                  seed: int | str = 42, counts: Sequence[int] | None = None) -> dict[str, list[SamplePair]]:
    """Seeded train/dev/test partition that never splits an unordered formula pair.

    Give either ``fractions`` (a partition of all pairs) or absolute ``counts``
    (pairs beyond the counts are left out).  Each split receives positives and
    negatives in the pool's proportion.
    """
    if (fractions is None) == (counts is None):
        raise ValueError("give exactly one of fractions or counts")
    n = len(pairs)
    n_pos = sum(1 for x in pairs if x.label == 1)
    n_neg = n - n_pos
    if counts is not None:
        sizes = list(counts)
        want = sum(sizes)
        if want > n:
            raise InsufficientPairs(f"requested {want} pairs but only {n} are available")
        pos_total = round(Fraction(want * n_pos, n)) if n else 0
        pos_q = apportion(pos_total, [Fraction(s, want) for s in sizes]) if want else [0] * len(sizes)
    else:
        sizes = apportion(n, _fractions(fractions))
        pos_q = apportion(n_pos, [Fraction(s, n) for s in sizes]) if n else [0] * len(sizes)
    neg_q = [s - p for s, p in zip(sizes, pos_q)]
    if sum(pos_q) > n_pos or sum(neg_q) > n_neg or min(neg_q, default=0) < 0:
        raise InsufficientPairs("not enough positives or negatives for the requested split sizes")

    groups: dict[tuple[str, str], list[int]] = {}
    for i, x in enumerate(pairs):
        groups.setdefault(x.group_key, []).append(i)
    order = list(groups)
    random.Random(f"split:{seed}").shuffle(order)

    k = len(sizes)
    assigned: list[list[int]] = [[] for _ in range(k)]
    leftovers = []
    for key in order:
        members = groups[key]
        gp = sum(1 for i in members if pairs[i].label == 1)
        gn = len(members) - gp
        fits = [j for j in range(k) if pos_q[j] >= gp and neg_q[j] >= gn]
        if not fits:
            leftovers.append(members)
            continue
        j = max(fits, key=lambda j: (pos_q[j] + neg_q[j], -j))
        pos_q[j] -= gp
        neg_q[j] -= gn
        assigned[j].extend(members)

    if counts is not None:
        if any(pos_q) or any(neg_q):
            raise InsufficientPairs("could not fill the requested split sizes without splitting a formula pair")
    else:
        for members in leftovers:
            j = max(range(k), key=lambda j: (pos_q[j] + neg_q[j], -j))
            gp = sum(1 for i in members if pairs[i].label == 1)
            pos_q[j] -= gp
            neg_q[j] -= len(members) - gp
            assigned[j].extend(members)

    names = SPLITS if k == 3 else tuple(f"split{j}" for j in range(k))
    return {name: [pairs[i] for i in sorted(idx)] for name, idx in zip(names, assigned)}


def describe_pair(p: SamplePair) -> str:
    return (f"[{p.relation}, label={p.label}] {print_formula(p.formula_a, 'pretty')}  ⟹?  "
            f"{print_formula(p.formula_b, 'pretty')}")
