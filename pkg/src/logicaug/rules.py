"""Labeled rewrite rules: the builtin library, rule files and the oracle audit.

A rule pattern is an ordinary formula whose atoms are all metavariables
(single uppercase letters other than ``T``/``F``).  Rules labeled 1 are
sound; rules labeled 0 are deliberate fallacies used to manufacture negative
examples, and the audit checks that they really are unsound.

Rule files are JSON lines, one rule per line; blank lines and lines starting
with ``#`` are ignored::

    {"id": "E8", "name": "MaterialImplication", "kind": "equivalence", "label": 1, "lhs": "X -> Y", "rhs": "~X | Y"}
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Iterator

from . import semantics
from .formula import Formula, FormulaSyntaxError, atoms, parse_formula

EQUIVALENCE = "equivalence"
IMPLICATION = "implication"
KINDS = (EQUIVALENCE, IMPLICATION)
_METAVAR_RE = re.compile(r"^[A-Z]$")


class RuleError(ValueError):
    """Invalid rule definition or rule file."""


@dataclass(frozen=True)
class RewriteRule:
    id: str
    name: str
    kind: str
    label: int
    lhs: Formula
    rhs: Formula

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RuleError(f"rule {self.id}: kind must be one of {KINDS}, got {self.kind!r}")
        if self.label not in (0, 1):
            raise RuleError(f"rule {self.id}: label must be 0 or 1, got {self.label!r}")
        for side in (self.lhs, self.rhs):
            for name in atoms(side):
                if not _METAVAR_RE.match(name):
                    raise RuleError(
                        f"rule {self.id}: pattern atom {name!r} is not a metavariable "
                        "(single uppercase letter)"
                    )
        free = sorted(atoms(self.rhs) - atoms(self.lhs))
        if free:
            raise RuleError(f"rule {self.id}: free metavariable {', '.join(free)}")

    @property
    def is_equivalence(self) -> bool:
        return self.kind == EQUIVALENCE

    @property
    def reversible(self) -> bool:
        """Whether the rhs -> lhs orientation binds every metavariable."""
        return self.is_equivalence and atoms(self.lhs) <= atoms(self.rhs)

    def to_record(self) -> dict:
        return {
            "id": self.id, "name": self.name, "kind": self.kind, "label": self.label,
            "lhs": self.lhs.key, "rhs": self.rhs.key,
        }


class RuleBase:
    """Ordered, immutable collection of rules with unique ids."""

    def __init__(self, rules: Iterable[RewriteRule] = ()):
        self._rules = tuple(rules)
        self._by_id: dict[str, RewriteRule] = {}
        for rule in self._rules:
            if rule.id in self._by_id:
                raise RuleError(f"duplicate rule id {rule.id!r}")
            self._by_id[rule.id] = rule

    def __iter__(self) -> Iterator[RewriteRule]:
        return iter(self._rules)

    def __len__(self) -> int:
        return len(self._rules)

    def __contains__(self, rule_id: str) -> bool:
        return rule_id in self._by_id

    def __repr__(self) -> str:
        return f"RuleBase({[r.id for r in self._rules]})"

    @property
    def ids(self) -> list[str]:
        return [r.id for r in self._rules]

    def lookup(self, rule_id: str) -> RewriteRule:
        try:
            return self._by_id[rule_id]
        except KeyError:
            raise KeyError(f"unknown rule id {rule_id!r}") from None

    def _check_ids(self, ids: Iterable[str]) -> set[str]:
        ids = set(ids)
        unknown = sorted(ids - self._by_id.keys())
        if unknown:
            raise KeyError(f"unknown rule id(s): {', '.join(unknown)}")
        return ids

    def without(self, ids: Iterable[str]) -> "RuleBase":
        """Copy with the given rules disabled."""
        ids = self._check_ids(ids)
        return RuleBase(r for r in self._rules if r.id not in ids)

    def only(self, ids: Iterable[str]) -> "RuleBase":
        """Copy restricted to the given rules, keeping declaration order."""
        ids = self._check_ids(ids)
        return RuleBase(r for r in self._rules if r.id in ids)

    def valid_only(self) -> "RuleBase":
        return RuleBase(r for r in self._rules if r.label == 1)


def make_rule(rule_id: str, name: str, kind: str, label: int, lhs: str, rhs: str) -> RewriteRule:
    return RewriteRule(rule_id, name, kind, label, parse_formula(lhs), parse_formula(rhs))


_E, _I = EQUIVALENCE, IMPLICATION

BUILTIN_RULES: tuple[tuple[str, str, str, int, str, str], ...] = (
    ("E1", "DoubleNegation", _E, 1, "~~X", "X"),
    ("E2", "CommutativityAnd", _E, 1, "X & Y", "Y & X"),
    ("E3", "CommutativityOr", _E, 1, "X | Y", "Y | X"),
    ("E4", "AssociativityAnd", _E, 1, "(X & Y) & Z", "X & (Y & Z)"),
    ("E5", "AssociativityOr", _E, 1, "(X | Y) | Z", "X | (Y | Z)"),
    ("E6", "DeMorganAnd", _E, 1, "~(X & Y)", "~X | ~Y"),
    ("E7", "DeMorganOr", _E, 1, "~(X | Y)", "~X & ~Y"),
    ("E8", "MaterialImplication", _E, 1, "X -> Y", "~X | Y"),
    ("E9", "Contraposition", _E, 1, "X -> Y", "~Y -> ~X"),
    ("E10", "DistributionAndOverOr", _E, 1, "X & (Y | Z)", "(X & Y) | (X & Z)"),
    ("E11", "DistributionOrOverAnd", _E, 1, "X | (Y & Z)", "(X | Y) & (X | Z)"),
    ("E12", "Contradiction", _E, 1, "X & ~X", "F"),
    ("E13", "ExcludedMiddle", _E, 1, "X | ~X", "T"),
    ("E14", "IdentityAnd", _E, 1, "X & T", "X"),
    ("E15", "IdentityOr", _E, 1, "X | F", "X"),
    ("E16", "AnnihilationAnd", _E, 1, "X & F", "F"),
    ("E17", "AnnihilationOr", _E, 1, "X | T", "T"),
    ("E18", "IffDefinition", _E, 1, "X <-> Y", "(X -> Y) & (Y -> X)"),
    ("E19", "IdempotenceAnd", _E, 1, "X & X", "X"),
    ("E20", "IdempotenceOr", _E, 1, "X | X", "X"),
    ("I1", "ModusPonens", _I, 1, "(X -> Y) & X", "Y"),
    ("I2", "ModusTollens", _I, 1, "(X -> Y) & ~Y", "~X"),
    ("I3", "HypotheticalSyllogism", _I, 1, "(X -> Y) & (Y -> Z)", "X -> Z"),
    ("I4", "DisjunctiveSyllogism", _I, 1, "(X | Y) & ~X", "Y"),
    ("I5", "SimplificationLeft", _I, 1, "X & Y", "X"),
    ("I6", "SimplificationRight", _I, 1, "X & Y", "Y"),
    ("F1", "ConverseError", _I, 0, "X -> Y", "Y -> X"),
    ("F2", "AffirmingConsequent", _I, 0, "(X -> Y) & Y", "X"),
    ("F3", "DenyingAntecedent", _I, 0, "(X -> Y) & ~X", "~Y"),
    ("F4", "FalseDeMorgan", _I, 0, "~(X & Y)", "~X & ~Y"),
)


def builtin_rules() -> RuleBase:
    return RuleBase(make_rule(*row) for row in BUILTIN_RULES)


_FIELDS = ("id", "name", "kind", "label", "lhs", "rhs")


def parse_rules(text: str, source: str = "<string>") -> RuleBase:
    rules = []
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        where = f"{source}:{lineno}"
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RuleError(f"{where}: not a JSON object ({exc.msg})") from None
        if not isinstance(record, dict):
            raise RuleError(f"{where}: not a JSON object")
        for name in _FIELDS:
            if name not in record:
                raise RuleError(f"{where}: missing field {name!r}")
        for name in ("id", "name", "kind", "lhs", "rhs"):
            if not isinstance(record[name], str):
                raise RuleError(f"{where}: field {name!r} must be a string")
        if record["id"] in seen:
            raise RuleError(f"{where}: duplicate rule id {record['id']!r}")
        seen.add(record["id"])
        sides = {}
        for name in ("lhs", "rhs"):
            try:
                sides[name] = parse_formula(record[name])
            except FormulaSyntaxError as exc:
                raise RuleError(f"{where}: field {name!r}: {exc}") from None
        try:
            rules.append(RewriteRule(
                record["id"], record["name"], record["kind"], record["label"],
                sides["lhs"], sides["rhs"],
            ))
        except RuleError as exc:
            raise RuleError(f"{where}: {exc}") from None
    return RuleBase(rules)


def load_rules(path: str | Path) -> RuleBase:
    path = Path(path)
    return parse_rules(path.read_text(encoding="utf-8"), str(path))


def dump_rules(rb: RuleBase) -> str:
    return "".join(json.dumps(r.to_record(), ensure_ascii=False) + "\n" for r in rb)


@dataclass(frozen=True)
class RuleVerdict:
    id: str
    name: str
    kind: str
    declared_label: int
    oracle_valid: bool

    @property
    def agree(self) -> bool:
        return self.oracle_valid == (self.declared_label == 1)

    def line(self) -> str:
        verdict = "valid" if self.oracle_valid else "invalid"
        status = "ok" if self.agree else "DISAGREE"
        return (f"{self.id:<4} {self.name:<24} {self.kind:<11} "
                f"label={self.declared_label} oracle={verdict:<7} {status}")


@dataclass(frozen=True)
class ValidationReport:
    verdicts: tuple[RuleVerdict, ...]

    @property
    def ok(self) -> bool:
        return all(v.agree for v in self.verdicts)

    @property
    def disagreements(self) -> list[RuleVerdict]:
        return [v for v in self.verdicts if not v.agree]


def oracle_verdict(rule: RewriteRule) -> bool:
    if rule.is_equivalence:
        return semantics.equivalent(rule.lhs, rule.rhs)
    return semantics.entails(rule.lhs, rule.rhs)


def validate_rules(rb: RuleBase, oracle: Callable[[RewriteRule], bool] = oracle_verdict) -> ValidationReport:
    """Audit every declared label against the truth-table oracle."""
    return ValidationReport(tuple(
        RuleVerdict(r.id, r.name, r.kind, r.label, oracle(r)) for r in rb
    ))
