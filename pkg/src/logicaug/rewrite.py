"""Pattern matching and single-step rewriting of formulas under a rule base."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .formula import (
    Atom, Binary, Formula, Not, Position, positions_with_subformulas, replace_at, size,
)
from .rules import RewriteRule, RuleBase

FORWARD = "forward"
BACKWARD = "backward"
DEFAULT_NODE_CAP = 64

Bindings = dict[str, Formula]


class UnboundMetavariable(KeyError):
    pass


def _match(p: Formula, f: Formula, b: Bindings) -> bool:
    if isinstance(p, Atom):
        bound = b.get(p.name)
        if bound is None:
            b[p.name] = f
            return True
        return bound == f
    if type(p) is not type(f):
        return False
    if isinstance(p, Binary):
        return _match(p.left, f.left, b) and _match(p.right, f.right, b)
    if isinstance(p, Not):
        return _match(p.child, f.child, b)
    return True  # Top / Bot


def match_pattern(p: Formula, f: Formula, bindings: Mapping[str, Formula] | None = None) -> Bindings | None:
    """Bindings that make ``p`` equal to ``f``, or None.

    A metavariable occurring twice must bind structurally equal subtrees.
    """
    b = dict(bindings) if bindings else {}
    return b if _match(p, f, b) else None


def instantiate(p: Formula, b: Mapping[str, Formula]) -> Formula:
    if isinstance(p, Atom):
        try:
            return b[p.name]
        except KeyError:
            raise UnboundMetavariable(p.name) from None
    kids = p.children
    if not kids:
        return p
    return p.rebuild([instantiate(k, b) for k in kids])


@dataclass(frozen=True)
class Rewrite:
    rule_id: str
    rule_name: str
    kind: str
    orientation: str
    position: Position
    before: Formula
    after: Formula
    sub_before: Formula
    sub_after: Formula
    step_label: int

    def to_record(self) -> dict:
        return {
            "rule_id": self.rule_id,
            "orientation": self.orientation,
            "position": list(self.position),
            "sub_before": self.sub_before.key,
            "sub_after": self.sub_after.key,
        }


@dataclass(frozen=True)
class _Orientation:
    rule: RewriteRule
    orientation: str
    source: Formula
    target: Formula
    root_only: bool
    head: type | None  # required root node type, None when the source is a bare metavariable


def _head(p: Formula) -> type | None:
    return None if isinstance(p, Atom) else type(p)


def _mirrors_itself(rule: RewriteRule) -> bool:
    """True when rhs -> lhs is lhs -> rhs with metavariables renamed (e.g. commutativity)."""
    b = match_pattern(rule.lhs, rule.rhs)
    if b is None or not all(isinstance(v, Atom) for v in b.values()):
        return False
    if len(set(b.values())) != len(b):
        return False
    return instantiate(rule.rhs, b) == rule.lhs


@lru_cache(maxsize=64)
def _orientations(rb: RuleBase) -> tuple[_Orientation, ...]:
    """Rule orientations in (declaration index, forward-then-backward) order.

    Implication rules fire forward at the root only; equivalence rules fire
    both ways anywhere.  A backward orientation is skipped when its source
    lacks some metavariable of the target, or when it merely renames the
    forward one.
    """
    out = []
    for rule in rb:
        if rule.is_equivalence:
            out.append(_Orientation(rule, FORWARD, rule.lhs, rule.rhs, False, _head(rule.lhs)))
            if rule.reversible and not _mirrors_itself(rule):
                out.append(_Orientation(rule, BACKWARD, rule.rhs, rule.lhs, False, _head(rule.rhs)))
        else:
            out.append(_Orientation(rule, FORWARD, rule.lhs, rule.rhs, True, _head(rule.lhs)))
    return tuple(out)


def applicable_rewrites(f: Formula, rb: RuleBase, node_cap: int | None = DEFAULT_NODE_CAP) -> list[Rewrite]:
    """Every legal single-step rewrite of ``f``.

    Ordered by pre-order position, then rule declaration index, then
    orientation (forward before backward).  Rewrites whose result exceeds
    ``node_cap`` nodes are suppressed; duplicates are kept.
    """
    orients = _orientations(rb)
    out: list[Rewrite] = []
    if not orients:
        return out
    total = size(f)
    for pos, sub in positions_with_subformulas(f):
        sub_type = type(sub)
        rest = total - size(sub)
        for o in orients:
            if o.root_only and pos:
                continue
            head = o.head
            if head is not None and head is not sub_type:
                continue
            b: Bindings = {}
            if not _match(o.source, sub, b):
                continue
            new_sub = instantiate(o.target, b)
            if node_cap is not None and rest + size(new_sub) > node_cap:
                continue
            after = replace_at(f, pos, new_sub)
            rule = o.rule
            out.append(Rewrite(
                rule.id, rule.name, rule.kind, o.orientation, pos,
                f, after, sub, new_sub, rule.label,
            ))
    return out
