"""Bounded depth-first exploration of the rewrite state space.

``explore`` enumerates every state reachable from a start formula within
``d_max`` rewrite steps.  Cycle prevention uses the set of states on the
current path only; a global seen-set is consulted when recording results, so
each canonical formula is reported at most once per label.  A path's label is
the minimum of its step labels, so one error rule anywhere poisons it.

``prove`` runs the same recursion looking for a target, using sound rules
only, under increasing depth bounds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

from .formula import Formula
from .rewrite import DEFAULT_NODE_CAP, Rewrite, applicable_rewrites
from .rules import RuleBase, validate_rules
from .semantics import entails

DEFAULT_ENUM_DEPTH = 4
DEFAULT_PROVE_DEPTH = 8


@dataclass(frozen=True)
class SearchConfig:
    d_max: int = DEFAULT_ENUM_DEPTH
    target: Formula | None = None
    disabled_rules: frozenset[str] = frozenset()
    max_results: int | None = None
    node_cap: int | None = DEFAULT_NODE_CAP

    def __post_init__(self):
        if self.d_max < 0:
            raise ValueError("d_max must be non-negative")
        object.__setattr__(self, "disabled_rules", frozenset(self.disabled_rules))


@dataclass(frozen=True)
class DerivationPath:
    start: Formula
    steps: tuple[Rewrite, ...] = ()

    def __post_init__(self):
        prev = self.start
        for i, step in enumerate(self.steps):
            if step.before != prev:
                raise ValueError(f"step {i} ({step.rule_id}) does not continue the path")
            prev = step.after

    @property
    def label(self) -> int:
        return min((s.step_label for s in self.steps), default=1)

    @property
    def final(self) -> Formula:
        return self.steps[-1].after if self.steps else self.start

    @property
    def states(self) -> list[Formula]:
        return [self.start] + [s.after for s in self.steps]

    @property
    def equivalence_only(self) -> bool:
        return all(s.kind == "equivalence" for s in self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def suffix(self, i: int) -> "DerivationPath":
        """The sub-path starting at state ``i`` (0 = start)."""
        return DerivationPath(self.states[i], self.steps[i:])

    def to_records(self) -> list[dict]:
        return [s.to_record() for s in self.steps]


@dataclass(frozen=True)
class StateEntry:
    formula: Formula
    path: DerivationPath

    @property
    def label(self) -> int:
        return self.path.label

    @property
    def depth(self) -> int:
        return len(self.path)

    def to_record(self) -> dict:
        return {
            "formula": self.formula.key,
            "label": self.label,
            "depth": self.depth,
            "path": self.path.to_records(),
        }


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    duplicate_prunes: int = 0
    depth_prunes: int = 0
    exhaustion_prunes: int = 0
    truncated: bool = False

    def summary(self) -> str:
        return (f"expanded={self.nodes_expanded} duplicate_prunes={self.duplicate_prunes} "
                f"depth_prunes={self.depth_prunes} exhaustion_prunes={self.exhaustion_prunes}"
                + (" truncated" if self.truncated else ""))


@dataclass
class ExplorationResult:
    start: Formula
    s1: list[StateEntry] = field(default_factory=list)
    s2: list[StateEntry] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)

    def entries(self) -> Iterator[StateEntry]:
        yield from self.s1
        yield from self.s2

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps(e.to_record(), ensure_ascii=False) + "\n" for e in self.entries()
        )


def _active_rules(rb: RuleBase, cfg: SearchConfig) -> RuleBase:
    disabled = cfg.disabled_rules & set(rb.ids)
    return rb.without(disabled) if disabled else rb


class _Stop(Exception):
    pass


def explore(start: Formula, rb: RuleBase, cfg: SearchConfig = SearchConfig()) -> ExplorationResult:
    """Enumerate the states reachable from ``start`` within ``cfg.d_max`` steps."""
    if cfg.target is not None:
        raise ValueError("explore runs in enumeration mode; use prove() for a target")
    rules = _active_rules(rb, cfg)
    res = ExplorationResult(start)
    stats = res.stats
    seen = ({start.key}, {start.key})  # label 0 / label 1 result keys
    on_path = {start.key}
    d_max, node_cap, cap = cfg.d_max, cfg.node_cap, cfg.max_results

    def dfs(s: Formula, d: int, label: int, steps: tuple[Rewrite, ...]):
        if d >= d_max:
            stats.depth_prunes += 1
            return
        fresh = []
        frame_keys = set()
        for rw in applicable_rewrites(s, rules, node_cap):
            k = rw.after.key
            if k in on_path or k in frame_keys:
                continue
            frame_keys.add(k)
            fresh.append(rw)
        if not fresh:
            stats.exhaustion_prunes += 1
            return
        stats.nodes_expanded += 1
        for rw in fresh:
            child_label = label if rw.step_label >= label else rw.step_label
            child_steps = steps + (rw,)
            k = rw.after.key
            bucket = seen[child_label]
            if k in bucket:
                stats.duplicate_prunes += 1
            else:
                bucket.add(k)
                entry = StateEntry(rw.after, DerivationPath(start, child_steps))
                (res.s1 if child_label == 1 else res.s2).append(entry)
                if cap is not None and len(res.s1) + len(res.s2) >= cap:
                    stats.truncated = True
                    raise _Stop
            on_path.add(k)
            dfs(rw.after, d + 1, child_label, child_steps)
            on_path.discard(k)

    try:
        dfs(start, 0, 1, ())
    except _Stop:
        pass
    return res


def prove(start: Formula, target: Formula, rb: RuleBase,
          cfg: SearchConfig | None = None) -> DerivationPath | None:
    """Shortest-bound depth-first derivation of ``target`` from ``start``.

    The depth-first recursion runs with bounds 0, 1, ..., ``d_max`` and the
    first path found, in depth-first order, under the smallest bound wins.
    Only rules labeled 1 take part.  When those rules all pass the oracle
    audit, a target the start does not entail is rejected without searching.
    """
    cfg = cfg or SearchConfig(d_max=DEFAULT_PROVE_DEPTH, target=target)
    rules = _active_rules(rb, cfg).valid_only()
    if start == target:
        return DerivationPath(start)
    if validate_rules(rules).ok and not entails(start, target):
        return None
    goal = target.key
    node_cap = cfg.node_cap
    # state key -> largest remaining depth already searched without success
    failed: dict[str, int] = {}
    on_path = {start.key}

    def dfs(s: Formula, budget: int, steps: tuple[Rewrite, ...]) -> tuple[Rewrite, ...] | None:
        if s.key == goal:
            return steps
        if budget <= 0 or failed.get(s.key, -1) >= budget:
            return None
        fresh = []
        frame_keys = set()
        for rw in applicable_rewrites(s, rules, node_cap):
            k = rw.after.key
            if k in on_path or k in frame_keys:
                continue
            frame_keys.add(k)
            fresh.append(rw)
        for rw in fresh:
            k = rw.after.key
            on_path.add(k)
            found = dfs(rw.after, budget - 1, steps + (rw,))
            on_path.discard(k)
            if found is not None:
                return found
        failed[s.key] = max(failed.get(s.key, -1), budget)
        return None

    for bound in range(1, cfg.d_max + 1):
        steps = dfs(start, bound, ())
        if steps is not None:
            return DerivationPath(start, steps)
    return None
