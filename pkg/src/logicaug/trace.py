"""Human-readable derivation listings.

Two line shapes, both using the literal arrow `` → ``::

    RuleName: OriginalExpr → NewExpr                      (rewrite at the root)
    RuleName: SubExpr → NewSubExpr within ParentExpr      (rewrite of a subformula)
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .formula import Formula, parse_formula, print_formula
from .rewrite import Rewrite
from .search import DerivationPath

ARROW = " → "
WITHIN = " within "
WHOLE = "whole-formula"
SUBFORMULA = "subformula"

_LINE_RE = re.compile(
    r"^(?P<rule>[A-Za-z][A-Za-z0-9_]*): (?P<old>[^→]+?) → (?P<new>[^→]+?)"
    r"(?: within (?P<parent>[^→]+))?$"
)


@dataclass(frozen=True)
class TraceLine:
    text: str
    kind: str

    def __str__(self) -> str:
        return self.text


def _pp(f: Formula) -> str:
    return print_formula(f, "pretty")


def format_step(r: Rewrite) -> TraceLine:
    if not r.position:
        return TraceLine(f"{r.rule_name}: {_pp(r.before)}{ARROW}{_pp(r.after)}", WHOLE)
    return TraceLine(
        f"{r.rule_name}: {_pp(r.sub_before)}{ARROW}{_pp(r.sub_after)}{WITHIN}{_pp(r.before)}",
        SUBFORMULA,
    )


def format_path(p: DerivationPath) -> str:
    lines = [f"PREMISE: {_pp(p.start)}"]
    if p.steps:
        lines += [f"{i}. {format_step(s).text}" for i, s in enumerate(p.steps, 1)]
        lines.append(f"CONCLUSION: {_pp(p.final)} [label={p.label}]")
    return "\n".join(lines)


@dataclass(frozen=True)
class ParsedLine:
    rule_name: str
    old: Formula
    new: Formula
    parent: Formula | None

    @property
    def kind(self) -> str:
        return WHOLE if self.parent is None else SUBFORMULA


def parse_trace_line(text: str) -> ParsedLine:
    """Inverse of :func:`format_step`; raises ValueError on lines of any other shape."""
    m = _LINE_RE.match(text)
    if m is None:
        raise ValueError(f"not a trace line: {text!r}")
    parent = m.group("parent")
    return ParsedLine(
        m.group("rule"),
        parse_formula(m.group("old")),
        parse_formula(m.group("new")),
        None if parent is None else parse_formula(parent),
    )
