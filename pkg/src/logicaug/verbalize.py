"""Render formulas and sample pairs as English text.

Template mode is offline and deterministic: every connective has seven
stylistic templates and one template id is used for all connectives of a
formula.  When a template slot receives a compound clause, the clause is
bracketed and introduced with "it is the case that" so nesting stays
readable.  LLM mode instead builds a prompt (see :func:`emit_prompt`) for an
OpenAI-compatible chat endpoint, handled by :mod:`logicaug.llm`.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .formula import (
    And, Atom, Bot, Formula, Iff, Implies, Not, Or, Top, VarTable, atoms, print_formula,
)
from .pairs import SamplePair

PROMPT_VERSION = "1"
N_TEMPLATES = 7

TEMPLATES: dict[type, tuple[str, ...]] = {
    Implies: (
        "If {A}, then {B}.",
        "{A} implies {B}.",
        "Whenever {A}, {B}.",
        "{B}, provided that {A}.",
        "{A} is sufficient for {B}.",
        "{B} is necessary for {A}.",
        "Should {A}, {B}.",
    ),
    And: (
        "{A} and {B}.",
        "Both {A} and {B}.",
        "{A}, and also {B}.",
        "{A}; moreover, {B}.",
        "Not only {A}, but also {B}.",
        "{A} as well as {B}.",
        "{A}, and in addition {B}.",
    ),
    Or: (
        "{A} or {B}.",
        "Either {A} or {B}.",
        "At least one of the following holds: {A}, or {B}.",
        "{A}, or else {B}.",
        "{A}, otherwise {B}.",
        "If not {A}, then {B}.",
        "{A} or {B}, or both.",
    ),
    Not: (
        "it is not the case that {A}",
        "it is false that {A}",
        "not {A}",
        "{A} does not hold",
        "it is untrue that {A}",
        "the claim that {A} is false",
        "{A} is not the case",
    ),
    Iff: (
        "{A} if and only if {B}.",
        "{A} exactly when {B}.",
        "{A} is equivalent to {B}.",
        "If {A}, then {B}, and vice versa.",
        "{A} precisely when {B}.",
        "{A} is necessary and sufficient for {B}.",
        "{A} just in case {B}.",
    ),
}

CONSTANT_PHRASES = {Top: "a tautology holds", Bot: "a contradiction holds"}


class UnboundAtom(KeyError):
    pass


def _phrase(f: Atom, vt: VarTable) -> str:
    phrase = vt.phrase_of_atom(f.name)
    if phrase is None:
        raise UnboundAtom(f"atom {f.name!r} has no phrase in the variable table")
    return phrase


def _as_clause(text: str) -> str:
    text = text.rstrip(".")
    return text[:1].lower() + text[1:]


def _render(f: Formula, vt: VarTable, tid: int) -> str:
    if isinstance(f, Atom):
        return _phrase(f, vt)
    if isinstance(f, (Top, Bot)):
        return CONSTANT_PHRASES[type(f)]
    template = TEMPLATES[type(f)][tid - 1]
    slots = {}
    for name, child in zip("AB", f.children):
        if isinstance(child, (Atom, Top, Bot)):
            slots[name] = _render(child, vt, tid)
        else:
            slots[name] = f"(it is the case that {_as_clause(_render(child, vt, tid))})"
    return template.format(**slots)


def choose_template(seed: int | str) -> int:
    return random.Random(f"template:{seed}").randint(1, N_TEMPLATES)


def verbalize_formula(f: Formula, vt: VarTable, template_id: int | None = None,
                      seed: int | str = 0) -> str:
    """English rendering of ``f``; without ``template_id`` one is drawn from ``seed``."""
    tid = choose_template(seed) if template_id is None else template_id
    if not 1 <= tid <= N_TEMPLATES:
        raise ValueError(f"template id must be in 1..{N_TEMPLATES}, got {tid}")
    return _render(f, vt, tid)


@dataclass(frozen=True)
class VerbalizedPair:
    pair: SamplePair
    text_a: str
    text_b: str
    mode: str
    template_ids: tuple[int, ...] = ()

    def to_record(self) -> dict:
        rec = self.pair.to_record()
        rec.update(text_a=self.text_a, text_b=self.text_b,
                   template_ids=list(self.template_ids), mode=self.mode)
        return {k: rec[k] for k in RECORD_FIELDS}


RECORD_FIELDS = ("id", "seed_id", "relation", "label", "formula_a", "formula_b",
                 "text_a", "text_b", "template_ids", "derivation_text", "mode")


def verbalize_pair(pair: SamplePair, vt: VarTable, seed: int | str = 42) -> VerbalizedPair:
    ta = choose_template(f"{seed}:{pair.id}:a")
    tb = choose_template(f"{seed}:{pair.id}:b")
    return VerbalizedPair(
        pair,
        verbalize_formula(pair.formula_a, vt, ta),
        verbalize_formula(pair.formula_b, vt, tb),
        "template",
        (ta, tb),
    )


# ---------------------------------------------------------------------------
# prompts

SYSTEM_PROMPT = (
    "You turn pairs of propositional formulas into fluent English sentences for a "
    "logical-reasoning dataset. Each variable stands for the phrase given in the "
    "glossary. Express each formula as one natural sentence that means exactly the "
    "formula, no more and no less. Do not add facts, causes or qualifiers that the "
    "formula does not state, and do not mention variables or symbols. Keep the "
    "stated logical relation between the two sentences intact. Reply with a JSON "
    'object {"text_a": "...", "text_b": "..."} and nothing else.'
)

RELATION_TEXT = {
    ("equivalence", 1): "Sentence A and sentence B are logically equivalent.",
    ("implication", 1): "Sentence B follows logically from sentence A.",
    ("implication", 0): "Sentence B does not follow logically from sentence A.",
    ("chain", 1): "Sentence B follows from sentence A through several reasoning steps.",
    ("corrupted", 0): "Sentence B does not follow from sentence A; the reasoning is a fallacy.",
}

OUTPUT_SCHEMA = {
    "type": "object",
    "properties": {"text_a": {"type": "string"}, "text_b": {"type": "string"}},
    "required": ["text_a", "text_b"],
}


@dataclass(frozen=True)
class PromptSpec:
    system: str
    payload: dict = field(hash=False)

    @property
    def user(self) -> str:
        return json.dumps(self.payload, ensure_ascii=False, sort_keys=True, indent=1)

    def messages(self) -> list[dict]:
        return [{"role": "system", "content": self.system},
                {"role": "user", "content": self.user}]

    def serialize(self) -> str:
        return json.dumps({"system": self.system, "payload": self.payload},
                          ensure_ascii=False, sort_keys=True)


def emit_prompt(pair: SamplePair, vt: VarTable) -> PromptSpec:
    names = sorted(atoms(pair.formula_a) | atoms(pair.formula_b))
    glossary = {}
    for name in names:
        phrase = vt.phrase_of_atom(name)
        if phrase is None:
            raise UnboundAtom(f"atom {name!r} has no phrase in the variable table")
        glossary[name] = phrase
    payload = {
        "formula_a": print_formula(pair.formula_a, "pretty"),
        "formula_b": print_formula(pair.formula_b, "pretty"),
        "glossary": glossary,
        "relation": pair.relation,
        "label": pair.label,
        "relation_description": RELATION_TEXT.get(
            (pair.relation, pair.label),
            "Sentence B follows from sentence A." if pair.label else "Sentence B does not follow from sentence A.",
        ),
        "notation": "~ not, & and, | or, -> implies, <-> if and only if, T true, F false",
        "output_schema": OUTPUT_SCHEMA,
        "prompt_version": PROMPT_VERSION,
    }
    return PromptSpec(SYSTEM_PROMPT, payload)
