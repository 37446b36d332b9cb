"""Formalize simple English sentences into propositional formulas.

Logical structure is found by an ordered trigger lexicon ("if ... then ...",
"... unless ...", "either ... or ...", ...); the first matching trigger
splits the sentence into clauses, which are formalized recursively.  A clause
with no trigger becomes an atom: its text is purified (function words
stripped, words lemmatized) and mapped through a shared VarTable, so the same
phrase always yields the same variable.

Only simple sentences are supported.  Multi-clause constructions beyond the
lexicon, nested conditionals and coreference are out of reach by design.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .formula import And, Formula, Iff, Implies, Not, Or, VarTable


class PurificationError(ValueError):
    """The clause has no content words left after purification."""


_CONTRACTIONS = {
    "can't": "can not", "cannot": "can not", "won't": "will not", "n't": " not",
    "it's": "it is", "that's": "that is", "there's": "there is",
}

_STOPWORDS = frozenset("""
    the a an this that these those some any every each
    is are was were be been being am
    do does did will would shall should can could may might must
    has have had it there then so thus hence also just
""".split())

# verb-like words dropped inside a phrase once it is lemmatized
_LINKING = frozenset("be get become do have will would shall should can could may might must".split())

_IRREGULAR = {
    "is": "be", "are": "be", "was": "be", "were": "be", "been": "be", "am": "be",
    "has": "have", "had": "have", "does": "do", "did": "do", "done": "do",
    "goes": "go", "went": "go", "gone": "go", "got": "get", "gotten": "get",
    "ran": "run", "came": "come", "became": "become", "made": "make",
    "took": "take", "taken": "take", "gave": "give", "given": "give",
    "saw": "see", "seen": "see", "left": "leave", "fell": "fall", "fallen": "fall",
    "rose": "rise", "risen": "rise", "grew": "grow", "grown": "grow",
    "froze": "freeze", "frozen": "freeze", "broke": "break", "broken": "break",
    "wrote": "write", "written": "write", "sang": "sing", "sung": "sing",
    "flew": "fly", "flown": "fly", "shone": "shine", "wet": "wet", "lit": "light",
    "children": "child", "people": "person", "men": "man", "women": "woman",
    "mice": "mouse", "feet": "foot", "teeth": "tooth", "geese": "goose",
}

_KEEP = frozenset("""
    bus gas lens news series species always perhaps this his its us thus was has
    morning evening thing nothing something everything anything king ring spring string
    wing building ceiling during bring sing sting swing
    bed red shed need seed feed speed weed bleed breed hundred sacred wicked naked
""".split())

_VOWELS = set("aeiou")


def lemmatize(word: str) -> str:
    """Naive suffix-stripping lemmatizer (plural/3rd person -s, -es, -ed, -ing)."""
    if word in _IRREGULAR:
        return _IRREGULAR[word]
    if word in _KEEP or len(word) <= 3 or not word.isalpha():
        return word
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith(("sses", "shes", "ches", "xes", "zes", "oes")):
        return word[:-2]
    if word.endswith(("ss", "us", "is")):
        return word
    if word.endswith("s"):
        return word[:-1]
    if word.endswith("ing") and len(word) > 5:
        return _undouble(word[:-3])
    if word.endswith("ied") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("ed") and len(word) > 4:
        return _undouble(word[:-2])
    return word


def _undouble(stem: str) -> str:
    if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS and stem[-1] not in "lsz":
        return stem[:-1]
    return stem


def normalize_text(text: str) -> str:
    """Lowercase, expand contractions, collapse whitespace, drop final punctuation."""
    text = text.lower().replace("’", "'")
    for short, long in _CONTRACTIONS.items():
        text = text.replace(short, long)
    text = re.sub(r"\s+", " ", text).strip()
    return text.rstrip(".!?;: ").strip()


def _words(text: str) -> list[str]:
    return re.findall(r"[a-z0-9]+", normalize_text(text))


def purify_phrase(text: str) -> str:
    """Purified phrase: lowercased, outer function words stripped, words lemmatized.

    >>> purify_phrase("the ground gets wet")
    'ground get wet'
    """
    words = _words(text)
    while words and words[0] in _STOPWORDS:
        words.pop(0)
    while words and words[-1] in _STOPWORDS:
        words.pop()
    if not words:
        raise PurificationError(f"nothing left of {text!r} after purification")
    return " ".join(lemmatize(w) for w in words)


def phrase_key(text: str) -> str:
    """Key under which a clause is stored: the purified phrase minus linking verbs.

    >>> phrase_key("the ground gets wet")
    'ground wet'
    """
    purified = purify_phrase(text)
    kept = [w for w in purified.split() if w not in _LINKING]
    return " ".join(kept) if kept else purified


def map_phrase(vt: VarTable, key: str) -> int:
    return vt.intern(key)


# ---------------------------------------------------------------------------
# trigger lexicon

Builder = Callable[[Formula, Formula], Formula]


@dataclass(frozen=True)
class Trigger:
    name: str
    pattern: re.Pattern
    build: Callable[..., Formula]
    slots: tuple[str, ...]


def _t(name: str, regex: str, build, slots=("A", "B")) -> Trigger:
    return Trigger(name, re.compile(regex), build, slots)


DEFAULT_TRIGGERS: tuple[Trigger, ...] = (
    _t("iff", r"^(?P<A>.+?),? if and only if (?P<B>.+)$", lambda a, b: Iff(a, b)),
    _t("not-the-case", r"^it is not the case that (?P<A>.+)$", lambda a: Not(a), ("A",)),
    _t("if-then", r"^if (?P<A>.+?),? then (?P<B>.+)$", lambda a, b: Implies(a, b)),
    _t("if-comma", r"^if (?P<A>.+?), (?P<B>.+)$", lambda a, b: Implies(a, b)),
    _t("either-or", r"^either (?P<A>.+?),? or (?P<B>.+)$", lambda a, b: Or(a, b)),
    _t("unless", r"^(?P<A>.+?),? unless (?P<B>.+)$", lambda a, b: Implies(Not(b), a)),
    _t("post-if", r"^(?P<B>.+?),? if (?P<A>.+)$", lambda a, b: Implies(a, b)),
    _t("or", r"^(?P<A>.+?),? or (?P<B>.+)$", lambda a, b: Or(a, b)),
    _t("and", r"^(?P<A>.+?),? and (?P<B>.+)$", lambda a, b: And(a, b)),
    _t("not", r"^(?:(?P<pre>.*?) )?not (?P<post>.+)$", None, ()),
)

_NEG_AUX = {"do", "does", "did"}


def _strip_negation(m: re.Match) -> str:
    pre = (m.group("pre") or "").split()
    if pre and pre[-1] in _NEG_AUX:
        pre.pop()
    return " ".join(pre + m.group("post").split())


@dataclass
class ParseOutcome:
    formula: Formula
    var_table: VarTable
    spans: dict[int, str] = field(default_factory=dict)
    trigger: str | None = None


def formalize(sentence: str, vt: VarTable, triggers: tuple[Trigger, ...] = DEFAULT_TRIGGERS) -> ParseOutcome:
    """Formalize one simple sentence, extending ``vt`` with any new phrases."""
    spans: dict[int, str] = {}
    text = normalize_text(sentence)
    if not text:
        raise PurificationError(f"empty sentence {sentence!r}")
    outer: list[str | None] = [None]

    def clause(text: str) -> Formula:
        text = text.strip(" ,")
        for trig in triggers:
            m = trig.pattern.match(text)
            if m is None:
                continue
            if outer[0] is None:
                outer[0] = trig.name
            if trig.name == "not":
                return Not(clause(_strip_negation(m)))
            return trig.build(*(clause(m.group(s)) for s in trig.slots))
        var_id = map_phrase(vt, phrase_key(text))
        spans.setdefault(var_id, text)
        return vt.atom(var_id)

    formula = clause(text)
    return ParseOutcome(formula, vt, spans, outer[0])


def split_sentences(statement: str) -> list[str]:
    return [s for s in (p.strip() for p in re.split(r"(?<=[.!?;])\s+|;", statement)) if s.strip(" .!?;")]


def formalize_statement(statement: str, vt: VarTable) -> Formula:
    """Formalize a statement of one or more sentences; premises are conjoined left to right."""
    parts = [formalize(s, vt).formula for s in split_sentences(statement)]
    if not parts:
        raise PurificationError(f"empty statement {statement!r}")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def read_seed_file(path: str | Path) -> list[str]:
    """Statements from a seed file: one per line, ``#`` starts a comment."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out
