"""Immutable propositional formulas: AST, parser, printers and positional access.

Concrete syntax (ASCII)::

    atom   [a-zA-Z_][a-zA-Z0-9_]*      (T and F are reserved for top/bottom)
    ~  not      &  and      |  or      ->  implies      <->  iff

Precedence, tightest first: ``~``, ``&``, ``|``, ``->``, ``<->``.  ``&`` and
``|`` associate to the left, ``->`` and ``<->`` to the right.

Every node carries its canonical (fully parenthesized) serialization, computed
once at construction.  Equality and hashing go through that key, so formulas
can be used directly in sets and dicts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence

Position = tuple[int, ...]

__all__ = [
    "Formula", "Atom", "Top", "Bot", "Not", "Binary", "And", "Or", "Implies", "Iff",
    "Position", "FormulaSyntaxError", "InvalidPosition", "parse_formula",
    "print_formula", "subformula_at", "replace_at", "preorder_positions",
    "positions_with_subformulas", "atoms", "size", "depth", "VarTable",
]


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()
    precedence = 99

    @property
    def key(self) -> str:
        return self._key  # type: ignore[attr-defined]

    @property
    def children(self) -> tuple["Formula", ...]:
        return ()

    def rebuild(self, children: Sequence["Formula"]) -> "Formula":
        return self

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Formula):
            return NotImplemented
        return self._key == other._key  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return hash(self._key)  # type: ignore[attr-defined]

    def __str__(self) -> str:
        return print_formula(self, "pretty")


@dataclass(frozen=True, eq=False, slots=True)
class Atom(Formula):
    name: str
    _key: str = field(init=False, repr=False)
    _size: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_key", self.name)
        object.__setattr__(self, "_size", 1)


@dataclass(frozen=True, eq=False, slots=True)
class Top(Formula):
    _key: str = field(init=False, repr=False, default="T")
    _size: int = field(init=False, repr=False, default=1)


@dataclass(frozen=True, eq=False, slots=True)
class Bot(Formula):
    _key: str = field(init=False, repr=False, default="F")
    _size: int = field(init=False, repr=False, default=1)


@dataclass(frozen=True, eq=False, slots=True)
class Not(Formula):
    child: Formula
    _key: str = field(init=False, repr=False)
    _size: int = field(init=False, repr=False)

    precedence = 5

    def __post_init__(self):
        object.__setattr__(self, "_key", "~" + self.child._key)
        object.__setattr__(self, "_size", self.child._size + 1)

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.child,)

    def rebuild(self, children: Sequence[Formula]) -> Formula:
        (child,) = children
        return self if child is self.child else Not(child)


@dataclass(frozen=True, eq=False, slots=True)
class Binary(Formula):
    left: Formula
    right: Formula
    _key: str = field(init=False, repr=False)
    _size: int = field(init=False, repr=False)

    symbol = "?"
    unicode = "?"
    right_assoc = False

    def __post_init__(self):
        object.__setattr__(
            self, "_key", f"({self.left._key} {self.symbol} {self.right._key})"
        )
        object.__setattr__(self, "_size", self.left._size + self.right._size + 1)

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)

    def rebuild(self, children: Sequence[Formula]) -> Formula:
        left, right = children
        if left is self.left and right is self.right:
            return self
        return type(self)(left, right)


@dataclass(frozen=True, eq=False, slots=True)
class And(Binary):
    symbol = "&"
    unicode = "∧"
    precedence = 4


@dataclass(frozen=True, eq=False, slots=True)
class Or(Binary):
    symbol = "|"
    unicode = "∨"
    precedence = 3


@dataclass(frozen=True, eq=False, slots=True)
class Implies(Binary):
    symbol = "->"
    unicode = "→"
    precedence = 2
    right_assoc = True


@dataclass(frozen=True, eq=False, slots=True)
class Iff(Binary):
    symbol = "<->"
    unicode = "↔"
    precedence = 1
    right_assoc = True


TOP = Top()
BOT = Bot()
_BINARY_BY_SYMBOL: dict[str, type[Binary]] = {
    cls.symbol: cls for cls in (And, Or, Implies, Iff)
}


# ---------------------------------------------------------------------------
# parsing


class FormulaSyntaxError(ValueError):
    """Raised on malformed formula text; carries the byte offset and expectations."""

    def __init__(self, text: str, offset: int, expected: Sequence[str]):
        self.text = text
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        found = text[offset:offset + 10] or "end of input"
        super().__init__(
            f"syntax error at offset {offset} (near {found!r}): "
            f"expected one of {', '.join(self.expected)}"
        )


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op><->|->|[~&|()]))"
)
_IDENT = "identifier"
_OPERAND_START = (_IDENT, "T", "F", "~", "(")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while True:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            while pos < n and text[pos].isspace():
                pos += 1
            if pos >= n:
                break
            raise FormulaSyntaxError(
                text, len(text[:pos].encode()), _OPERAND_START + ("&", "|", "->", "<->", ")")
            )
        if m.group("ident") is not None:
            word = m.group("ident")
            kind = word if word in ("T", "F") else _IDENT
            tokens.append((kind, word, len(text[:m.start("ident")].encode())))
        else:
            op = m.group("op")
            tokens.append((op, op, len(text[:m.start("op")].encode())))
        pos = m.end()
    tokens.append(("EOF", "", len(text.encode())))
    return tokens


class _Parser:
    # (precedence, symbol) of binary operators, loosest first
    LEVELS = (("<->", True), ("->", True), ("|", False), ("&", False))

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def fail(self, expected: Sequence[str]):
        raise FormulaSyntaxError(self.text, self.tokens[self.i][2], expected)

    def parse(self) -> Formula:
        f = self.binary(0)
        if self.peek() != "EOF":
            self.fail(("end of input", "&", "|", "->", "<->"))
        return f

    def binary(self, level: int) -> Formula:
        if level == len(self.LEVELS):
            return self.unary()
        symbol, right_assoc = self.LEVELS[level]
        cls = _BINARY_BY_SYMBOL[symbol]
        left = self.binary(level + 1)
        if right_assoc:
            if self.peek() == symbol:
                self.i += 1
                return cls(left, self.binary(level))
            return left
        while self.peek() == symbol:
            self.i += 1
            left = cls(left, self.binary(level + 1))
        return left

    def unary(self) -> Formula:
        kind, value, _ = self.tokens[self.i]
        if kind == "~":
            self.i += 1
            return Not(self.unary())
        if kind == "(":
            self.i += 1
            inner = self.binary(0)
            if self.peek() != ")":
                self.fail((")", "&", "|", "->", "<->"))
            self.i += 1
            return inner
        if kind == _IDENT:
            self.i += 1
            return Atom(value)
        if kind == "T":
            self.i += 1
            return TOP
        if kind == "F":
            self.i += 1
            return BOT
        self.fail(_OPERAND_START)


def parse_formula(text: str) -> Formula:
    """Parse ASCII formula syntax into a tree.

    >>> parse_formula("a -> b -> c") == parse_formula("a -> (b -> c)")
    True
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing


def _pretty(f: Formula, unicode: bool) -> str:
    if isinstance(f, Binary):
        prec = f.precedence
        left = _pretty(f.left, unicode)
        right = _pretty(f.right, unicode)
        lp, rp = f.left.precedence, f.right.precedence
        if lp < prec or (lp == prec and f.right_assoc):
            left = f"({left})"
        if rp < prec or (rp == prec and not f.right_assoc):
            right = f"({right})"
        return f"{left} {f.unicode if unicode else f.symbol} {right}"
    if isinstance(f, Not):
        inner = _pretty(f.child, unicode)
        if isinstance(f.child, Binary):
            inner = f"({inner})"
        return ("¬" if unicode else "~") + inner
    if unicode and isinstance(f, (Top, Bot)):
        return "⊤" if isinstance(f, Top) else "⊥"
    return f.key


def print_formula(f: Formula, style: str = "canonical") -> str:
    """Serialize ``f``.

    ``canonical`` is fully parenthesized and serves as the identity key;
    ``pretty`` drops every parenthesis the precedence rules make redundant;
    ``unicode`` is ``pretty`` with logical symbols, for display only.
    """
    if style == "canonical":
        return f.key
    if style == "pretty":
        return _pretty(f, False)
    if style == "unicode":
        return _pretty(f, True)
    raise ValueError(f"unknown print style {style!r}")


# ---------------------------------------------------------------------------
# positions


class InvalidPosition(LookupError):
    pass


def subformula_at(f: Formula, p: Sequence[int]) -> Formula:
    node = f
    for step, idx in enumerate(p):
        kids = node.children
        if not 0 <= idx < len(kids):
            raise InvalidPosition(f"position {tuple(p)} invalid at step {step} of {f.key}")
        node = kids[idx]
    return node


def replace_at(f: Formula, p: Sequence[int], g: Formula) -> Formula:
    """Return a copy of ``f`` with the subtree at ``p`` swapped for ``g``.

    Only the spine from the root to ``p`` is rebuilt; everything else is shared.
    """
    if not p:
        return g
    kids = f.children
    idx = p[0]
    if not 0 <= idx < len(kids):
        raise InvalidPosition(f"position {tuple(p)} invalid for {f.key}")
    new = list(kids)
    new[idx] = replace_at(kids[idx], p[1:], g)
    return f.rebuild(new)


def positions_with_subformulas(f: Formula) -> Iterator[tuple[Position, Formula]]:
    """Yield ``(position, subtree)`` in root-left-right order."""
    stack: list[tuple[Position, Formula]] = [((), f)]
    while stack:
        pos, node = stack.pop()
        yield pos, node
        kids = node.children
        for i in range(len(kids) - 1, -1, -1):
            stack.append((pos + (i,), kids[i]))


def preorder_positions(f: Formula) -> list[Position]:
    return [pos for pos, _ in positions_with_subformulas(f)]


def atoms(f: Formula) -> set[str]:
    return {node.name for _, node in positions_with_subformulas(f) if isinstance(node, Atom)}


def size(f: Formula) -> int:
    return f._size  # type: ignore[attr-defined]


def depth(f: Formula) -> int:
    kids = f.children
    return 1 + max(map(depth, kids)) if kids else 1


# ---------------------------------------------------------------------------
# variable table

_GREEK = "αβγδεζηθικλμνξοπρστυφχψω"
_LATIN = "abcdefghijklmnopqrstuvwx"


class VarTable:
    """Bijective phrase <-> variable-id table, allocating ids in first-seen order.

    Variable ``i`` is written ``a``, ``b``, ... in formulas and displayed as
    ``α``, ``β``, ...; after the 24th both forms become ``p1``, ``p2``, ...
    """

    def __init__(self):
        self._ids: dict[str, int] = {}
        self._phrases: list[str] = []

    def __len__(self) -> int:
        return len(self._phrases)

    def __contains__(self, phrase: str) -> bool:
        return phrase in self._ids

    def lookup(self, phrase: str) -> int | None:
        return self._ids.get(phrase)

    def intern(self, phrase: str) -> int:
        var_id = self._ids.get(phrase)
        if var_id is None:
            var_id = len(self._phrases)
            self._ids[phrase] = var_id
            self._phrases.append(phrase)
        return var_id

    def phrase(self, var_id: int) -> str:
        return self._phrases[var_id]

    @staticmethod
    def symbol(var_id: int) -> str:
        return _LATIN[var_id] if var_id < len(_LATIN) else f"p{var_id - len(_LATIN) + 1}"

    @staticmethod
    def display_name(var_id: int) -> str:
        return _GREEK[var_id] if var_id < len(_GREEK) else f"p{var_id - len(_GREEK) + 1}"

    def id_of_symbol(self, symbol: str) -> int | None:
        for var_id in range(len(self._phrases)):
            if self.symbol(var_id) == symbol:
                return var_id
        return None

    def phrase_of_atom(self, name: str) -> str | None:
        var_id = self.id_of_symbol(name)
        return None if var_id is None else self._phrases[var_id]

    def atom(self, var_id: int) -> Atom:
        return Atom(self.symbol(var_id))

    def items(self) -> list[tuple[int, str]]:
        return list(enumerate(self._phrases))

    def to_dict(self) -> dict[str, str]:
        return {self.symbol(i): p for i, p in enumerate(self._phrases)}
