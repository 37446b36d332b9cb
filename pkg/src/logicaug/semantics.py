"""Truth-table semantics: the trusted oracle for entailment and equivalence.

Entailment and equivalence enumerate all ``2**n`` assignments.  The rows are
packed into the bits of one Python integer per subformula, so a whole table
is computed in a single pass over the tree; no row is ever skipped.
"""

from __future__ import annotations

from typing import Mapping

from .formula import Atom, Binary, Bot, Formula, Iff, Implies, Not, Or, And, Top, atoms

MAX_VARIABLES = 20

__all__ = [
    "MAX_VARIABLES", "MissingVariable", "TooManyVariables", "evaluate",
    "truth_table", "entails", "equivalent", "is_valid",
]


class MissingVariable(KeyError):
    pass


class TooManyVariables(ValueError):
    pass


def evaluate(f: Formula, assignment: Mapping[str, bool]) -> bool:
    if isinstance(f, Atom):
        try:
            return bool(assignment[f.name])
        except KeyError:
            raise MissingVariable(f.name) from None
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Not):
        return not evaluate(f.child, assignment)
    if isinstance(f, And):
        return evaluate(f.left, assignment) and evaluate(f.right, assignment)
    if isinstance(f, Or):
        return evaluate(f.left, assignment) or evaluate(f.right, assignment)
    if isinstance(f, Implies):
        return (not evaluate(f.left, assignment)) or evaluate(f.right, assignment)
    if isinstance(f, Iff):
        return evaluate(f.left, assignment) == evaluate(f.right, assignment)
    raise TypeError(f"not a formula: {f!r}")


def _columns(names: list[str]) -> tuple[dict[str, int], int]:
    """Bit column of every variable; row ``r`` assigns bit ``i`` of ``r`` to ``names[i]``."""
    n = len(names)
    if n > MAX_VARIABLES:
        raise TooManyVariables(f"{n} variables exceeds the cap of {MAX_VARIABLES}")
    rows = 1 << n
    full = (1 << rows) - 1
    cols = {}
    for i, name in enumerate(names):
        # rows whose index has bit i set: a unit of 2**i zeros then 2**i ones,
        # repeated across all rows (multiplying by 1 + 2**p + 2**2p + ...)
        half = 1 << i
        period = half << 1
        unit = ((1 << half) - 1) << half
        cols[name] = unit * (full // ((1 << period) - 1))
    return cols, full


def _table(f: Formula, cols: dict[str, int], full: int, memo: dict[str, int]) -> int:
    key = f.key
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(f, Atom):
        value = cols[f.name]
    elif isinstance(f, Top):
        value = full
    elif isinstance(f, Bot):
        value = 0
    elif isinstance(f, Not):
        value = full & ~_table(f.child, cols, full, memo)
    elif isinstance(f, Binary):
        left = _table(f.left, cols, full, memo)
        right = _table(f.right, cols, full, memo)
        if isinstance(f, And):
            value = left & right
        elif isinstance(f, Or):
            value = left | right
        elif isinstance(f, Implies):
            value = (full & ~left) | right
        else:
            value = full & ~(left ^ right)
    else:
        raise TypeError(f"not a formula: {f!r}")
    memo[key] = value
    return value


def truth_table(f: Formula, names: list[str] | None = None) -> int:
    """Bitmask whose bit ``r`` is the value of ``f`` on row ``r``."""
    names = sorted(atoms(f)) if names is None else names
    cols, full = _columns(names)
    return _table(f, cols, full, {})


def _joint(*fs: Formula) -> tuple[list[int], int]:
    names = sorted(set().union(*(atoms(f) for f in fs)))
    cols, full = _columns(names)
    memo: dict[str, int] = {}
    return [_table(f, cols, full, memo) for f in fs], full


def entails(premise: Formula, conclusion: Formula) -> bool:
    """True iff every assignment satisfying ``premise`` satisfies ``conclusion``."""
    (p, c), _ = _joint(premise, conclusion)
    return p & ~c == 0


def equivalent(f: Formula, g: Formula) -> bool:
    (a, b), _ = _joint(f, g)
    return a == b


def is_valid(f: Formula) -> bool:
    (a,), full = _joint(f)
    return a == full
