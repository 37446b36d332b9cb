"""Reference implementations used as test oracles.

Nothing here imports the package's parser, evaluator or rewriting code.
Formulas are handled as nested tuples read back from their canonical
(fully parenthesized) strings:

    ("atom", name) | ("T",) | ("F",) | ("~", x) | (op, left, right)
"""

from __future__ import annotations

import itertools
import random
import re
from collections import deque

BINARY_OPS = ("&", "|", "->", "<->")
_TOKEN = re.compile(r"\s*(<->|->|[()~&|]|[A-Za-z_][A-Za-z0-9_]*)")


def tokens(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad character at {pos} in {text!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def read_canonical(text):
    """Parse the canonical form, where every binary node is wrapped in parentheses."""
    toks = tokens(text)
    i = 0

    def primary():
        nonlocal i
        t = toks[i]
        i += 1
        if t == "~":
            return ("~", primary())
        if t == "(":
            left = primary()
            op = toks[i]
            assert op in BINARY_OPS, op
            i += 1
            right = primary()
            assert toks[i] == ")"
            i += 1
            return (op, left, right)
        if t in ("T", "F"):
            return (t,)
        return ("atom", t)

    tree = primary()
    assert i == len(toks), f"trailing tokens in {text!r}"
    return tree


def write_canonical(t):
    if t[0] == "atom":
        return t[1]
    if t[0] in ("T", "F"):
        return t[0]
    if t[0] == "~":
        return "~" + write_canonical(t[1])
    return f"({write_canonical(t[1])} {t[0]} {write_canonical(t[2])})"


def tree_atoms(t):
    if t[0] == "atom":
        return {t[1]}
    return set().union(*(tree_atoms(c) for c in t[1:] if isinstance(c, tuple)))


def tree_size(t):
    if t[0] in ("atom", "T", "F"):
        return 1
    return 1 + sum(tree_size(c) for c in t[1:])


def evaluate(t, env):
    tag = t[0]
    if tag == "atom":
        return env[t[1]]
    if tag == "T":
        return True
    if tag == "F":
        return False
    if tag == "~":
        return not evaluate(t[1], env)
    a, b = evaluate(t[1], env), evaluate(t[2], env)
    if tag == "&":
        return a and b
    if tag == "|":
        return a or b
    if tag == "->":
        return (not a) or b
    return a == b


def assignments(names):
    names = sorted(names)
    for bits in itertools.product((False, True), repeat=len(names)):
        yield dict(zip(names, bits))


def entails(p, c):
    """Row-by-row entailment over all assignments of the joint atoms."""
    return all(evaluate(c, env) for env in assignments(tree_atoms(p) | tree_atoms(c)) if evaluate(p, env))


def equivalent(p, c):
    return entails(p, c) and entails(c, p)


# ---------------------------------------------------------------------------
# rewriting by brute force


def match(pattern, t, env):
    if pattern[0] == "atom" and pattern[1].isupper():
        if pattern[1] in env:
            return env if env[pattern[1]] == t else None
        return {**env, pattern[1]: t}
    if pattern[0] != t[0] or len(pattern) != len(t):
        return None
    if pattern[0] in ("atom",):
        return env if pattern == t else None
    for pc, tc in zip(pattern[1:], t[1:]):
        env = match(pc, tc, env)
        if env is None:
            return None
    return env


def subst(pattern, env):
    if pattern[0] == "atom" and pattern[1].isupper():
        return env[pattern[1]]
    if pattern[0] in ("atom", "T", "F"):
        return pattern
    return (pattern[0],) + tuple(subst(c, env) for c in pattern[1:])


def subterms(t, path=()):
    yield path, t
    if t[0] not in ("atom", "T", "F"):
        for i, c in enumerate(t[1:]):
            yield from subterms(c, path + (i,))


def plug(t, path, new):
    if not path:
        return new
    i = path[0] + 1
    return t[:i] + (plug(t[i], path[1:], new),) + t[i + 1:]


def metavars(t):
    return {a for a in tree_atoms(t) if a.isupper()}


def orientations(rules):
    """(source, target, root_only, label) tuples derived from rule records."""
    out = []
    for r in rules:
        lhs, rhs = read_canonical(r["lhs"]), read_canonical(r["rhs"])
        if r["kind"] == "equivalence":
            out.append((lhs, rhs, False, r["label"]))
            if metavars(lhs) <= metavars(rhs):
                out.append((rhs, lhs, False, r["label"]))
        else:
            out.append((lhs, rhs, True, r["label"]))
    return out


def successors(t, orients, node_cap=64):
    for path, sub in subterms(t):
        for src, dst, root_only, label in orients:
            if root_only and path:
                continue
            env = match(src, sub, {})
            if env is None:
                continue
            new = plug(t, path, subst(dst, env))
            if tree_size(new) <= node_cap:
                yield new, label


def closure(start, orients, d_max, node_cap=64):
    """Every formula reachable in 1..d_max steps, by breadth-first search."""
    dist = {start: 0}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        if dist[t] >= d_max:
            continue
        for new, _ in successors(t, orients, node_cap):
            if new not in dist:
                dist[new] = dist[t] + 1
                queue.append(new)
    return {write_canonical(t) for t, d in dist.items() if d > 0}


# ---------------------------------------------------------------------------
# random formulas as text


def random_formula_text(rng: random.Random, max_depth: int, names: str) -> str:
    """Random formula in fully parenthesized syntax, including constants."""
    if max_depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.05:
            return "T"
        if r < 0.1:
            return "F"
        return rng.choice(names)
    if rng.random() < 0.2:
        return "~" + random_formula_text(rng, max_depth - 1, names)
    op = rng.choice(BINARY_OPS)
    return f"({random_formula_text(rng, max_depth - 1, names)} {op} {random_formula_text(rng, max_depth - 1, names)})"
