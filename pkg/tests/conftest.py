import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from logicaug.formula import BOT, TOP, And, Atom, Iff, Implies, Not, Or

settings.register_profile(
    "default", max_examples=200, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def formulas(names="abcde", max_leaves=24, constants=True):
    leaves = st.sampled_from([Atom(n) for n in names])
    if constants:
        leaves = leaves | st.sampled_from([TOP, BOT])

    def extend(children):
        return (
            children.map(Not)
            | st.builds(And, children, children)
            | st.builds(Or, children, children)
            | st.builds(Implies, children, children)
            | st.builds(Iff, children, children)
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)
