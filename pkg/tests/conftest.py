"""Shared test helpers: brute-force oracles and random formula generators.

The brute-force definitions here deliberately use nothing but formula
evaluation over complete truth tables, so they can stand as independent
ground truth for the solver-backed operations.
"""

from __future__ import annotations

import itertools
from random import Random

from hypothesis import strategies as st

from sifacheck.formula import (
    Formula,
    and_,
    const,
    evaluate,
    free_vars,
    not_,
    or_,
    substitute,
    var,
    xor,
)

VARS6 = ("a", "b", "c", "d", "e", "f")


def all_assignments(names):
    names = sorted(names)
    for bits in itertools.product((0, 1), repeat=len(names)):
        yield dict(zip(names, bits))


def bf_satisfiable(f: Formula) -> bool:
    return any(evaluate(f, a) for a in all_assignments(free_vars(f)))


def bf_equivalent(f: Formula, g: Formula) -> bool:
    names = free_vars(f) | free_vars(g)
    return all(evaluate(f, a) == evaluate(g, a) for a in all_assignments(names))


def bf_essential_vars(f: Formula) -> set[str]:
    out = set()
    names = free_vars(f)
    for x in names:
        others = names - {x}
        for a in all_assignments(others):
            lo = evaluate(f, {**a, x: 0})
            hi = evaluate(f, {**a, x: 1})
            if lo != hi:
                out.add(x)
                break
    return out


def bf_factor_vars(f: Formula) -> set[str]:
    out = set()
    names = free_vars(f)
    for x in names:
        rest = substitute(f, x, 0)
        if all(
            evaluate(f, a) == (a[x] ^ evaluate(rest, a))
            for a in all_assignments(names)
        ):
            out.add(x)
    return out


def random_formula(rng: Random, names=VARS6, max_depth: int = 4) -> Formula:
    """Deterministic random DAG-free formula over the given variables."""
    if max_depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.12:
            return const(rng.randrange(2))
        return var(rng.choice(names))
    op = rng.randrange(4)
    if op == 0:
        return not_(random_formula(rng, names, max_depth - 1))
    a = random_formula(rng, names, max_depth - 1)
    b = random_formula(rng, names, max_depth - 1)
    return (and_, or_, xor)[op - 1](a, b)


def formulas(names=VARS6, max_leaves: int = 16):
    """Hypothesis strategy for formula DAGs over a fixed variable pool."""
    leaves = st.one_of(
        st.sampled_from([var(n) for n in names]),
        st.sampled_from([const(0), const(1)]),
    )
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            st.builds(not_, kids),
            st.builds(and_, kids, kids),
            st.builds(or_, kids, kids),
            st.builds(xor, kids, kids),
        ),
        max_leaves=max_leaves,
    )
