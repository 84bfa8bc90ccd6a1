"""Exhaustive ground truth: weights, balancedness, statistical dependence.

Everything here enumerates complete truth tables, evaluated bit-parallel
over big-integer columns (assignment j of the universe lives at bit j).
The universe is capped at 24 variables; beyond that the oracle refuses
rather than sample, because its whole point is exactness.

This module intentionally shares no decision code with the solver-backed
analyses: agreement between the two paths is evidence, not tautology.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .faults import DetectionInstance, unmasked_secret_formula
from .formula import AND, CONST, NOT, OR, VAR, XOR, Formula, free_vars

__all__ = [
    "MAX_UNIVERSE",
    "UniverseTooLarge",
    "WeightReport",
    "weight",
    "weight_report",
    "truth_column",
    "is_balanced",
    "dependence_products",
    "statistically_dependent",
    "confirm_leak",
]

MAX_UNIVERSE = 24


class UniverseTooLarge(ValueError):
    """Enumeration refused: the variable universe exceeds the cap."""


@dataclass(frozen=True)
class WeightReport:
    universe: tuple[str, ...]
    weight: int


def _universe(names: Iterable[str], *formulas: Formula) -> tuple[str, ...]:
    uni: list[str] = []
    seen = set()
    for name in names:
        if name not in seen:
            seen.add(name)
            uni.append(name)
    if len(uni) > MAX_UNIVERSE:
        raise UniverseTooLarge(
            f"universe of {len(uni)} variables exceeds the cap of {MAX_UNIVERSE}"
        )
    for f in formulas:
        missing = free_vars(f) - seen
        if missing:
            raise ValueError(
                f"formula variable '{sorted(missing)[0]}' is outside the universe"
            )
    return tuple(uni)


def truth_column(f: Formula, universe: Sequence[str]) -> int:
    """Truth table of `f` as an integer: bit j is f under assignment j.

    Assignment j sets variable i of the universe to bit i of j.
    """
    n = len(universe)
    total = 1 << n
    full = (1 << total) - 1
    columns = {}
    for i, name in enumerate(universe):
        # blocks of 2^i zeros then 2^i ones, repeated across the table
        block = 1 << i
        columns[name] = ((full // ((1 << (2 * block)) - 1)) * ((1 << block) - 1)) << block

    memo: dict[int, int] = {}
    stack = [f]
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        if node.kind == CONST:
            memo[id(node)] = full if node.payload else 0
            stack.pop()
        elif node.kind == VAR:
            memo[id(node)] = columns[node.payload]
            stack.pop()
        else:
            children = [c for c in (node.left, node.right) if c is not None]
            pending = [c for c in children if id(c) not in memo]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            vals = [memo[id(c)] for c in children]
            if node.kind == NOT:
                memo[id(node)] = full ^ vals[0]
            elif node.kind == AND:
                memo[id(node)] = vals[0] & vals[1]
            elif node.kind == OR:
                memo[id(node)] = vals[0] | vals[1]
            else:
                memo[id(node)] = vals[0] ^ vals[1]
    return memo[id(f)]


def weight(f: Formula, universe: Iterable[str]) -> int:
    """Number of assignments of the universe satisfying `f`."""
    uni = _universe(universe, f)
    return truth_column(f, uni).bit_count()


def weight_report(f: Formula, universe: Iterable[str]) -> WeightReport:
    uni = _universe(universe, f)
    return WeightReport(uni, truth_column(f, uni).bit_count())


def is_balanced(f: Formula, universe: Iterable[str]) -> bool:
    """True iff `f` is 1 on exactly half of the universe's assignments."""
    uni = _universe(universe, f)
    if not uni:
        return False  # a 1-row table has no half
    return truth_column(f, uni).bit_count() == 1 << (len(uni) - 1)


def dependence_products(
    f: Formula, g: Formula, universe: Iterable[str]
) -> tuple[int, int]:
    """The two cross products whose inequality defines statistical dependence.

    Returns (weight(f&g) * weight(!f), weight(!f&g) * weight(f)).
    """
    uni = _universe(universe, f, g)
    total = 1 << len(uni)
    col_f = truth_column(f, uni)
    col_g = truth_column(g, uni)
    w_f = col_f.bit_count()
    w_fg = (col_f & col_g).bit_count()
    w_nfg = col_g.bit_count() - w_fg
    return (w_fg * (total - w_f), w_nfg * w_f)


def statistically_dependent(f: Formula, g: Formula, universe: Iterable[str]) -> bool:
    """Whether observing `f` shifts the conditional distribution of `g`."""
    left, right = dependence_products(f, g, universe)
    return left != right


def confirm_leak(d: DetectionInstance) -> list[tuple[str, bool]]:
    """Exact dependence of the detection value on each native secret.

    The universe is the full circuit input set (masks plus all shares).
    Refuses outright when that universe exceeds the enumeration cap.
    """
    names = sorted(d.masks | {share for s in d.secrets for share in s.shares})
    uni = _universe(names, d.delta)
    return [
        (s.name, statistically_dependent(d.delta, unmasked_secret_formula(s), uni))
        for s in d.secrets
    ]
