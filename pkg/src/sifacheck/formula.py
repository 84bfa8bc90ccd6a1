"""Immutable Boolean formula DAGs over named variables.

Nodes are hash-consed: building the same structure twice yields the same
object, so structural equality is plain ``==`` (identity) and formulas can
be used as dictionary keys at O(1). Shared subterms stay shared through
substitution and evaluation.

Constructors perform no simplification; only :func:`substitute` folds nodes
whose children turned into constants. This keeps formula structure aligned
with circuit structure, which matters because fault locations are gates.
"""

from __future__ import annotations

import weakref
from typing import Iterable, Mapping

__all__ = [
    "Formula",
    "EvaluationError",
    "const",
    "var",
    "not_",
    "and_",
    "or_",
    "xor",
    "free_vars",
    "substitute",
    "substitute_all",
    "evaluate",
    "xor_all",
    "or_all",
]

CONST = "const"
VAR = "var"
NOT = "not"
AND = "and"
OR = "or"
XOR = "xor"

RESERVED_NAMES = frozenset({"const0", "const1"})


class EvaluationError(ValueError):
    """Raised when an assignment does not cover the formula's variables."""


class Formula:
    """One node of an immutable Boolean expression DAG.

    Do not instantiate directly; use :func:`const`, :func:`var`,
    :func:`not_`, :func:`and_`, :func:`or_` and :func:`xor`, or the
    equivalent operators (``~``, ``&``, ``|``, ``^``).
    """

    __slots__ = ("kind", "left", "right", "payload", "_free", "__weakref__")

    kind: str
    left: "Formula | None"
    right: "Formula | None"
    payload: "str | int | None"  # variable name for VAR, bit for CONST

    _interned: "weakref.WeakValueDictionary[tuple, Formula]" = weakref.WeakValueDictionary()

    def __new__(cls, kind, left=None, right=None, payload=None):
        key = (kind, payload, id(left), id(right))
        cached = cls._interned.get(key)
        # id() values can be recycled once a node dies; holding the children
        # inside the cached node itself keeps live keys unambiguous, but a
        # stale entry must be verified before reuse.
        if cached is not None and cached.left is left and cached.right is right:
            return cached
        node = object.__new__(cls)
        node.kind = kind
        node.left = left
        node.right = right
        node.payload = payload
        node._free = None
        cls._interned[key] = node
        return node

    def __reduce__(self):
        # Rebuild through the factories so unpickled nodes are re-interned.
        if self.kind == CONST:
            return (const, (self.payload,))
        if self.kind == VAR:
            return (var, (self.payload,))
        if self.kind == NOT:
            return (not_, (self.left,))
        op = {AND: and_, OR: or_, XOR: xor}[self.kind]
        return (op, (self.left, self.right))

    def __invert__(self):
        return not_(self)

    def __and__(self, other):
        return and_(self, other)

    def __or__(self, other):
        return or_(self, other)

    def __xor__(self, other):
        return xor(self, other)

    def __str__(self):
        return _format(self)

    def __repr__(self):
        return f"Formula({_format(self)})"


def const(bit: int) -> Formula:
    """Constant 0 or 1."""
    if bit not in (0, 1):
        raise ValueError(f"constant bit must be 0 or 1, got {bit!r}")
    return Formula(CONST, payload=bit)


def var(name: str) -> Formula:
    """Variable leaf; names must be nonempty and not a reserved constant."""
    if not isinstance(name, str) or not name:
        raise ValueError("variable name must be a nonempty string")
    if name in RESERVED_NAMES:
        raise ValueError(f"'{name}' is reserved for constants and cannot be a variable")
    return Formula(VAR, payload=name)


def not_(f: Formula) -> Formula:
    return Formula(NOT, left=f)


def and_(a: Formula, b: Formula) -> Formula:
    return Formula(AND, left=a, right=b)


def or_(a: Formula, b: Formula) -> Formula:
    return Formula(OR, left=a, right=b)


def xor(a: Formula, b: Formula) -> Formula:
    return Formula(XOR, left=a, right=b)


def free_vars(f: Formula) -> frozenset[str]:
    """All variable names reachable in the DAG (cached per node)."""
    if f._free is not None:
        return f._free
    # Iterative post-order so deep formulas cannot hit the recursion limit.
    stack = [f]
    while stack:
        node = stack.pop()
        if node._free is not None:
            continue
        if node.kind == CONST:
            node._free = frozenset()
        elif node.kind == VAR:
            node._free = frozenset((node.payload,))
        else:
            children = [c for c in (node.left, node.right) if c is not None]
            pending = [c for c in children if c._free is None]
            if pending:
                stack.append(node)
                stack.extend(pending)
            elif len(children) == 1:
                node._free = children[0]._free
            else:
                node._free = children[0]._free | children[1]._free
    return f._free


def _fold_not(a: Formula) -> Formula:
    if a.kind == CONST:
        return const(1 - a.payload)
    return not_(a)


def _fold_and(a: Formula, b: Formula) -> Formula:
    if a.kind == CONST:
        return b if a.payload == 1 else const(0)
    if b.kind == CONST:
        return a if b.payload == 1 else const(0)
    return and_(a, b)


def _fold_or(a: Formula, b: Formula) -> Formula:
    if a.kind == CONST:
        return b if a.payload == 0 else const(1)
    if b.kind == CONST:
        return a if b.payload == 0 else const(1)
    return or_(a, b)


def _fold_xor(a: Formula, b: Formula) -> Formula:
    if a.kind == CONST:
        return b if a.payload == 0 else _fold_not(b)
    if b.kind == CONST:
        return a if b.payload == 0 else _fold_not(a)
    return xor(a, b)


_FOLDERS = {NOT: _fold_not, AND: _fold_and, OR: _fold_or, XOR: _fold_xor}


def substitute(f: Formula, name: str, value: int) -> Formula:
    """Replace variable `name` by the constant bit `value`.

    Nodes whose children became constants are folded away, so the variable
    never survives in the result. Subterms that do not mention the variable
    are returned unchanged (same objects).
    """
    if value not in (0, 1):
        raise ValueError(f"substituted value must be 0 or 1, got {value!r}")
    return substitute_all(f, {name: value})


def substitute_all(f: Formula, values: Mapping[str, int]) -> Formula:
    """Substitute several variables at once; see :func:`substitute`."""
    memo: dict[int, Formula] = {}
    stack = [f]
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        if node.kind == CONST:
            memo[id(node)] = node
            stack.pop()
        elif node.kind == VAR:
            v = values.get(node.payload)
            memo[id(node)] = node if v is None else const(v)
            stack.pop()
        elif not (free_vars(node) & values.keys()):
            # untouched subtree: keep sharing, skip the walk
            memo[id(node)] = node
            stack.pop()
        else:
            children = [c for c in (node.left, node.right) if c is not None]
            pending = [c for c in children if id(c) not in memo]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            folder = _FOLDERS[node.kind]
            new_children = [memo[id(c)] for c in children]
            if all(n is o for n, o in zip(new_children, children)):
                memo[id(node)] = node
            else:
                memo[id(node)] = folder(*new_children)
    return memo[id(f)]


def evaluate(f: Formula, assignment: Mapping[str, int]) -> int:
    """Truth value of `f` under a total assignment of its variables."""
    memo: dict[int, int] = {}
    stack = [f]
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        if node.kind == CONST:
            memo[id(node)] = node.payload
            stack.pop()
        elif node.kind == VAR:
            try:
                bit = assignment[node.payload]
            except KeyError:
                raise EvaluationError(
                    f"incomplete assignment: variable '{node.payload}' has no value"
                ) from None
            memo[id(node)] = 1 if bit else 0
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
                memo[id(node)] = 1 - vals[0]
            elif node.kind == AND:
                memo[id(node)] = vals[0] & vals[1]
            elif node.kind == OR:
                memo[id(node)] = vals[0] | vals[1]
            else:
                memo[id(node)] = vals[0] ^ vals[1]
    return memo[id(f)]


def xor_all(fs: Iterable[Formula]) -> Formula:
    """Left-folded XOR of the formulas; the empty combination is 0."""
    acc = None
    for f in fs:
        acc = f if acc is None else xor(acc, f)
    return const(0) if acc is None else acc


def or_all(fs: Iterable[Formula]) -> Formula:
    """Left-folded OR of the formulas; the empty combination is 0."""
    acc = None
    for f in fs:
        acc = f if acc is None else or_(acc, f)
    return const(0) if acc is None else acc


def _format(f: Formula) -> str:
    memo: dict[int, str] = {}
    stack = [f]
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        if node.kind == CONST:
            memo[id(node)] = str(node.payload)
            stack.pop()
        elif node.kind == VAR:
            memo[id(node)] = node.payload
            stack.pop()
        else:
            children = [c for c in (node.left, node.right) if c is not None]
            pending = [c for c in children if id(c) not in memo]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            parts = []
            for c in children:
                text = memo[id(c)]
                parts.append(text if c.kind in (CONST, VAR) else f"({text})")
            if node.kind == NOT:
                memo[id(node)] = f"!{parts[0]}"
            else:
                sym = {AND: "&", OR: "|", XOR: "^"}[node.kind]
                memo[id(node)] = f"{parts[0]} {sym} {parts[1]}"
    return memo[id(f)]
