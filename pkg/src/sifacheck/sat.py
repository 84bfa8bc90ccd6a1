"""Satisfiability and tautology decisions for formula DAGs.

The decision engine is a self-contained iterative DPLL search with
two-watched-literal unit propagation. Formulas are translated to CNF with
the standard equisatisfiable transformation: every DAG node gets one
auxiliary variable, shared nodes are encoded once.

Completeness matters more than raw speed here: every security verdict in
the checker ultimately rests on these answers, so the search never
approximates and a budget overrun raises instead of defaulting to "unsat".
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import AND, CONST, NOT, OR, VAR, XOR, Formula, free_vars, not_

__all__ = [
    "SatResult",
    "SolverBudget",
    "BudgetExhausted",
    "Cnf",
    "to_cnf",
    "is_satisfiable",
    "is_tautology",
]


class BudgetExhausted(RuntimeError):
    """The decision budget ran out before the query was decided.

    This is never converted into a sat/unsat answer; callers must treat the
    query as undecided.
    """


@dataclass(frozen=True)
class SolverBudget:
    """Bound on solver work; `max_decisions=None` means unlimited."""

    max_decisions: int | None = None


UNLIMITED = SolverBudget()


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    model: dict[str, int] | None = None  # covers free_vars of the query when sat

    def __bool__(self) -> bool:
        return self.satisfiable


@dataclass
class Cnf:
    """Clause set over integer variables 1..n_vars.

    `var_ids` maps formula variable names to CNF variables; the remaining
    indices are auxiliary node variables. The clause set is satisfiable iff
    the source formula is.
    """

    clauses: list[list[int]] = field(default_factory=list)
    var_ids: dict[str, int] = field(default_factory=dict)
    n_vars: int = 0


def to_cnf(f: Formula) -> Cnf:
    """Equisatisfiable CNF of `f`, one auxiliary variable per DAG node.

    Constant subterms are folded during encoding; a formula equivalent to
    constant 0 by folding alone yields the empty clause, constant 1 yields
    an empty clause set.
    """
    cnf = Cnf()
    root = _encode(f, cnf)
    if root is True:
        return cnf
    if root is False:
        cnf.clauses.append([])
        return cnf
    cnf.clauses.append([root])
    return cnf


def _encode(f: Formula, cnf: Cnf):
    """Encode the DAG; returns a literal, or True/False if it folded."""
    memo: dict[int, object] = {}
    stack = [f]
    clauses = cnf.clauses
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        if node.kind == CONST:
            memo[id(node)] = bool(node.payload)
            stack.pop()
            continue
        if node.kind == VAR:
            lit = cnf.var_ids.get(node.payload)
            if lit is None:
                cnf.n_vars += 1
                lit = cnf.n_vars
                cnf.var_ids[node.payload] = lit
            memo[id(node)] = lit
            stack.pop()
            continue
        children = [c for c in (node.left, node.right) if c is not None]
        pending = [c for c in children if id(c) not in memo]
        if pending:
            stack.extend(pending)
            continue
        stack.pop()
        vals = [memo[id(c)] for c in children]
        if node.kind == NOT:
            (a,) = vals
            if isinstance(a, bool):
                memo[id(node)] = not a
            else:
                cnf.n_vars += 1
                v = cnf.n_vars
                clauses.append([-v, -a])
                clauses.append([v, a])
                memo[id(node)] = v
            continue
        a, b = vals
        if isinstance(a, bool) or isinstance(b, bool):
            memo[id(node)] = _fold_binary(node.kind, a, b)
            continue
        cnf.n_vars += 1
        v = cnf.n_vars
        if node.kind == AND:
            clauses.append([-v, a])
            clauses.append([-v, b])
            clauses.append([v, -a, -b])
        elif node.kind == OR:
            clauses.append([v, -a])
            clauses.append([v, -b])
            clauses.append([-v, a, b])
        else:  # XOR
            clauses.append([-v, a, b])
            clauses.append([-v, -a, -b])
            clauses.append([v, -a, b])
            clauses.append([v, a, -b])
        memo[id(node)] = v
    return memo[id(f)]


def _fold_binary(kind, a, b):
    if kind == AND:
        if a is False or b is False:
            return False
        return b if a is True else a
    if kind == OR:
        if a is True or b is True:
            return True
        return b if a is False else a
    # XOR: flip the literal when the constant side is 1
    if isinstance(a, bool) and isinstance(b, bool):
        return a != b
    if isinstance(a, bool):
        return -b if a else b
    return -a if b else a


class _Dpll:
    """Chronological DPLL over a clause list, two watched literals."""

    def __init__(self, n_vars: int, clauses: list[list[int]], max_decisions: int | None):
        self.n = n_vars
        self.value: list[int | None] = [None] * (n_vars + 1)
        self.clauses: list[list[int]] = []
        self.watchers: dict[int, list[int]] = {}
        self.trail: list[int] = []
        self.level_start: list[int] = []  # trail length at each decision
        self.level_flipped: list[bool] = []
        self.qhead = 0
        self.max_decisions = max_decisions
        self.decisions = 0
        self.failed = False  # set when a unit/empty clause conflicts at load
        units: list[int] = []
        for clause in clauses:
            lits = []
            skip = False
            for lit in clause:
                if -lit in lits:
                    skip = True  # tautological clause
                    break
                if lit not in lits:
                    lits.append(lit)
            if skip:
                continue
            if not lits:
                self.failed = True
                return
            if len(lits) == 1:
                units.append(lits[0])
                continue
            idx = len(self.clauses)
            self.clauses.append(lits)
            self.watchers.setdefault(lits[0], []).append(idx)
            self.watchers.setdefault(lits[1], []).append(idx)
        for lit in units:
            v = self.value[abs(lit)]
            if v is None:
                self._assign(lit)
            elif (v == 1) != (lit > 0):
                self.failed = True
                return

    def _assign(self, lit: int) -> None:
        self.value[abs(lit)] = 1 if lit > 0 else 0
        self.trail.append(lit)

    def _lit_value(self, lit: int) -> int | None:
        v = self.value[abs(lit)]
        if v is None:
            return None
        return v if lit > 0 else 1 - v

    def _propagate(self) -> bool:
        """Exhaust unit propagation; False on conflict."""
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            falsified = -lit
            watch_list = self.watchers.get(falsified)
            if not watch_list:
                continue
            kept = []
            for pos, ci in enumerate(watch_list):
                clause = self.clauses[ci]
                # normalize: watched literals live at positions 0 and 1
                if clause[0] == falsified:
                    clause[0], clause[1] = clause[1], clause[0]
                other = clause[0]
                ov = self._lit_value(other)
                if ov == 1:
                    kept.append(ci)
                    continue
                moved = False
                for k in range(2, len(clause)):
                    if self._lit_value(clause[k]) != 0:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watchers.setdefault(clause[1], []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(ci)
                if ov is None:
                    self._assign(other)
                elif ov == 0:
                    kept.extend(watch_list[pos + 1 :])
                    self.watchers[falsified] = kept
                    return False
            self.watchers[falsified] = kept
        return True

    def _backtrack_level(self) -> None:
        target = self.level_start[-1]
        while len(self.trail) > target:
            self.value[abs(self.trail.pop())] = None
        self.qhead = target

    def solve(self) -> list[int | None] | None:
        if self.failed:
            return None
        if not self._propagate():
            return None
        next_var = 1
        while True:
            while next_var <= self.n and self.value[next_var] is not None:
                next_var += 1
            if next_var > self.n:
                return self.value
            self.decisions += 1
            if self.max_decisions is not None and self.decisions > self.max_decisions:
                raise BudgetExhausted(
                    f"solver exceeded {self.max_decisions} decisions"
                )
            self.level_start.append(len(self.trail))
            self.level_flipped.append(False)
            self._assign(next_var)
            while not self._propagate():
                while self.level_flipped and self.level_flipped[-1]:
                    self._backtrack_level()
                    self.level_start.pop()
                    self.level_flipped.pop()
                if not self.level_flipped:
                    return None
                flip = -self.trail[self.level_start[-1]]
                self._backtrack_level()
                self.level_flipped[-1] = True
                self._assign(flip)
                next_var = 1
            next_var = 1


def is_satisfiable(f: Formula, budget: SolverBudget = UNLIMITED) -> SatResult:
    """Complete satisfiability decision; the model covers free_vars(f)."""
    cnf = to_cnf(f)
    solver = _Dpll(cnf.n_vars, cnf.clauses, budget.max_decisions)
    values = solver.solve()
    if values is None:
        return SatResult(False)
    model = {}
    for name in free_vars(f):
        idx = cnf.var_ids.get(name)
        bit = values[idx] if idx is not None else None
        model[name] = 0 if bit is None else bit
    return SatResult(True, model)


def is_tautology(f: Formula, budget: SolverBudget = UNLIMITED) -> bool:
    """True iff `f` holds under every assignment."""
    return not is_satisfiable(not_(f), budget).satisfiable
