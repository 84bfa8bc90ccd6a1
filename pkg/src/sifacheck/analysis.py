"""Per-formula variable sets: functional dependencies and XOR factors.

A variable x is *essential* when some setting of the other variables lets x
flip the formula, i.e. f[0/x] ^ f[1/x] is satisfiable. It is a *factor*
when f[0/x] ^ f[1/x] is a tautology, which by the factorization test is
exactly when f == x ^ f[0/x]. Splitting f into its factor variables and
the residual gives the maximal decomposition f == flin ^ fnl with
flin = XOR of fact(f) and fnl = f with all factors set to 0.

All answers here are exact (solver-backed); approximations for linear
combinations live in the checker.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import Formula, free_vars, substitute, substitute_all, xor, xor_all, var
from .sat import UNLIMITED, SolverBudget, is_satisfiable, is_tautology

__all__ = [
    "AnalysisSets",
    "DependencyAnalyzer",
    "is_essential",
    "essential_vars",
    "is_factor",
    "factor_vars",
    "analyze",
]


@dataclass(frozen=True)
class AnalysisSets:
    """Exact dependency data of one formula."""

    ess: frozenset[str]
    fact: frozenset[str]
    fnl: Formula

    @property
    def ess_fnl(self) -> frozenset[str]:
        """Essential variables of the nonlinear residual."""
        return self.ess - self.fact

    def flin(self) -> Formula:
        """XOR of the factor variables (sorted for determinism)."""
        return xor_all(var(x) for x in sorted(self.fact))


def _flip_diff(f: Formula, x: str) -> Formula:
    return xor(substitute(f, x, 0), substitute(f, x, 1))


def is_essential(f: Formula, x: str, budget: SolverBudget = UNLIMITED) -> bool:
    """Whether the value of x can influence the value of f."""
    if x not in free_vars(f):
        return False
    return is_satisfiable(_flip_diff(f, x), budget).satisfiable


def essential_vars(f: Formula, budget: SolverBudget = UNLIMITED) -> frozenset[str]:
    return frozenset(x for x in free_vars(f) if is_essential(f, x, budget))


def is_factor(f: Formula, x: str, budget: SolverBudget = UNLIMITED) -> bool:
    """Whether f == x ^ f[0/x], i.e. x XOR-factors out of f."""
    if x not in free_vars(f):
        return False
    return is_tautology(_flip_diff(f, x), budget)


def factor_vars(f: Formula, budget: SolverBudget = UNLIMITED) -> frozenset[str]:
    return frozenset(x for x in free_vars(f) if is_factor(f, x, budget))


def analyze(f: Formula, budget: SolverBudget = UNLIMITED) -> AnalysisSets:
    """Compute the maximal factorization and the essential set.

    Factors are found first; the essential set is then the factors plus the
    essential variables of the residual, which spares one solver query per
    factor variable compared to testing every variable on f directly.
    """
    fact = factor_vars(f, budget)
    fnl = substitute_all(f, {x: 0 for x in sorted(fact)})
    ess = fact | essential_vars(fnl, budget)
    return AnalysisSets(ess=ess, fact=fact, fnl=fnl)


class DependencyAnalyzer:
    """Memoizing front end for :func:`analyze`.

    The cache is keyed by formula identity, which hash-consing makes
    equivalent to structural identity. One analyzer is meant to live for
    one circuit analysis; it is not shared across threads.
    """

    def __init__(self, budget: SolverBudget = UNLIMITED):
        self.budget = budget
        self._cache: dict[Formula, AnalysisSets] = {}

    def analyze(self, f: Formula) -> AnalysisSets:
        cached = self._cache.get(f)
        if cached is None:
            cached = analyze(f, self.budget)
            self._cache[f] = cached
        return cached

    def essential_vars(self, f: Formula) -> frozenset[str]:
        cached = self._cache.get(f)
        if cached is not None:
            return cached.ess
        return essential_vars(f, self.budget)
