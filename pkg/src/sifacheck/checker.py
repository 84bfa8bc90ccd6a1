"""Per-fault leakage verdicts for masked redundant circuits.

A fault is declared `secure` when one of three sufficient conditions
holds for its detection value delta = OR of the per-output differences:

  incompleteness  no secret has all of its shares essential in delta;
  hiding          a uniformly random variable (a mask, or a share of an
                  incomplete secret) XOR-factors out of delta;
  inferred        every XOR-combination of a linear basis of the
  independence    per-output differences is itself incomplete or hidden,
                  which transfers independence to their disjunction.

The conditions are sufficient, not necessary: `unknown` means "not
proven", never "exploitable". The sweep over basis combinations checks
cheap set approximations (xess over-approximates the essential set,
xfact under-approximates the factor set), both derived from the exact
per-member analyses, so a passed sweep is still a sound proof.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .analysis import AnalysisSets, DependencyAnalyzer, is_factor
from .faults import DetectionInstance
from .formula import Formula, xor, xor_all
from .sat import UNLIMITED, BudgetExhausted, SolverBudget, is_satisfiable

__all__ = [
    "SECURE",
    "UNKNOWN",
    "INCOMPLETE",
    "Verdict",
    "CheckerState",
    "xfact",
    "xess",
    "build_basis",
    "check_fault",
]

SECURE = "secure"
UNKNOWN = "unknown"
INCOMPLETE = "incomplete"

WITNESS_NO_COMPLETE_SECRET = "no-complete-secret"
WITNESS_SWEEP = "subset-sweep-passed"

DEFAULT_MAX_SUBSETS = 1 << 20


@dataclass(frozen=True)
class Verdict:
    """Outcome for one fault site.

    secure     carries a witness: "no-complete-secret", "hidden-by:<var>"
               or "subset-sweep-passed";
    unknown    carries the first offending basis subset (indices into the
               basis, minimal cardinality, then lexicographic);
    incomplete the analysis could not finish (budget or sweep cap); this
               is never a security claim.
    """

    status: str
    witness: str | None = None
    subset: tuple[int, ...] | None = None
    reason: str | None = None

    @property
    def is_secure(self) -> bool:
        return self.status == SECURE


@dataclass
class CheckerState:
    """Intermediate data of one check, kept for reporting and debugging."""

    ess_delta: frozenset[str]
    complete_secrets: list[str]
    hiders: frozenset[str]
    basis_indices: list[int]
    basis_sets: list[AnalysisSets]


def xfact(members: Sequence[AnalysisSets]) -> frozenset[str]:
    """Factor-set under-approximation for the XOR of the members.

    Variables that factor out of an odd number of members survive the XOR
    unless some member's nonlinear residual also depends on them.
    """
    sym: frozenset[str] = frozenset()
    blocked: frozenset[str] = frozenset()
    for m in members:
        sym = sym ^ m.fact
        blocked = blocked | m.ess_fnl
    return sym - blocked


def xess(members: Sequence[AnalysisSets]) -> frozenset[str]:
    """Essential-set over-approximation for the XOR of the members."""
    sym: frozenset[str] = frozenset()
    residual: frozenset[str] = frozenset()
    for m in members:
        sym = sym ^ m.fact
        residual = residual | m.ess_fnl
    return sym | residual


def build_basis(
    deltas: Sequence[Formula], budget: SolverBudget = UNLIMITED
) -> list[Formula]:
    """Greedy maximal linearly independent subset, in index order.

    A candidate joins the basis iff it is not semantically equal to the
    XOR of any subset of the current basis (equality decided by the
    solver, since distinct DAGs may be the same function).
    """
    basis: list[Formula] = []
    for f in deltas:
        if _independent_of(f, basis, budget):
            basis.append(f)
    return basis


def _independent_of(
    f: Formula, basis: Sequence[Formula], budget: SolverBudget
) -> bool:
    for r in range(len(basis) + 1):
        for combo in itertools.combinations(basis, r):
            diff = xor(f, xor_all(combo)) if combo else f
            if not is_satisfiable(diff, budget).satisfiable:
                return False  # f equals this combination everywhere
    return True


def check_fault(
    d: DetectionInstance,
    budget: SolverBudget = UNLIMITED,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    analyzer: DependencyAnalyzer | None = None,
) -> Verdict:
    verdict, _ = check_fault_detailed(d, budget, max_subsets, analyzer)
    return verdict


def check_fault_detailed(
    d: DetectionInstance,
    budget: SolverBudget = UNLIMITED,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    analyzer: DependencyAnalyzer | None = None,
) -> tuple[Verdict, CheckerState | None]:
    """Run the verification procedure for one fault, returning its trace.

    Step order: essential set of delta, complete/incomplete secret split,
    hiding test on delta, basis reduction of the per-output differences,
    then the subset sweep with the set approximations.
    """
    analyzer = analyzer or DependencyAnalyzer(budget)
    try:
        return _check(d, budget, max_subsets, analyzer)
    except BudgetExhausted as exc:
        return Verdict(INCOMPLETE, reason=str(exc)), None


def _check(
    d: DetectionInstance,
    budget: SolverBudget,
    max_subsets: int,
    analyzer: DependencyAnalyzer,
) -> tuple[Verdict, CheckerState]:
    ess_delta = analyzer.essential_vars(d.delta)

    complete = []  # secrets with every share essential in delta
    hiders = set(d.masks)  # masks plus essential shares of incomplete secrets
    for s in d.secrets:
        shares = set(s.shares)
        if shares <= ess_delta:
            complete.append(s)
        else:
            hiders |= shares & ess_delta

    state = CheckerState(
        ess_delta=ess_delta,
        complete_secrets=[s.name for s in complete],
        hiders=frozenset(hiders),
        basis_indices=[],
        basis_sets=[],
    )

    if not complete:
        return Verdict(SECURE, witness=WITNESS_NO_COMPLETE_SECRET), state

    # Hiding: does some eligible random variable factor out of delta?
    # Factors are essential, so only candidates inside ess(delta) can hit.
    for x in sorted(hiders & ess_delta):
        if is_factor(d.delta, x, budget):
            return Verdict(SECURE, witness=f"hidden-by:{x}"), state

    # Linear basis of the per-output differences.
    basis: list[Formula] = []
    for i, f in enumerate(d.deltas):
        if _independent_of(f, basis, budget):
            basis.append(f)
            state.basis_indices.append(i)

    if 1 << len(basis) > max_subsets:
        return (
            Verdict(
                INCOMPLETE,
                reason=f"subset sweep of 2^{len(basis)} combinations exceeds the cap",
            ),
            state,
        )
    state.basis_sets = [analyzer.analyze(f) for f in basis]

    # Sweep every combination, smallest first, so an offending subset is
    # minimal; continue only when it is provably incomplete or hidden.
    share_sets = [set(s.shares) for s in complete]
    for r in range(len(basis) + 1):
        for combo in itertools.combinations(range(len(basis)), r):
            members = [state.basis_sets[i] for i in combo]
            xe = xess(members)
            if not any(shares <= xe for shares in share_sets):
                continue
            if hiders & xfact(members):
                continue
            return Verdict(UNKNOWN, subset=combo), state

    return Verdict(SECURE, witness=WITNESS_SWEEP), state
