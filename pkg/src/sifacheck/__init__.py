"""Fault-detection leakage verifier for masked redundant circuits.

Decides, per single bit-flip fault location, whether the fault-detection
output of a duplicated masked circuit can be statistically dependent on a
native secret. Verdicts are one-sided: `secure` is a proof, `unknown`
only means the sufficient conditions did not apply.
"""

from .analysis import AnalysisSets, DependencyAnalyzer, analyze, essential_vars, factor_vars, is_essential, is_factor
from .checker import Verdict, build_basis, check_fault, check_fault_detailed, xess, xfact
from .faults import (
    DetectionInstance,
    FaultSite,
    build_detection,
    enumerate_fault_sites,
    unmasked_secret_formula,
)
from .formula import (
    Formula,
    const,
    evaluate,
    free_vars,
    not_,
    and_,
    or_,
    substitute,
    var,
    xor,
    xor_all,
)
from .netlist import (
    CircuitNetlist,
    NetlistError,
    SecretSpec,
    builtin_circuit,
    builtin_names,
    parse_netlist,
    secrets_of,
    serialize_netlist,
)
from .oracle import confirm_leak, is_balanced, statistically_dependent, weight
from .sat import BudgetExhausted, SolverBudget, is_satisfiable, is_tautology, to_cnf

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Formula",
    "const",
    "var",
    "not_",
    "and_",
    "or_",
    "xor",
    "xor_all",
    "free_vars",
    "substitute",
    "evaluate",
    "CircuitNetlist",
    "SecretSpec",
    "NetlistError",
    "parse_netlist",
    "serialize_netlist",
    "secrets_of",
    "builtin_circuit",
    "builtin_names",
    "SolverBudget",
    "BudgetExhausted",
    "to_cnf",
    "is_satisfiable",
    "is_tautology",
    "AnalysisSets",
    "DependencyAnalyzer",
    "is_essential",
    "essential_vars",
    "is_factor",
    "factor_vars",
    "analyze",
    "FaultSite",
    "DetectionInstance",
    "enumerate_fault_sites",
    "build_detection",
    "unmasked_secret_formula",
    "Verdict",
    "check_fault",
    "check_fault_detailed",
    "build_basis",
    "xess",
    "xfact",
    "weight",
    "is_balanced",
    "statistically_dependent",
    "confirm_leak",
]
