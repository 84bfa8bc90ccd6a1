"""Redundant-pair construction and single bit-flip fault injection.

The protected computation runs twice on the same inputs; the detection
value is the OR of the per-output XOR differences between the copies. A
fault negates exactly one wire (a primary input or a gate output) in one
copy, and everything downstream of that point in the faulted copy sees the
flipped value. By symmetry of the XOR differences it does not matter which
copy carries the fault, so only one copy's sites are enumerated.

The comparator itself (the output XORs and the OR tree) is not a fault
target here; only the computation gates and inputs are.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .formula import Formula, const, not_, and_, or_, xor, var, or_all, xor_all
from .netlist import CircuitNetlist, Gate, SecretSpec, secrets_of

__all__ = [
    "FaultSite",
    "DetectionInstance",
    "enumerate_fault_sites",
    "find_fault_site",
    "build_detection",
    "wire_formulas",
    "output_formulas",
    "unmasked_secret_formula",
]

BIT_FLIP = "bit-flip"


@dataclass(frozen=True)
class FaultSite:
    """One injectable fault location: `target` is "input" or "gate"."""

    target: str
    wire: str
    kind: str = BIT_FLIP

    @property
    def site_id(self) -> str:
        return f"{self.target}:{self.wire}"


@dataclass(frozen=True)
class DetectionInstance:
    """Symbolic fault-detection data for one fault site.

    `deltas[i]` is faulted-output-i XOR clean-output-i; `delta` is their
    disjunction. Both redundant copies read the same input variables, so
    the free variables of `delta` are circuit inputs only.
    """

    site: FaultSite
    deltas: tuple[Formula, ...]
    delta: Formula
    masks: frozenset[str]
    secrets: tuple[SecretSpec, ...]


def enumerate_fault_sites(
    c: CircuitNetlist, include_inputs: bool = True
) -> list[FaultSite]:
    """All bit-flip sites: inputs in declaration order, then gates."""
    sites = []
    if include_inputs:
        sites.extend(FaultSite("input", name) for name in c.input_names())
    sites.extend(FaultSite("gate", gate.name) for gate in c.gates)
    return sites


def find_fault_site(c: CircuitNetlist, site_id: str) -> FaultSite:
    """Resolve a site id like "gate:v0"; raises KeyError when absent."""
    for site in enumerate_fault_sites(c):
        if site.site_id == site_id:
            return site
    raise KeyError(f"no fault site '{site_id}' in circuit '{c.name}'")


def wire_formulas(
    c: CircuitNetlist, flips: Mapping[str, int] | None = None
) -> dict[str, Formula]:
    """Symbolic value of every wire; `flips` counts negations per wire.

    Each flip wraps the wire's defining formula in one negation at its
    definition point, so downstream gates see the flipped value. Applying
    the same flip twice therefore yields a double negation, not the
    original node.
    """
    flips = flips or {}
    wires: dict[str, Formula] = {"const0": const(0), "const1": const(1)}
    for name, _ in c.inputs:
        wires[name] = _flip(var(name), flips.get(name, 0))
    for gate in c.gates:
        operands = []
        for op in gate.operands:
            f = wires[op.wire]
            operands.append(not_(f) if op.negated else f)
        if gate.op == "not":
            value = not_(operands[0])
        elif gate.op == "and":
            value = and_(operands[0], operands[1])
        elif gate.op == "or":
            value = or_(operands[0], operands[1])
        else:
            value = xor(operands[0], operands[1])
        wires[gate.name] = _flip(value, flips.get(gate.name, 0))
    return wires


def _flip(f: Formula, times: int) -> Formula:
    for _ in range(times):
        f = not_(f)
    return f


def output_formulas(
    c: CircuitNetlist, flips: Mapping[str, int] | None = None
) -> list[Formula]:
    wires = wire_formulas(c, flips)
    return [wires[name] for name in c.outputs]


def build_detection(c: CircuitNetlist, site: FaultSite) -> DetectionInstance:
    """Construct the detection formulas for one fault site."""
    if site.kind != BIT_FLIP:
        raise ValueError(f"unsupported fault kind '{site.kind}'")
    clean = output_formulas(c)
    faulted = output_formulas(c, {site.wire: 1})
    deltas = tuple(xor(fv, cv) for fv, cv in zip(faulted, clean))
    return DetectionInstance(
        site=site,
        deltas=deltas,
        delta=or_all(deltas),
        masks=frozenset(c.mask_names()),
        secrets=tuple(secrets_of(c)),
    )


def unmasked_secret_formula(s: SecretSpec) -> Formula:
    """XOR of the secret's shares: the native value the attacker wants."""
    return xor_all(var(share) for share in s.shares)
