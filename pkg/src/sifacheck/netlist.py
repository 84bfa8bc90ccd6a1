"""Line-based netlist format for combinational masked circuits.

Grammar (UTF-8, `#` starts a comment, blank lines ignored):

    circuit <name>
    input <id> mask
    input <id> share <secret> <index>
    gate <id> = <op> <operand> [<operand>]     op: not | and | or | xor
    output <id>

Operands name previously declared wires, or the reserved constants
``const0``/``const1``; a ``!`` prefix records a fused negation on that
operand (not a separate gate). Gate negations can therefore be expressed
two ways: fused into a consumer, or as a standalone ``not`` gate — the
distinction is deliberate because it changes the set of faultable gates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

__all__ = [
    "Mask",
    "Share",
    "Operand",
    "Gate",
    "CircuitNetlist",
    "SecretSpec",
    "NetlistError",
    "parse_netlist",
    "serialize_netlist",
    "secrets_of",
    "builtin_names",
    "builtin_circuit",
]

CONST_WIRES = ("const0", "const1")
GATE_OPS = ("not", "and", "or", "xor")

_ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class NetlistError(ValueError):
    """Parse or validation failure; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Mask:
    """Input role: fresh uniformly random value."""


@dataclass(frozen=True)
class Share:
    """Input role: share `index` of the named secret."""

    secret: str
    index: int


@dataclass(frozen=True)
class Operand:
    wire: str
    negated: bool = False

    def __str__(self) -> str:
        return f"!{self.wire}" if self.negated else self.wire


@dataclass(frozen=True)
class Gate:
    name: str
    op: str
    operands: tuple[Operand, ...]


@dataclass(frozen=True)
class SecretSpec:
    """A native secret and its share wires, in share-index order."""

    name: str
    shares: tuple[str, ...]


@dataclass(frozen=True)
class CircuitNetlist:
    name: str
    inputs: tuple[tuple[str, Mask | Share], ...]
    gates: tuple[Gate, ...]
    outputs: tuple[str, ...]

    def input_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.inputs)

    def mask_names(self) -> tuple[str, ...]:
        return tuple(name for name, role in self.inputs if isinstance(role, Mask))


def parse_netlist(text: str | bytes) -> CircuitNetlist:
    """Parse and validate netlist text; raises NetlistError with a line number."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.splitlines()

    # Pre-scan declared ids so that "declared later" and "never declared"
    # produce different diagnostics.
    declared_anywhere: set[str] = set()
    for raw in lines:
        tokens = _tokens(raw)
        if len(tokens) >= 2 and tokens[0] in ("input", "gate"):
            declared_anywhere.add(tokens[1])

    circuit_name: str | None = None
    inputs: list[tuple[str, Mask | Share]] = []
    gates: list[Gate] = []
    output_refs: list[tuple[str, int]] = []
    declared: set[str] = set()
    share_lines: dict[str, list[tuple[int, str, int]]] = {}  # secret -> (line, wire, index)

    for lineno, raw in enumerate(lines, start=1):
        tokens = _tokens(raw)
        if not tokens:
            continue
        directive = tokens[0]
        if directive == "circuit":
            if len(tokens) != 2:
                raise NetlistError("circuit directive takes exactly one name", lineno)
            if circuit_name is not None:
                raise NetlistError("duplicate circuit directive", lineno)
            _check_id(tokens[1], lineno)
            circuit_name = tokens[1]
            continue
        if circuit_name is None:
            raise NetlistError("circuit directive must come first", lineno)
        if directive == "input":
            name = _declare(tokens, declared, lineno)
            if len(tokens) >= 3 and tokens[2] == "mask":
                if len(tokens) != 3:
                    raise NetlistError("mask input takes no further fields", lineno)
                role: Mask | Share = Mask()
            elif len(tokens) >= 3 and tokens[2] == "share":
                if len(tokens) != 5:
                    raise NetlistError(
                        "share input needs a secret name and a share index", lineno
                    )
                _check_id(tokens[3], lineno)
                if not tokens[4].isdigit():
                    raise NetlistError(
                        f"share index must be a non-negative integer, got '{tokens[4]}'",
                        lineno,
                    )
                index = int(tokens[4])
                role = Share(tokens[3], index)
                share_lines.setdefault(tokens[3], []).append((lineno, name, index))
            else:
                raise NetlistError("input role must be 'mask' or 'share'", lineno)
            inputs.append((name, role))
        elif directive == "gate":
            name = _declare(tokens, declared, lineno)
            if len(tokens) < 4 or tokens[2] != "=":
                raise NetlistError("gate syntax is: gate <id> = <op> <operands>", lineno)
            op = tokens[3]
            if op not in GATE_OPS:
                raise NetlistError(f"unknown gate op '{op}'", lineno)
            operand_tokens = tokens[4:]
            arity = 1 if op == "not" else 2
            if len(operand_tokens) != arity:
                word = "one operand" if arity == 1 else "two operands"
                raise NetlistError(f"{op} takes exactly {word}", lineno)
            operands = tuple(
                _parse_operand(tok, declared, declared_anywhere, lineno)
                for tok in operand_tokens
            )
            gates.append(Gate(name, op, operands))
        elif directive == "output":
            if len(tokens) != 2:
                raise NetlistError("output directive takes exactly one wire", lineno)
            output_refs.append((tokens[1], lineno))
        else:
            raise NetlistError(f"unknown directive '{directive}'", lineno)

    if circuit_name is None:
        raise NetlistError("missing circuit directive")
    for wire, lineno in output_refs:
        if wire in CONST_WIRES:
            raise NetlistError("outputs must be inputs or gates, not constants", lineno)
        if wire not in declared:
            raise NetlistError(f"undefined wire '{wire}'", lineno)
    if not output_refs:
        raise NetlistError("netlist declares no outputs")
    _check_secrets(share_lines)

    return CircuitNetlist(
        name=circuit_name,
        inputs=tuple(inputs),
        gates=tuple(gates),
        outputs=tuple(wire for wire, _ in output_refs),
    )


def _tokens(raw: str) -> list[str]:
    return raw.split("#", 1)[0].split()


def _check_id(name: str, lineno: int) -> None:
    if not _ID_RE.match(name):
        raise NetlistError(f"invalid identifier '{name}'", lineno)
    if name in CONST_WIRES:
        raise NetlistError(f"'{name}' is reserved and cannot be declared", lineno)


def _declare(tokens: list[str], declared: set[str], lineno: int) -> str:
    if len(tokens) < 2:
        raise NetlistError(f"{tokens[0]} directive needs an identifier", lineno)
    name = tokens[1]
    _check_id(name, lineno)
    if name in declared:
        raise NetlistError(f"duplicate id '{name}'", lineno)
    declared.add(name)
    return name


def _parse_operand(
    token: str, declared: set[str], declared_anywhere: set[str], lineno: int
) -> Operand:
    negated = token.startswith("!")
    wire = token[1:] if negated else token
    if wire in CONST_WIRES:
        return Operand(wire, negated)
    if not _ID_RE.match(wire):
        raise NetlistError(f"invalid operand '{token}'", lineno)
    if wire not in declared:
        if wire in declared_anywhere:
            raise NetlistError(f"forward reference to '{wire}'", lineno)
        raise NetlistError(f"undefined wire '{wire}'", lineno)
    return Operand(wire, negated)


def _check_secrets(share_lines: dict[str, list[tuple[int, str, int]]]) -> None:
    for secret, entries in share_lines.items():
        indices = [index for _, _, index in entries]
        for lineno, _, index in entries:
            if indices.count(index) > 1:
                raise NetlistError(
                    f"duplicate share index {index} for secret '{secret}'", lineno
                )
        first_line = entries[0][0]
        if len(entries) < 2:
            raise NetlistError(f"secret '{secret}' has a single share", first_line)
        if sorted(indices) != list(range(len(indices))):
            raise NetlistError(
                f"share indices of secret '{secret}' must be contiguous from 0",
                first_line,
            )


def serialize_netlist(c: CircuitNetlist) -> str:
    """Canonical text form; parsing it back gives a structurally equal netlist."""
    out = [f"circuit {c.name}"]
    for name, role in c.inputs:
        if isinstance(role, Mask):
            out.append(f"input {name} mask")
        else:
            out.append(f"input {name} share {role.secret} {role.index}")
    for gate in c.gates:
        operands = " ".join(str(op) for op in gate.operands)
        out.append(f"gate {gate.name} = {gate.op} {operands}")
    out.extend(f"output {wire}" for wire in c.outputs)
    return "\n".join(out) + "\n"


def secrets_of(c: CircuitNetlist) -> list[SecretSpec]:
    """One SecretSpec per secret, in first-appearance order, shares by index."""
    by_secret: dict[str, list[tuple[int, str]]] = {}
    for name, role in c.inputs:
        if isinstance(role, Share):
            by_secret.setdefault(role.secret, []).append((role.index, name))
    return [
        SecretSpec(secret, tuple(wire for _, wire in sorted(pairs)))
        for secret, pairs in by_secret.items()
    ]


_BUILTINS = ("chi3", "chi3_reuse_b0", "chi3_reuse_c0", "chi3_reuse_a0", "fig2_toy")


def builtin_names() -> tuple[str, ...]:
    return _BUILTINS


def builtin_circuit(name: str) -> CircuitNetlist:
    """Load one of the bundled circuits shipped with the package."""
    if name not in _BUILTINS:
        raise ValueError(
            f"no builtin circuit named '{name}' (available: {', '.join(_BUILTINS)})"
        )
    text = resources.files(__package__).joinpath(f"circuits/{name}.net").read_text("utf-8")
    return parse_netlist(text)
