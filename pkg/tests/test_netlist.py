import pytest

from sifacheck.faults import output_formulas
from sifacheck.formula import evaluate
from sifacheck.netlist import (
    Mask,
    NetlistError,
    Share,
    builtin_circuit,
    builtin_names,
    parse_netlist,
    secrets_of,
    serialize_netlist,
)

from conftest import all_assignments

HEADER = """\
circuit t
input b0 share b 0
input b1 share b 1
input c1 share c 0
input c2 share c 1
input m_r mask
"""


def _parse(body: str):
    return parse_netlist(HEADER + body)


def test_gate_grammar_fused_negation():
    c = _parse("gate x0 = and !b0 c1\noutput x0\n")
    gate = c.gates[0]
    assert gate.op == "and"
    assert gate.operands[0].wire == "b0" and gate.operands[0].negated
    assert gate.operands[1].wire == "c1" and not gate.operands[1].negated


def test_gate_arity_errors():
    with pytest.raises(NetlistError, match="xor takes exactly two operands"):
        _parse("gate r0 = xor b0 m_r c1\noutput r0\n")
    with pytest.raises(NetlistError, match="not takes exactly one operand"):
        _parse("gate r0 = not b0 b1\noutput r0\n")


def test_distinct_diagnostics():
    with pytest.raises(NetlistError, match="line 6: undefined wire 'zz'"):
        _parse("gate g = and zz b0\noutput g\n")
    with pytest.raises(NetlistError, match="forward reference to 'h'"):
        _parse("gate g = and h b0\ngate h = not b0\noutput g\n")
    with pytest.raises(NetlistError, match="duplicate id 'b0'"):
        _parse("gate b0 = not b1\noutput b0\n")
    with pytest.raises(NetlistError, match="unknown directive"):
        _parse("wire w\noutput b0\n")
    with pytest.raises(NetlistError, match="single share"):
        parse_netlist("circuit t\ninput s0 share s 0\ninput m mask\noutput s0\n")
    with pytest.raises(NetlistError, match="contiguous from 0"):
        parse_netlist(
            "circuit t\ninput s0 share s 0\ninput s2 share s 2\noutput s0\n"
        )
    with pytest.raises(NetlistError, match="duplicate share index"):
        parse_netlist(
            "circuit t\ninput s0 share s 0\ninput s1 share s 0\noutput s0\n"
        )
    with pytest.raises(NetlistError, match="no outputs"):
        _parse("gate g = not b0\n")
    with pytest.raises(NetlistError, match="circuit directive must come first"):
        parse_netlist("input m mask\ncircuit t\noutput m\n")
    with pytest.raises(NetlistError, match="reserved"):
        parse_netlist("circuit t\ninput const0 mask\noutput const0\n")
    with pytest.raises(NetlistError, match="share index"):
        parse_netlist("circuit t\ninput s0 share s zero\noutput s0\n")
    with pytest.raises(NetlistError, match="not constants"):
        _parse("gate g = not b0\noutput const1\n")
    with pytest.raises(NetlistError, match="missing circuit directive"):
        parse_netlist("# nothing here\n")


def test_constants_usable_as_operands():
    c = _parse("gate g = and b0 const1\ngate h = xor g !const0\noutput h\n")
    assert c.gates[1].operands[1].wire == "const0"


def test_parse_accepts_bytes():
    c = parse_netlist(HEADER.encode() + b"gate g = not b0\noutput g\n")
    assert c.name == "t"


def test_round_trip_all_builtins():
    for name in builtin_names():
        c = builtin_circuit(name)
        assert parse_netlist(serialize_netlist(c)) == c


def test_round_trip_custom():
    c = _parse("gate g = and !b0 const1\ngate h = or g !c1\noutput h\noutput g\n")
    assert parse_netlist(serialize_netlist(c)) == c


def test_unknown_builtin():
    with pytest.raises(ValueError, match="no builtin circuit named 'nope'"):
        builtin_circuit("nope")


def test_chi3_gate_counts():
    c = builtin_circuit("chi3")
    assert len(c.gates) == 31
    assert sum(1 for g in c.gates if g.op == "and") == 12
    assert sum(1 for g in c.gates if g.op == "xor") == 19
    assert len(c.inputs) == 8
    assert len(c.outputs) == 6


def test_chi3_roles():
    c = builtin_circuit("chi3")
    roles = dict(c.inputs)
    assert roles["m_r"] == Mask() and roles["m_t"] == Mask()
    assert roles["a0"] == Share("a", 0) and roles["a1"] == Share("a", 1)
    secrets = secrets_of(c)
    assert [(s.name, s.shares) for s in secrets] == [
        ("a", ("a0", "a1")),
        ("b", ("b0", "b1")),
        ("c", ("c0", "c1")),
    ]


def test_secrets_of_mask_only_circuit():
    c = parse_netlist("circuit m\ninput m0 mask\ngate g = not m0\noutput g\n")
    assert secrets_of(c) == []


def test_fig2_toy_has_three_two_share_secrets():
    c = builtin_circuit("fig2_toy")
    secrets = secrets_of(c)
    assert [s.name for s in secrets] == ["a", "b", "c"]
    assert all(len(s.shares) == 2 for s in secrets)


def _native_chi3(a, b, c):
    return (a ^ ((1 - b) & c), b ^ ((1 - c) & a), c ^ ((1 - a) & b))


def _unmasked_outputs(circuit, assignment):
    outs = [evaluate(f, assignment) for f in output_formulas(circuit)]
    r0, r1, s0, s1, t0, t1 = outs
    return (r0 ^ r1, s0 ^ s1, t0 ^ t1)


def test_chi3_computes_native_chi3():
    c = builtin_circuit("chi3")
    for assignment in all_assignments([n for n, _ in c.inputs]):
        a = assignment["a0"] ^ assignment["a1"]
        b = assignment["b0"] ^ assignment["b1"]
        cc = assignment["c0"] ^ assignment["c1"]
        assert _unmasked_outputs(c, assignment) == _native_chi3(a, b, cc)


@pytest.mark.parametrize("variant", ["chi3_reuse_b0", "chi3_reuse_c0", "chi3_reuse_a0"])
def test_reuse_variants_functionally_equal_to_chi3(variant):
    base = builtin_circuit("chi3")
    other = builtin_circuit(variant)
    base_outs = output_formulas(base)
    other_outs = output_formulas(other)
    for assignment in all_assignments([n for n, _ in base.inputs]):
        for f, g in zip(base_outs, other_outs):
            assert evaluate(f, assignment) == evaluate(g, assignment)
