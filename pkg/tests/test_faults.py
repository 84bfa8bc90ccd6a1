import pytest

from sifacheck.faults import (
    build_detection,
    enumerate_fault_sites,
    find_fault_site,
    output_formulas,
    unmasked_secret_formula,
    wire_formulas,
)
from sifacheck.formula import evaluate, free_vars, not_, or_, var, xor
from sifacheck.netlist import SecretSpec, builtin_circuit, parse_netlist
from sifacheck.sat import is_tautology

from conftest import all_assignments


def test_chi3_site_enumeration():
    c = builtin_circuit("chi3")
    sites = enumerate_fault_sites(c)
    assert len(sites) == 39  # 8 inputs + 31 gates
    assert [s.site_id for s in sites[:8]] == [
        f"input:{n}" for n in ("a0", "a1", "b0", "b1", "c0", "c1", "m_r", "m_t")
    ]
    assert sites[8].site_id == "gate:m_s"
    assert all(s.kind == "bit-flip" for s in sites)


def test_reuse_variant_includes_shared_inverter_site():
    c = builtin_circuit("chi3_reuse_b0")
    ids = [s.site_id for s in enumerate_fault_sites(c)]
    assert "gate:v0" in ids
    assert len(ids) == 40  # 8 inputs + 32 gates (the inverter is a new gate)


def test_fig2_toy_includes_input_site():
    c = builtin_circuit("fig2_toy")
    ids = [s.site_id for s in enumerate_fault_sites(c)]
    assert "input:a0" in ids
    assert len(ids) == 15


def test_gates_only_enumeration():
    c = builtin_circuit("fig2_toy")
    ids = [s.site_id for s in enumerate_fault_sites(c, include_inputs=False)]
    assert len(ids) == 7
    assert all(i.startswith("gate:") for i in ids)


def test_find_fault_site():
    c = builtin_circuit("fig2_toy")
    assert find_fault_site(c, "input:a0").wire == "a0"
    with pytest.raises(KeyError):
        find_fault_site(c, "gate:nope")


def test_fig2_fault_on_a0_leaks_b0_or_b1_or_c1():
    c = builtin_circuit("fig2_toy")
    d = build_detection(c, find_fault_site(c, "input:a0"))
    expected = or_(or_(var("b0"), var("b1")), var("c1"))
    assert is_tautology(not_(xor(d.delta, expected)))  # biconditional


def test_detection_instance_shape():
    c = builtin_circuit("chi3")
    d = build_detection(c, find_fault_site(c, "gate:m_s"))
    assert len(d.deltas) == len(c.outputs)
    assert free_vars(d.delta) <= set(c.input_names())
    assert d.masks == {"m_r", "m_t"}
    assert [s.name for s in d.secrets] == ["a", "b", "c"]


def test_output_stage_flip_always_detected():
    c = builtin_circuit("chi3")
    d = build_detection(c, find_fault_site(c, "gate:r0"))
    assert is_tautology(d.deltas[0])
    assert is_tautology(d.delta)


def test_dead_wire_gives_zero_delta():
    c = parse_netlist(
        "circuit dead\n"
        "input s0 share s 0\n"
        "input s1 share s 1\n"
        "gate live = xor s0 s1\n"
        "gate dangling = and s0 s1\n"
        "output live\n"
    )
    d = build_detection(c, find_fault_site(c, "gate:dangling"))
    assert not is_tautology(d.delta)
    for assignment in all_assignments({"s0", "s1"}):
        assert evaluate(d.delta, assignment) == 0


def test_no_fault_means_zero_differences():
    c = builtin_circuit("fig2_toy")
    clean = output_formulas(c)
    again = output_formulas(c)
    for f, g in zip(clean, again):
        diff = xor(f, g)
        for assignment in all_assignments(set(c.input_names())):
            assert evaluate(diff, assignment) == 0


def test_double_flip_restores_clean_circuit():
    c = builtin_circuit("fig2_toy")
    clean = output_formulas(c)
    for site in enumerate_fault_sites(c):
        twice = output_formulas(c, {site.wire: 2})
        for f, g in zip(clean, twice):
            for assignment in all_assignments(set(c.input_names())):
                assert evaluate(f, assignment) == evaluate(g, assignment)


def test_input_flip_matches_substituted_reevaluation():
    c = builtin_circuit("fig2_toy")
    d = build_detection(c, find_fault_site(c, "input:a0"))
    clean = output_formulas(c)
    for assignment in all_assignments(set(c.input_names())):
        flipped = dict(assignment)
        flipped["a0"] ^= 1
        expect = max(
            evaluate(f, flipped) ^ evaluate(f, assignment) for f in clean
        )
        assert evaluate(d.delta, assignment) == expect


def test_wire_formulas_cover_all_wires():
    c = builtin_circuit("chi3")
    wires = wire_formulas(c)
    for gate in c.gates:
        assert gate.name in wires
    for name in c.input_names():
        assert wires[name] is var(name)


def test_unmasked_secret_formula():
    assert unmasked_secret_formula(SecretSpec("a", ("a0", "a1"))) is xor(
        var("a0"), var("a1")
    )
    f = unmasked_secret_formula(SecretSpec("s", ("s0", "s1", "s2")))
    assert free_vars(f) == {"s0", "s1", "s2"}
    assert evaluate(f, {"s0": 1, "s1": 1, "s2": 1}) == 1
