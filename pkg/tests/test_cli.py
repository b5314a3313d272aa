import json

import pytest

from qcsa import netlist
from qcsa.cli import main
from qcsa.registry import REGISTRY


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def kv(out):
    return dict(line.split("=", 1) for line in out.splitlines() if "=" in line)


def test_build_qfa(capsys):
    code, out, _ = run(capsys, "build", "qfa")
    assert code == 0
    lines = out.splitlines()
    assert "qubits 4" in lines
    assert sum(ln.startswith("ccx ") for ln in lines) == 2
    assert sum(ln.startswith("cx ") for ln in lines) == 2


def test_build_ripple_width(capsys):
    code, out, _ = run(capsys, "build", "ripple", "-n", "4")
    assert code == 0 and "qubits 13" in out.splitlines()


def test_build_modulus_out_of_range(capsys):
    code, _, err = run(capsys, "build", "modcsa", "--bits", "4", "--modulus", "5")
    assert code == 2 and "modulus" in err


def test_even_modulus_rejected(capsys):
    code, _, err = run(capsys, "build", "modcsa", "--bits", "5", "--modulus", "4")
    assert code == 2 and "odd" in err


def test_unknown_construction(capsys):
    assert run(capsys, "build", "nosuch")[0] == 2


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_build_parse_build_identical(capsys, tmp_path, name):
    path = tmp_path / "c.net"
    assert run(capsys, "build", name, "-o", str(path))[0] == 0
    text = path.read_text()
    assert netlist.emit(netlist.parse(text)) == text


def test_modular_netlist_echoes_constants(capsys):
    _, out, _ = run(capsys, "build", "modcsa", "--bits", "5", "--modulus", "7")
    assert "# N = 5, M = 7, P = 2, Q = 4" in out.splitlines()


def test_simulate_ripple(capsys):
    code, out, _ = run(capsys, "simulate", "ripple", "-n", "4", "--set", "A=3", "--set", "B=5")
    vals = kv(out)
    assert code == 0
    assert (vals["A"], vals["B"], vals["CO"]) == ("3", "8", "0")
    assert "ancillas: clean" in out


def test_simulate_all_zero(capsys):
    code, out, _ = run(capsys, "simulate", "ripple", "-n", "4", "--zero-missing")
    assert code == 0 and set(kv(out).values()) == {"0"}


def test_simulate_requires_operands(capsys):
    code, _, err = run(capsys, "simulate", "ripple", "-n", "4", "--set", "A=3")
    assert code == 2 and "B" in err


def test_simulate_netlist_file(capsys, tmp_path):
    path = tmp_path / "r.net"
    run(capsys, "build", "ripple", "-n", "4", "-o", str(path))
    code, out, _ = run(capsys, "simulate", str(path), "--set", "A=15", "--set", "B=1")
    assert code == 0 and kv(out)["B"] == "0" and kv(out)["CO"] == "1"


def test_simulate_malformed_netlist(capsys, tmp_path):
    path = tmp_path / "bad.net"
    path.write_text("qubits 3\ncx 0 1\nccx 0 1\n")
    code, _, err = run(capsys, "simulate", str(path), "--zero-missing")
    assert code == 2 and "line 3" in err


def test_simulate_missing_file(capsys):
    assert run(capsys, "simulate", "/nonexistent/x.net")[0] == 2


def test_truthtable_qfa(capsys):
    code, out, _ = run(capsys, "truthtable", "qfa")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 17
    assert lines[0].split() == ["D", "C", "B", "A", "K", "S", "B", "A"]
    assert lines[4].split() == ["0", "0", "1", "1", "1", "0", "1", "1"]


def test_truthtable_limit(capsys):
    assert run(capsys, "truthtable", "ripple", "-n", "4", "--limit", "8")[0] == 2


@pytest.mark.parametrize("argv, trials", [
    (["qfa"], "16/16"),
    (["qmg"], "16/16"),
    (["qha"], "8/8"),
    (["csa32", "-n", "4"], "4096/4096"),
    (["modexp", "--bits", "4", "--modulus", "3", "--base", "2", "--expwidth", "2"], "4/4"),
])
def test_verify_passes(capsys, argv, trials):
    code, out, _ = run(capsys, "verify", *argv)
    assert code == 0
    assert f"pass, {trials}" in out


def test_verify_seed_changes_samples(capsys):
    code, out, _ = run(capsys, "verify", "tree", "--inputs", "9", "-L", "2", "--seed", "5")
    assert code == 0 and "10000/10000" in out


def test_resources_formats(capsys):
    code, out, _ = run(capsys, "resources", "tree", "--inputs", "8", "-L", "4", "--format", "kv")
    vals = kv(out)
    assert code == 0
    assert vals["formula.tree_qubits.closed_form"] == "56" and vals["formula.tree_qubits.relation"] == "equal"
    assert vals["formula.tree_delay.measured"] == "7"
    code, out, _ = run(capsys, "resources", "csmul", "-n", "2", "--format", "json")
    data = json.loads(out)
    assert data["formula.mul_adder_qubits.closed_form"] == 24 and data["formula.mul_total_qubits.closed_form"] == 32
    code, out, _ = run(capsys, "resources", "qfa")
    assert "depth qfa" in out


def test_export_qfa(capsys):
    code, out, _ = run(capsys, "export", "qfa")
    lines = out.splitlines()
    assert code == 0 and lines[2] == "qreg q[4];" and len(lines) == 7


def test_export_empty(capsys, tmp_path):
    path = tmp_path / "e.net"
    path.write_text("qubits 0\n")
    code, out, _ = run(capsys, "export", str(path))
    assert code == 0 and out == netlist.QASM_HEADER


def test_export_ripple_statement_count(capsys):
    _, out, _ = run(capsys, "export", "ripple", "-n", "2")
    _, res, _ = run(capsys, "resources", "ripple", "-n", "2", "--format", "kv")
    assert len(out.splitlines()) - 3 == int(kv(res)["gates.total"])


# documented construction examples, driven through the command line
@pytest.mark.parametrize("argv, check", [
    (["qfa", "--set", "A=1", "--set", "B=1", "--set", "C=0", "--set", "D=0"], {"C": 0, "D": 1}),
    (["qfa", "--set", "A=1", "--set", "B=1", "--set", "C=0", "--set", "D=1"], {"C": 0, "D": 0}),
    (["qmg", "--set", "A=0", "--set", "B=1", "--set", "C=1", "--set", "D=0"], {"C": 1, "D": 1}),
    (["qmg", "--set", "A=1", "--set", "B=1", "--set", "C=1", "--set", "D=1"], {"D": 0}),
    (["qha", "--set", "A=1", "--set", "B=1", "--set", "C=0"], {"B": 0, "C": 1}),
    (["qha", "--set", "A=1", "--set", "B=1", "--set", "C=1"], {"B": 0, "C": 0}),
    (["sum", "--set", "A=1", "--set", "B=1", "--set", "T=0"], {"T": 0}),
    (["sum", "--set", "A=1", "--set", "B=0", "--set", "T=0"], {"T": 1}),
    (["ripple", "-n", "4", "--set", "A=15", "--set", "B=1"], {"B": 0, "CO": 1}),
    (["csa32", "-n", "3", "--set", "A=7", "--set", "B=7", "--set", "C=7"], {"C": 7, "K": 7}),
    (["csmul", "-n", "2", "--set", "XS=3", "--set", "XK=0", "--set", "YS=3", "--set", "YK=0"], {"PP": 0}),
])
def test_simulate_examples(capsys, argv, check):
    code, out, _ = run(capsys, "simulate", *argv)
    vals = {k: int(v) for k, v in kv(out).items()}
    assert code == 0 and "ancillas: clean" in out
    for k, v in check.items():
        assert vals[k] == v


def _cs(vals, s, k):
    return vals[s] + 2 * vals[k]


def test_simulate_value_examples(capsys):
    _, out, _ = run(capsys, "simulate", "csa42", "-n", "3", "--set", "A=5", "--set", "B=6", "--set", "C=3",
                    "--set", "D=7")
    v = {k: int(x) for k, x in kv(out).items()}
    assert v["D"] + (v["CO"] << 3) + 2 * v["Y"] == 21
    _, out, _ = run(capsys, "simulate", "csmul", "-n", "2", "--set", "XS=3", "--set", "XK=0",
                    "--set", "YS=3", "--set", "YK=0")
    v = {k: int(x) for k, x in kv(out).items()}
    assert _cs(v, "PS", "PK") == 9
    _, out, _ = run(capsys, "simulate", "tree", "--inputs", "8", "-L", "4",
                    *[f"--set={c}={i + 1}" for i, c in enumerate("ABCDEFGH")])
    v = {k: int(x) for k, x in kv(out).items()}
    assert _cs(v, "S", "K") == 36


@pytest.mark.parametrize("argv, reg, residue", [
    (["modcsa", "--bits", "4", "--modulus", "3", "--set", "A=15", "--set", "B=15", "--set", "C=15"], "SK", 0),
    (["modcsa", "--bits", "4", "--modulus", "3", "--set", "A=1", "--set", "B=1", "--set", "C=1"], "SK", 0),
    (["modmul", "--bits", "4", "--modulus", "3", "--set", "XS=2", "--set", "YS=2", "--zero-missing"], "SK", 1),
    (["normalize", "--bits", "4", "--modulus", "3", "--set", "S=15", "--set", "K=0"], "R", 0),
    (["normalize", "--bits", "4", "--modulus", "3", "--set", "S=7", "--set", "K=0"], "R", 1),
    (["normalize", "--bits", "4", "--modulus", "3", "--set", "S=0", "--set", "K=0"], "R", 0),
    (["modexp", "--bits", "4", "--modulus", "3", "--base", "2", "--expwidth", "2", "--set", "E=2"], "R", 1),
    (["modexp", "--bits", "5", "--modulus", "7", "--base", "3", "--expwidth", "2", "--set", "E=3"], "R", 6),
])
def test_simulate_modular_examples(capsys, argv, reg, residue):
    code, out, _ = run(capsys, "simulate", *argv)
    v = {k: int(x) for k, x in kv(out).items()}
    assert code == 0 and "ancillas: clean" in out
    if reg == "R":
        assert v["R"] == residue
    else:
        assert _cs(v, "S", "K") % 3 == residue and _cs(v, "S", "K") < 16


def test_verify_failure_exit_code(capsys, monkeypatch):
    from qcsa import registry
    from qcsa.sim import VerificationReport
    entry = registry.REGISTRY["qfa"]
    broken = entry.__class__(entry.name, entry.params, entry.smallest, entry.build,
                             lambda c, lay, seed: VerificationReport(False, 1, ({"A": 0}, {"v": 1}, {"v": 0}),
                                                                     "value-mismatch"),
                             entry.labels)
    monkeypatch.setitem(registry.REGISTRY, "qfa", broken)
    code, out, _ = run(capsys, "verify", "qfa")
    assert code == 1 and "FAIL (value-mismatch)" in out
