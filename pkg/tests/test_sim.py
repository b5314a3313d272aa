import time

import numpy as np
import pytest
from hypothesis import given, settings

from qcsa.adders import build_csa_3to2, build_qfa, build_qha, build_qmg, build_ripple_adder
from qcsa.circuit import Circuit, CircuitBuilder, CircuitError, Gate, inverse
from qcsa.reference import QFA_TABLE, QHA_TABLE, QMG_TABLE, table_as_permutation
from qcsa.sim import (EXHAUSTIVE, Probe, Sample, VerificationReport, decode, run, run_batch, run_int,
                      simulate, truth_table, verify_against_oracle, verify_permutation)

from strategies import circuits


def test_run_qfa_rows():
    assert run(build_qfa(), (1, 1, 0, 0)) == (1, 1, 0, 1)
    assert run(build_qfa(), (1, 1, 1, 1)) == (1, 1, 1, 0)


def test_run_empty_is_identity():
    assert run(Circuit(3), (1, 0, 1)) == (1, 0, 1)


def test_run_rejects_wrong_length():
    with pytest.raises(CircuitError):
        run(build_qfa(), (1, 0))


@pytest.mark.parametrize("build, golden, rows", [
    (build_qfa, QFA_TABLE, 16), (build_qmg, QMG_TABLE, 16), (build_qha, QHA_TABLE, 8)])
def test_truth_tables_match_golden(build, golden, rows):
    table = truth_table(build())
    assert len(table.rows) == rows
    assert table.rows == table_as_permutation(golden)


def test_truth_table_format_msb_left():
    text = truth_table(build_qha()).format(["A", "B", "C"], ["A", "S", "K"])
    lines = text.splitlines()
    assert lines[0].split() == ["C", "B", "A", "K", "S", "A"]
    # row for input 3 (A=1, B=1, C=0)
    assert lines[4].split() == ["0", "1", "1", "1", "0", "1"]


def test_truth_table_width_limit():
    with pytest.raises(CircuitError):
        truth_table(Circuit(21))


def test_run_batch_matches_run_int():
    c, _ = build_ripple_adder(3)
    xs = np.arange(1 << c.width, dtype=np.int64)
    planes = np.array([(xs >> w) & 1 for w in range(c.width)], dtype=bool)
    run_batch(c, planes)
    ys = sum(planes[w].astype(np.int64) << w for w in range(c.width))
    assert ys.tolist() == [run_int(c, int(x)) for x in xs]


@settings(max_examples=100, deadline=None)
@given(circuits(max_width=10))
def test_run_is_bijection(c):
    outs = truth_table(c).outputs()
    assert sorted(outs) == list(range(1 << c.width))


@settings(max_examples=100, deadline=None)
@given(circuits(max_width=10))
def test_inverse_table_is_inverse_permutation(c):
    fwd = truth_table(c).outputs()
    back = truth_table(inverse(c)).outputs()
    assert all(back[y] == x for x, y in enumerate(fwd))


def test_budget_ten_thousand_gates():
    width = 64
    rng = np.random.default_rng(7)
    gates = []
    for _ in range(10_000):
        a, b, t = rng.choice(width, 3, replace=False).tolist()
        gates.append(Gate.ccx(a, b, t))
    c = Circuit(width, tuple(gates))
    t0 = time.perf_counter()
    for x in range(5):
        run_int(c, x * 0x123456789)
    assert (time.perf_counter() - t0) / 5 < 0.2


def test_verify_permutation_passes():
    assert verify_permutation(build_qfa()).passed
    assert verify_permutation(build_ripple_adder(3)[0]).passed


def test_verify_permutation_catches_duplicate_outputs():
    # stub evaluator standing in for a corrupted netlist
    report = verify_permutation(build_qfa(), evaluator=lambda x: x & ~1)
    assert not report.passed
    assert report.counterexample[0] == {"state": 1}


def test_report_consistency_enforced():
    with pytest.raises(ValueError):
        VerificationReport(True, 1, ({}, {}, {}))
    with pytest.raises(ValueError):
        VerificationReport(False, 1)


def _ripple_oracle(v):
    return {"A": v["A"], "B": (v["A"] + v["B"]) % 16, "CO": (v["A"] + v["B"]) >> 4}


def test_oracle_ripple_exhaustive():
    c, _ = build_ripple_adder(4)
    report = verify_against_oracle(c, _ripple_oracle, inputs=("A", "B"))
    assert report.passed and report.trials == 256


def test_oracle_csa_exhaustive():
    c, layout = build_csa_3to2(4)
    report = verify_against_oracle(c, lambda v: {"value": v["A"] + v["B"] + v["C"]},
                                   observe=lambda r: {"value": layout.value(r)})
    assert report.passed and report.trials == 4096


def test_oracle_negative_control():
    c, layout = build_ripple_adder(4)
    report = verify_against_oracle(c, lambda v: {"value": v["A"] + v["B"] + 1},
                                   observe=lambda r: {"value": layout.value(r)})
    assert not report.passed
    assert report.failure_kind == "value-mismatch"
    assert report.counterexample[0] == {"A": 0, "B": 0}
    assert report.trials == 1
    assert "FAIL (value-mismatch)" in report.summary()


def test_oracle_detects_dirty_ancilla():
    b = CircuitBuilder()
    a = b.new_register("A", 2, "operand")
    t = b.wire()
    b.cx(a[1], t)
    report = verify_against_oracle(b.build(), lambda v: {"A": v["A"]})
    assert report.failure_kind == "ancilla-dirty"
    assert report.counterexample[0] == {"A": 2}


def test_oracle_detects_clobbered_operand():
    b = CircuitBuilder()
    a = b.new_register("A", 2, "operand")
    r = b.new_register("R", 1, "result")
    b.cx(a[0], r[0])
    b.cx(r[0], a[1])
    report = verify_against_oracle(b.build(), lambda v: {"R": v["A"] & 1})
    assert report.failure_kind == "operand-clobbered"
    assert report.counterexample[0] == {"A": 1}


def test_oracle_probe_violation():
    b = CircuitBuilder()
    a = b.new_register("A", 2, "operand")
    b.x(a[0])
    b.x(a[0])
    c = b.build()
    ok = verify_against_oracle(c, lambda v: {"A": v["A"]}, probes=[Probe(0, a[0], a[1])])
    assert not ok.passed and ok.failure_kind == "invariant-violated"
    assert ok.counterexample[0] == {"A": 3}
    fine = verify_against_oracle(c, lambda v: {"A": v["A"]}, probes=[Probe(1, a[0], a[1])])
    assert not fine.passed and fine.counterexample[0] == {"A": 2}


def test_oracle_sampled_is_seeded():
    c, layout = build_ripple_adder(12)
    oracle = lambda v: {"value": v["A"] + v["B"]}  # noqa: E731
    obs = lambda r: {"value": layout.value(r)}  # noqa: E731
    r1 = verify_against_oracle(c, oracle, observe=obs, domain=Sample(500, seed=3))
    assert r1.passed and r1.trials == 500
    with pytest.raises(CircuitError):
        verify_against_oracle(c, oracle, observe=obs, domain=EXHAUSTIVE)


def test_oracle_requires_all_operands():
    c, _ = build_ripple_adder(2)
    with pytest.raises(CircuitError, match="not covered"):
        verify_against_oracle(c, lambda v: {}, inputs=("A",))


def test_simulate_and_decode():
    c, _ = build_ripple_adder(4)
    out = simulate(c, {"A": 3, "B": 5})
    assert out["B"] == 8 and out["CO"] == 0 and out["A"] == 3
    assert decode(c, 0)["B"] == 0
