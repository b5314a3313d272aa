"""Basis-state simulation and the verification harness.

Single states run on Python integers. Batches run bit-sliced: one boolean
numpy row per wire, one column per basis state, so a Toffoli is a single
``t ^= a & b`` over the whole batch.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .circuit import Circuit, CircuitError, GateKind

DEFAULT_SEED = 20240101
TRUTH_TABLE_LIMIT = 20
_CHUNK = 1 << 16


def run(circuit: Circuit, state: Sequence[int]) -> tuple[int, ...]:
    if len(state) != circuit.width:
        raise CircuitError(f"state has {len(state)} bits, circuit has {circuit.width} wires")
    x = sum((int(b) & 1) << i for i, b in enumerate(state))
    y = run_int(circuit, x)
    return tuple((y >> i) & 1 for i in range(circuit.width))


def run_int(circuit: Circuit, x: int) -> int:
    """Run on a basis state packed as an integer (bit i = wire i)."""
    for g in circuit.gates:
        t = 1 << g.target
        if g.kind is GateKind.NOT:
            x ^= t
        elif g.kind is GateKind.CNOT:
            if x >> g.controls[0] & 1:
                x ^= t
        elif x >> g.controls[0] & 1 and x >> g.controls[1] & 1:
            x ^= t
    return x


def run_batch(circuit: Circuit, planes: np.ndarray, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Apply gates ``[start, stop)`` in place to a (width, batch) bool array."""
    if planes.shape[0] != circuit.width:
        raise CircuitError(f"batch has {planes.shape[0]} wire rows, circuit has {circuit.width}")
    for g in circuit.gates[start:stop]:
        row = planes[g.target]
        if g.kind is GateKind.NOT:
            np.logical_not(row, out=row)
        elif g.kind is GateKind.CNOT:
            row ^= planes[g.controls[0]]
        else:
            row ^= planes[g.controls[0]] & planes[g.controls[1]]
    return planes


def encode(circuit: Circuit, values: Mapping[str, int]) -> int:
    x = 0
    for name, v in values.items():
        wires = circuit.register(name)
        if v < 0 or v >> len(wires):
            raise CircuitError(f"value {v} does not fit register {name} ({len(wires)} bits)")
        for i, w in enumerate(wires):
            x |= ((v >> i) & 1) << w
    return x


def decode(circuit: Circuit, x: int) -> dict[str, int]:
    return {name: sum(((x >> w) & 1) << i for i, w in enumerate(ws))
            for name, ws in circuit.registers.items()}


def simulate(circuit: Circuit, values: Mapping[str, int]) -> dict[str, int]:
    """Set registers, run, and read every register back."""
    return decode(circuit, run_int(circuit, encode(circuit, values)))


def dirty_wires(circuit: Circuit, x: int) -> list[int]:
    return [w for w, r in enumerate(circuit.roles) if r.must_end_zero and (x >> w) & 1]


@dataclass
class TruthTable:
    width: int
    rows: list[tuple[int, int]]

    def outputs(self) -> list[int]:
        return [y for _, y in self.rows]

    def format(self, in_labels: Sequence[str] | None = None, out_labels: Sequence[str] | None = None) -> str:
        """Render with the most significant wire in the leftmost column."""
        def bits(v: int) -> str:
            return " ".join(str((v >> i) & 1) for i in reversed(range(self.width)))
        lines = []
        if in_labels and out_labels:
            lines.append(" ".join(reversed(in_labels)) + "   " + " ".join(reversed(out_labels)))
        lines.extend(f"{bits(x)}   {bits(y)}" for x, y in self.rows)
        return "\n".join(lines)


def truth_table(circuit: Circuit, limit: int = TRUTH_TABLE_LIMIT) -> TruthTable:
    if circuit.width > limit:
        raise CircuitError(f"width {circuit.width} exceeds truth-table limit {limit}")
    n = 1 << circuit.width
    xs = np.arange(n, dtype=np.int64)
    planes = np.array([(xs >> w) & 1 for w in range(circuit.width)], dtype=bool).reshape(circuit.width, n)
    run_batch(circuit, planes)
    ys = np.zeros(n, dtype=np.int64)
    for w in range(circuit.width):
        ys |= planes[w].astype(np.int64) << w
    return TruthTable(circuit.width, list(zip(range(n), ys.tolist())))


@dataclass
class VerificationReport:
    passed: bool
    trials: int
    counterexample: tuple[dict, dict, dict] | None = None
    failure_kind: str | None = None
    detail: str = ""

    def __post_init__(self):
        if self.passed != (self.counterexample is None):
            raise ValueError("passed must be true exactly when no counterexample is recorded")

    def summary(self) -> str:
        if self.passed:
            return f"pass, {self.trials}/{self.trials}" + (f" {self.detail}" if self.detail else "")
        inputs, expected, actual = self.counterexample
        return (f"FAIL ({self.failure_kind}) after {self.trials} trials: inputs {inputs}, "
                f"expected {expected}, actual {actual}" + (f"; {self.detail}" if self.detail else ""))


def verify_permutation(circuit: Circuit, evaluator: Callable[[int], int] | None = None,
                       limit: int = TRUTH_TABLE_LIMIT) -> VerificationReport:
    """Check that the basis map is injective.

    ``evaluator`` replaces the simulator, which lets tests feed a deliberately
    broken mapping through the same check.
    """
    if circuit.width > limit:
        raise CircuitError(f"width {circuit.width} exceeds exhaustive limit {limit}")
    n = 1 << circuit.width
    if evaluator is None:
        outs = truth_table(circuit, limit).outputs()
    else:
        outs = [evaluator(x) for x in range(n)]
    seen: dict[int, int] = {}
    for x, y in enumerate(outs):
        if y in seen:
            return VerificationReport(False, x + 1, ({"state": x}, {"distinct_from": seen[y]}, {"state": y}),
                                      "value-mismatch", f"inputs {seen[y]} and {x} both map to {y}")
        seen[y] = x
    return VerificationReport(True, n)


@dataclass(frozen=True)
class Sample:
    count: int
    seed: int = DEFAULT_SEED


EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True)
class Probe:
    """Before gate ``gate``, wires ``a`` and ``b`` must never both be 1."""

    gate: int
    a: int
    b: int


def operand_registers(circuit: Circuit) -> list[str]:
    return [name for name, ws in circuit.registers.items()
            if ws and all(circuit.roles[w].kind == "operand" for w in ws)]


def _domain_values(widths: list[int], domain, lo: int, hi: int) -> list[np.ndarray]:
    if domain == EXHAUSTIVE:
        idx = np.arange(lo, hi, dtype=np.int64)
        out = []
        for w in widths:
            out.append(idx & ((1 << w) - 1))
            idx = idx >> w
        return out
    raise AssertionError


def _sample_values(widths: list[int], sample: Sample) -> list[np.ndarray]:
    rng = np.random.default_rng(sample.seed)
    out = []
    for w in widths:
        if w > 62:
            raise CircuitError("sampling supports registers up to 62 bits")
        out.append(rng.integers(0, 1 << w, size=sample.count, dtype=np.int64))
    return out


def _as_int_array(planes: np.ndarray, wires: Sequence[int]) -> np.ndarray:
    if len(wires) > 62:
        acc = np.zeros(planes.shape[1], dtype=object)
        for i, w in enumerate(wires):
            acc += planes[w].astype(object) * (1 << i)
        return acc
    acc = np.zeros(planes.shape[1], dtype=np.int64)
    for i, w in enumerate(wires):
        acc |= planes[w].astype(np.int64) << i
    return acc


def verify_against_oracle(
    circuit: Circuit,
    oracle: Callable[[dict[str, np.ndarray]], Mapping[str, Any]],
    *,
    inputs: Sequence[str] | None = None,
    presets: Mapping[str, int] | None = None,
    observe: Callable[[dict[str, np.ndarray]], Mapping[str, Any]] | None = None,
    domain: str | Sample = EXHAUSTIVE,
    probes: Sequence[Probe] = (),
    limit: int = TRUTH_TABLE_LIMIT,
) -> VerificationReport:
    """Check a circuit against a classical oracle over a domain of inputs.

    ``inputs`` are the registers swept by the domain and ``presets`` fixes the
    remaining operand registers. Every other wire enters 0. ``oracle`` maps the
    input values to expected observations and ``observe`` maps the registers
    after the run to actual observations (default: the registers themselves).
    Both work on whole numpy batches. Beyond the value check, preserved
    operand wires must be unchanged and ancilla/constant wires must exit 0.
    The report carries the first failing point in domain order.
    """
    presets = dict(presets or {})
    inputs = list(operand_registers(circuit) if inputs is None else inputs)
    covered = set()
    for name in inputs + list(presets):
        covered.update(circuit.register(name))
    loose = [w for w, r in enumerate(circuit.roles) if r.kind == "operand" and w not in covered]
    if loose:
        raise CircuitError(f"operand wires {loose} not covered by inputs or presets")
    observe = observe or (lambda regs: regs)
    widths = [len(circuit.register(n)) for n in inputs]
    total_bits = sum(widths)
    if domain == EXHAUSTIVE:
        if total_bits > limit:
            raise CircuitError(f"{total_bits} input bits exceed the exhaustive limit {limit}")
        count = 1 << total_bits
        sampled = None
    else:
        count = domain.count
        sampled = _sample_values(widths, domain)

    must_zero = [w for w, r in enumerate(circuit.roles) if r.must_end_zero]
    keep = [w for w, r in enumerate(circuit.roles) if r.preserved]
    probes = sorted(probes, key=lambda p: p.gate)

    for lo in range(0, count, _CHUNK):
        hi = min(count, lo + _CHUNK)
        vals = (_domain_values(widths, domain, lo, hi) if sampled is None
                else [v[lo:hi] for v in sampled])
        n = hi - lo
        planes = np.zeros((circuit.width, n), dtype=bool)
        in_regs: dict[str, np.ndarray] = {}
        for name, v in zip(inputs, vals):
            in_regs[name] = v
            for i, w in enumerate(circuit.register(name)):
                planes[w] = (v >> i) & 1
        for name, v in presets.items():
            for i, w in enumerate(circuit.register(name)):
                planes[w] = (v >> i) & 1
        before = planes[keep].copy()

        fail = np.full(n, -1, dtype=np.int64)  # index into kinds, -1 = ok
        kinds = ["value-mismatch", "operand-clobbered", "ancilla-dirty", "invariant-violated"]
        pos = 0
        for p in probes:
            run_batch(circuit, planes, pos, p.gate)
            pos = p.gate
            bad = planes[p.a] & planes[p.b]
            fail[(fail < 0) & bad] = 3
        run_batch(circuit, planes, pos, None)

        out_regs = {name: _as_int_array(planes, ws) for name, ws in circuit.registers.items()}
        expected = oracle(dict(in_regs, **{k: np.full(n, v, dtype=np.int64) for k, v in presets.items()}))
        actual = observe(out_regs)
        mismatch = np.zeros(n, dtype=bool)
        for key, exp in expected.items():
            if key not in actual:
                raise CircuitError(f"observation has no field {key!r}")
            mismatch |= np.asarray(np.broadcast_to(actual[key], (n,)) != np.broadcast_to(exp, (n,)), dtype=bool)
        clobbered = (planes[keep] != before).any(axis=0) if keep else np.zeros(n, dtype=bool)
        dirty = planes[must_zero].any(axis=0) if must_zero else np.zeros(n, dtype=bool)
        # the first failing check at a point names the failure
        for code, mask in ((2, dirty), (1, clobbered), (0, mismatch)):
            fail[mask] = code
        bad_idx = np.flatnonzero(fail >= 0)
        if bad_idx.size:
            k = int(bad_idx[0])
            point = {name: int(in_regs[name][k]) for name in inputs}
            point.update(presets)
            exp = {key: _scalar(v, k) for key, v in expected.items()}
            act = {key: _scalar(actual[key], k) for key in expected}
            kind = kinds[int(fail[k])]
            detail = ""
            if kind == "ancilla-dirty":
                detail = "dirty wires " + str([w for w in must_zero if planes[w, k]])
            elif kind == "operand-clobbered":
                detail = "changed wires " + str([w for j, w in enumerate(keep) if planes[w, k] != before[j, k]])
            elif kind == "invariant-violated":
                detail = "probe wires both 1 " + str([(p.gate, p.a, p.b) for p in probes])
            return VerificationReport(False, lo + k + 1, (point, exp, act), kind, detail)
    return VerificationReport(True, count)


def _scalar(v, k: int) -> int:
    arr = np.asarray(v)
    return int(arr) if arr.ndim == 0 else int(arr[k])
