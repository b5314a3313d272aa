"""Resource counting, closed-form cost formulas and the scaling comparison."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction

from .circuit import QFA_WEIGHTS, ROLE_KINDS, Circuit, gate_counts, weighted_depth
from .layout import Layout


def ceil_log2(n: int) -> int:
    if n < 1:
        raise ValueError("log argument must be >= 1")
    return (n - 1).bit_length()


def _need(params: dict, *names: str) -> list[int]:
    missing = [n for n in names if n not in params]
    if missing:
        raise ValueError(f"formula needs parameters {missing}")
    vals = [params[n] for n in names]
    if any(not isinstance(v, int) or v < 1 for v in vals):
        raise ValueError(f"parameters must be positive integers, got {params}")
    return vals


FORMULAS = {
    "tree_qubits": (("N", "L"), lambda N, L: (2 * N - 2) * L),
    "tree_delay": (("N",), lambda N: 4 * ceil_log2(N) - 5),
    "cs_tree_qubits": (("N", "L"), lambda N, L: (4 * N - 2) * L),
    "cs_tree_delay": (("N",), lambda N: 4 * ceil_log2(N) - 1),
    "mul_adder_qubits": (("N",), lambda N: 8 * N * N - 4 * N),
    "mul_total_qubits": (("N",), lambda N: 8 * N * N),
    "mul_adder_delay": (("N",), lambda N: 4 * ceil_log2(N) - 1),
    # two extra Toffoli delays make one QFA delay
    "mul_delay": (("N",), lambda N: 4 * ceil_log2(N)),
    "cs_modexp_delay": (("N",), lambda N: N * 4 * ceil_log2(N)),
    "ripple_modexp_delay": (("N",), lambda N: N ** 3),
    "cs_modexp_qubits": (("N",), lambda N: N * N),
    "ripple_modexp_qubits": (("N",), lambda N: N),
}


def formula_value(name: str, params: dict | None = None, **kw) -> int:
    if name not in FORMULAS:
        raise ValueError(f"unknown formula {name!r}; known: {', '.join(FORMULAS)}")
    names, fn = FORMULAS[name]
    return fn(*_need({**(params or {}), **kw}, *names))


DELAY_NORMALIZER = 10


def scaling_report(n_list: Iterable[int]) -> list[dict]:
    """Carry-save versus ripple-carry modular exponentiation, per N.

    ``delay_speedup`` uses the fixed normalization N^3 / (10 N), which
    gives 10^5 at N = 1000. ``delay_speedup_log`` replaces the 10 with
    ceil(log2 N) and ``delay_speedup_model`` divides the two delay models
    directly.
    """
    rows = []
    for N in n_list:
        if N < 2:
            raise ValueError("N must be >= 2")
        cs = formula_value("cs_modexp_delay", N=N)
        rc = formula_value("ripple_modexp_delay", N=N)
        rows.append({
            "N": N,
            "cs_delay": cs,
            "ripple_delay": rc,
            "delay_speedup": Fraction(N ** 3, DELAY_NORMALIZER * N),
            "delay_speedup_log": Fraction(N ** 3, N * ceil_log2(N)),
            "delay_speedup_model": Fraction(rc, cs),
            "cs_qubits": formula_value("cs_modexp_qubits", N=N),
            "ripple_qubits": formula_value("ripple_modexp_qubits", N=N),
            "qubit_cost": Fraction(N * N, N),
        })
    return rows


@dataclass
class FormulaEntry:
    name: str
    closed_form: int
    measured: Fraction | int
    relation: str


def relation(measured, closed_form) -> str:
    if measured == closed_form:
        return "equal"
    if closed_form > 0 and measured <= 2 * closed_form:
        return "within-bound"
    return "informational"


@dataclass
class ResourceReport:
    width: int
    qubits: dict[str, int]
    boundary: int
    gates: dict[str, int]
    unit_depth: Fraction
    qfa_depth: Fraction
    formulas: list[FormulaEntry] = field(default_factory=list)

    def as_dict(self) -> dict:
        d = {"width": self.width}
        d.update({f"qubits.{k}": v for k, v in self.qubits.items()})
        d["qubits.boundary"] = self.boundary
        d.update({f"gates.{k}": v for k, v in self.gates.items()})
        d["gates.total"] = sum(self.gates.values())
        d["depth.unit"] = self.unit_depth
        d["depth.qfa"] = self.qfa_depth
        for f in self.formulas:
            d[f"formula.{f.name}.closed_form"] = f.closed_form
            d[f"formula.{f.name}.measured"] = f.measured
            d[f"formula.{f.name}.relation"] = f.relation
        return d

    def lines(self) -> list[str]:
        return [f"{k}={v}" for k, v in self.as_dict().items()]

    def table(self) -> str:
        out = [f"{'width':<28}{self.width}"]
        for k, v in self.qubits.items():
            out.append(f"{'qubits ' + k:<28}{v}")
        out.append(f"{'qubits boundary':<28}{self.boundary}")
        for k, v in self.gates.items():
            out.append(f"{'gates ' + k:<28}{v}")
        out.append(f"{'depth unit':<28}{self.unit_depth}")
        out.append(f"{'depth qfa':<28}{self.qfa_depth}")
        if self.formulas:
            out.append("")
            out.append(f"{'name':<22}{'formula':>8}{'measured':>10}  relation")
            for f in self.formulas:
                out.append(f"{f.name:<22}{f.closed_form:>8}{str(f.measured):>10}  {f.relation}")
        return "\n".join(out)


def _entry(name: str, params: dict, measured) -> FormulaEntry:
    value = formula_value(name, params)
    return FormulaEntry(name, value, measured, relation(measured, value))


def measure(circuit: Circuit, layout: Layout | None = None) -> ResourceReport:
    qubits = {k: 0 for k in ROLE_KINDS}
    for r in circuit.roles:
        qubits[r.kind] += 1
    boundary = sum(1 for r in circuit.roles if r.boundary)
    report = ResourceReport(circuit.width, qubits, boundary, gate_counts(circuit),
                            weighted_depth(circuit), weighted_depth(circuit, QFA_WEIGHTS))
    if layout is None:
        return report
    p = layout.params
    # boundary and carry-out wires hold columns the formulas do not count
    core = circuit.width - boundary - qubits["carryout"]
    if layout.name == "tree":
        report.formulas.append(_entry("tree_qubits", p, core))
        report.formulas.append(_entry("tree_delay", p, report.qfa_depth))
    elif layout.name == "csa42":
        report.formulas.append(_entry("tree_qubits", {"N": 4, "L": p["n"]}, core))
        report.formulas.append(_entry("tree_delay", {"N": 4}, report.qfa_depth))
    elif layout.name == "csmul":
        n = p["n"]
        report.formulas.append(_entry("mul_adder_qubits", {"N": n}, core - qubits["operand"]))
        report.formulas.append(_entry("mul_total_qubits", {"N": n}, core))
        report.formulas.append(_entry("mul_delay", {"N": n}, report.qfa_depth))
    return report
