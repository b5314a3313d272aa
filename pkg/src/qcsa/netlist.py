"""Plain-text netlist and OpenQASM 2.0 serialization."""

from __future__ import annotations

import re

from .circuit import Circuit, CircuitError, Gate, GateKind, WireRole

_OPCODES = {k.value: k for k in GateKind}


class NetlistError(CircuitError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def emit(circuit: Circuit) -> str:
    lines = [f"# {note}" if note else "#" for note in circuit.notes]
    lines.append(f"qubits {circuit.width}")
    for name, wires in circuit.registers.items():
        lines.append(" ".join(["reg", name, *map(str, wires)]))
    for i, role in enumerate(circuit.roles):
        lines.append(f"role {i} {role.kind} {role.meta}".rstrip())
    lines.extend(str(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


def _int(tok: str, lineno: int) -> int:
    if not tok.isdigit():
        raise NetlistError(lineno, f"expected a non-negative integer, got {tok!r}")
    return int(tok)


def parse(text: str) -> Circuit:
    notes: list[str] = []
    width = None
    registers: dict[str, list[int]] = {}
    roles: dict[int, WireRole] = {}
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if width is None:
                notes.append(line[1:].strip())
            continue
        toks = line.split()
        op, args = toks[0], toks[1:]
        if width is None:
            if op != "qubits" or len(args) != 1:
                raise NetlistError(lineno, "netlist must start with 'qubits <N>'")
            width = _int(args[0], lineno)
            continue
        try:
            if op == "reg":
                if not args:
                    raise NetlistError(lineno, "reg needs a name")
                if args[0] in registers:
                    raise NetlistError(lineno, f"duplicate register {args[0]}")
                registers[args[0]] = [_int(a, lineno) for a in args[1:]]
            elif op == "role":
                if len(args) not in (2, 3):
                    raise NetlistError(lineno, "role takes '<i> <kind> [meta]'")
                i = _int(args[0], lineno)
                if i >= width:
                    raise NetlistError(lineno, f"role for wire {i} out of range")
                if i in roles:
                    raise NetlistError(lineno, f"duplicate role for wire {i}")
                roles[i] = WireRole(args[1], args[2] if len(args) == 3 else "")
            elif op in _OPCODES:
                kind = _OPCODES[op]
                if len(args) != kind.arity:
                    raise NetlistError(lineno, f"{op} takes {kind.arity} wire indices")
                ws = [_int(a, lineno) for a in args]
                gate = Gate(kind, tuple(ws[:-1]), ws[-1])
                if max(ws) >= width:
                    raise NetlistError(lineno, f"wire index out of range for width {width}")
                gates.append(gate)
            elif op == "qubits":
                raise NetlistError(lineno, "repeated 'qubits' header")
            else:
                raise NetlistError(lineno, f"unknown statement {op!r}")
        except NetlistError:
            raise
        except CircuitError as exc:
            raise NetlistError(lineno, str(exc)) from None
    if width is None:
        raise NetlistError(0, "missing 'qubits <N>' header")
    if roles and len(roles) != width:
        missing = min(set(range(width)) - roles.keys())
        raise NetlistError(0, f"no role for wire {missing}")
    role_table = tuple(roles[i] for i in range(width)) if roles else None
    try:
        return Circuit(width, tuple(gates), registers, role_table, tuple(notes))
    except CircuitError as exc:
        raise NetlistError(0, str(exc)) from None


QASM_HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def to_qasm(circuit: Circuit) -> str:
    out = [QASM_HEADER.rstrip("\n")]
    if circuit.width:
        out.append(f"qreg q[{circuit.width}];")
    for g in circuit.gates:
        out.append(f"{g.kind.value} " + ",".join(f"q[{w}]" for w in g.wires) + ";")
    return "\n".join(out) + "\n"


_QASM_GATE = re.compile(r"^(x|cx|ccx)\s+(q\[\d+\](?:\s*,\s*q\[\d+\])*)\s*;$")
_QREG = re.compile(r"^qreg\s+q\[(\d+)\]\s*;$")


def from_qasm(text: str) -> Circuit:
    """Read back the subset of OpenQASM 2.0 that :func:`to_qasm` writes."""
    width = 0
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("//")[0].strip()
        if not line or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        m = _QREG.match(line)
        if m:
            width = int(m.group(1))
            continue
        m = _QASM_GATE.match(line)
        if not m:
            raise NetlistError(lineno, f"unsupported QASM statement {line!r}")
        ws = [int(w) for w in re.findall(r"\d+", m.group(2))]
        kind = _OPCODES[m.group(1)]
        if len(ws) != kind.arity:
            raise NetlistError(lineno, f"{kind.value} takes {kind.arity} qubits")
        if max(ws) >= width:
            raise NetlistError(lineno, "qubit index out of range")
        gates.append(Gate(kind, tuple(ws[:-1]), ws[-1]))
    return Circuit(width, tuple(gates))
