"""Reversible-gate intermediate representation.

Every construction in the package emits into :class:`Circuit`, an immutable
record of a wire count, an ordered gate list, named registers and a role
for every wire. :class:`CircuitBuilder` is the mutable front end used by the
builders.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction


class CircuitError(ValueError):
    """Raised on structurally invalid circuits, gates or placements."""


class GateKind(enum.Enum):
    NOT = "x"
    CNOT = "cx"
    TOFFOLI = "ccx"

    @property
    def arity(self) -> int:
        return {GateKind.NOT: 1, GateKind.CNOT: 2, GateKind.TOFFOLI: 3}[self]


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    controls: tuple[int, ...]
    target: int

    def __post_init__(self):
        if len(self.controls) + 1 != self.kind.arity:
            raise CircuitError(f"{self.kind.name} takes {self.kind.arity - 1} controls")
        wires = self.wires
        if any(w < 0 for w in wires):
            raise CircuitError(f"negative wire index in {wires}")
        if len(set(wires)) != len(wires):
            raise CircuitError(f"duplicate wire index in {self.kind.name}{wires}")

    @property
    def wires(self) -> tuple[int, ...]:
        return self.controls + (self.target,)

    @classmethod
    def x(cls, t: int) -> "Gate":
        return cls(GateKind.NOT, (), t)

    @classmethod
    def cx(cls, c: int, t: int) -> "Gate":
        return cls(GateKind.CNOT, (c,), t)

    @classmethod
    def ccx(cls, c1: int, c2: int, t: int) -> "Gate":
        return cls(GateKind.TOFFOLI, (c1, c2), t)

    def remap(self, wire_map: Sequence[int] | Mapping[int, int]) -> "Gate":
        return Gate(self.kind, tuple(wire_map[c] for c in self.controls), wire_map[self.target])

    def __str__(self) -> str:
        return " ".join([self.kind.value, *map(str, self.wires)])


ROLE_KINDS = ("operand", "ancilla", "const0", "const1", "result", "carryout")


@dataclass(frozen=True)
class WireRole:
    """Role of one wire.

    ``meta`` is a free token. Builders use ``clobbered`` on operand wires
    that are overwritten in place and ``boundary`` on wires that only exist
    to hold overflow columns.
    """

    kind: str = "ancilla"
    meta: str = ""

    def __post_init__(self):
        if self.kind not in ROLE_KINDS:
            raise CircuitError(f"unknown role {self.kind!r}")
        if any(ch.isspace() for ch in self.meta):
            raise CircuitError(f"role meta must be a single token, got {self.meta!r}")

    @property
    def preserved(self) -> bool:
        return self.kind == "operand" and self.meta != "clobbered"

    @property
    def boundary(self) -> bool:
        return self.meta == "boundary"

    @property
    def must_start_zero(self) -> bool:
        return self.kind != "operand"

    @property
    def must_end_zero(self) -> bool:
        return self.kind in ("ancilla", "const0", "const1")


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()
    registers: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    roles: tuple[WireRole, ...] | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.width < 0:
            raise CircuitError("width must be non-negative")
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "notes", tuple(self.notes))
        regs = {name: tuple(ws) for name, ws in self.registers.items()}
        object.__setattr__(self, "registers", regs)
        if self.roles is None:
            object.__setattr__(self, "roles", tuple(WireRole() for _ in range(self.width)))
        else:
            object.__setattr__(self, "roles", tuple(self.roles))
        if len(self.roles) != self.width:
            raise CircuitError(f"role table has {len(self.roles)} entries for width {self.width}")
        for g in self.gates:
            _check_range(g, self.width)
        seen: dict[int, str] = {}
        for name, ws in regs.items():
            if not name or any(ch.isspace() for ch in name):
                raise CircuitError(f"bad register name {name!r}")
            for w in ws:
                if not 0 <= w < self.width:
                    raise CircuitError(f"register {name} wire {w} out of range")
                if w in seen:
                    raise CircuitError(f"wire {w} in registers {seen[w]} and {name}")
                seen[w] = name

    def __len__(self) -> int:
        return len(self.gates)

    def register(self, name: str) -> tuple[int, ...]:
        try:
            return self.registers[name]
        except KeyError:
            raise CircuitError(f"no register named {name!r}") from None

    def wires_with(self, kind: str) -> list[int]:
        return [w for w, r in enumerate(self.roles) if r.kind == kind]


def _check_range(gate: Gate, width: int) -> None:
    for w in gate.wires:
        if w >= width:
            raise CircuitError(f"wire {w} out of range for width {width}")


def append_gate(circuit: Circuit, gate: Gate) -> Circuit:
    _check_range(gate, circuit.width)
    return Circuit(circuit.width, circuit.gates + (gate,), circuit.registers, circuit.roles, circuit.notes)


def compose(outer_width: int, placements: Iterable[tuple[Circuit, Sequence[int]]], *,
            registers: Mapping[str, Sequence[int]] | None = None,
            roles: Sequence[WireRole] | None = None) -> Circuit:
    """Concatenate sub-circuits, each remapped through its wire map."""
    gates: list[Gate] = []
    for sub, wire_map in placements:
        wire_map = list(wire_map)
        if len(wire_map) != sub.width:
            raise CircuitError(f"wire map has {len(wire_map)} entries for width {sub.width}")
        if len(set(wire_map)) != len(wire_map):
            raise CircuitError(f"non-injective wire map {wire_map}")
        if any(not 0 <= w < outer_width for w in wire_map):
            raise CircuitError(f"wire map {wire_map} leaves [0, {outer_width})")
        gates.extend(g.remap(wire_map) for g in sub.gates)
    return Circuit(outer_width, tuple(gates), registers or {}, roles)


def inverse(circuit: Circuit) -> Circuit:
    # every primitive is self-inverse
    return Circuit(circuit.width, tuple(reversed(circuit.gates)), circuit.registers,
                   circuit.roles, circuit.notes)


def gate_counts(circuit: Circuit | Iterable[Gate]) -> dict[str, int]:
    gates = circuit.gates if isinstance(circuit, Circuit) else circuit
    counts = {k.name: 0 for k in GateKind}
    for g in gates:
        counts[g.kind.name] += 1
    return counts


UNIT_WEIGHTS = {"NOT": Fraction(1), "CNOT": Fraction(1), "TOFFOLI": Fraction(1)}
QFA_WEIGHTS = {"NOT": Fraction(0), "CNOT": Fraction(0), "TOFFOLI": Fraction(1, 2)}


def weighted_depth(circuit: Circuit | Iterable[Gate], weights: Mapping[str, object] | None = None,
                   width: int | None = None) -> Fraction:
    """Longest weighted path through gates that share wires.

    Two gates conflict iff they touch a common wire, so the ASAP schedule
    over per-wire ready times gives the critical path exactly.
    """
    weights = UNIT_WEIGHTS if weights is None else weights
    w = {k.name: Fraction(weights.get(k.name, 0)) for k in GateKind}
    if any(v < 0 for v in w.values()):
        raise CircuitError("weights must be non-negative")
    gates = circuit.gates if isinstance(circuit, Circuit) else list(circuit)
    # integer arithmetic over a common denominator
    den = 1
    for v in w.values():
        den = den * v.denominator // _gcd(den, v.denominator)
    iw = {k: int(v * den) for k, v in w.items()}
    ready: dict[int, int] = {}
    best = 0
    for g in gates:
        start = max((ready.get(q, 0) for q in g.wires), default=0)
        end = start + iw[g.kind.name]
        for q in g.wires:
            ready[q] = end
        best = max(best, end)
    return Fraction(best, den)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


class CircuitBuilder:
    """Mutable wire allocator and gate recorder.

    Constant-preparation NOT gates go into a separate prologue that is
    mirrored at the end of the circuit, so constant wires enter and exit 0.
    """

    def __init__(self):
        self.roles: list[WireRole] = []
        self.registers: dict[str, list[int]] = {}
        self.gates: list[Gate] = []
        self.prep: list[Gate] = []
        self.notes: list[str] = []
        self._free: list[int] = []

    @property
    def width(self) -> int:
        return len(self.roles)

    def wire(self, kind: str = "ancilla", meta: str = "", reuse: bool = False) -> int:
        if reuse and kind == "ancilla" and not meta and self._free:
            return self._free.pop()
        self.roles.append(WireRole(kind, meta))
        return len(self.roles) - 1

    def wires(self, n: int, kind: str = "ancilla", meta: str = "", reuse: bool = False) -> list[int]:
        return [self.wire(kind, meta, reuse) for _ in range(n)]

    def release(self, wires: Iterable[int]) -> None:
        """Return restored plain ancillas to the pool for later reuse."""
        for w in wires:
            if self.roles[w] == WireRole("ancilla"):
                self._free.append(w)
        self._free.sort(reverse=True)

    def register(self, name: str, wires: Sequence[int]) -> list[int]:
        if name in self.registers:
            raise CircuitError(f"register {name} already defined")
        self.registers[name] = list(wires)
        return self.registers[name]

    def new_register(self, name: str, n: int, kind: str = "ancilla", meta: str = "") -> list[int]:
        return self.register(name, self.wires(n, kind, meta))

    def set_role(self, wire: int, kind: str, meta: str = "") -> None:
        self.roles[wire] = WireRole(kind, meta)

    def constant(self, name: str, value: int, n: int) -> list[int]:
        """Register holding a classical constant, set in the prologue."""
        ws = []
        for i in range(n):
            bit = (value >> i) & 1
            w = self.wire("const1" if bit else "const0", name)
            if bit:
                self.prep.append(Gate.x(w))
            ws.append(w)
        return self.register(name, ws)

    def x(self, t: int) -> None:
        self.gates.append(Gate.x(t))

    def cx(self, c: int, t: int) -> None:
        self.gates.append(Gate.cx(c, t))

    def ccx(self, c1: int, c2: int, t: int) -> None:
        self.gates.append(Gate.ccx(c1, c2, t))

    def extend(self, gates: Iterable[Gate]) -> None:
        self.gates.extend(gates)

    def mark(self) -> int:
        return len(self.gates)

    def undo(self, start: int, stop: int | None = None) -> None:
        """Append the inverse of the gates recorded in ``[start, stop)``."""
        stop = len(self.gates) if stop is None else stop
        self.gates.extend(reversed(self.gates[start:stop]))

    @property
    def offset(self) -> int:
        """Index shift applied to body gate positions in the built circuit."""
        return len(self.prep)

    def build(self) -> Circuit:
        gates = self.prep + self.gates + self.prep[::-1]
        return Circuit(self.width, tuple(gates), self.registers, tuple(self.roles), tuple(self.notes))
