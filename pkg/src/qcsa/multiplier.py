"""Carry-save multiplier: Toffoli partial products, tree sum, Toffoli uncompute."""

from __future__ import annotations

from dataclasses import dataclass

from .adders import tree_sum
from .circuit import Circuit, CircuitBuilder, Gate
from .compress import Compressor
from .layout import Layout

# carry vectors sit one column up
OFFSETS = {"XS": 0, "XK": 1, "YS": 0, "YK": 1}


@dataclass(frozen=True)
class PPTerm:
    x: tuple[str, int]
    y: tuple[str, int]
    shift: int
    row: int


@dataclass(frozen=True)
class PartialProductPlan:
    n: int
    terms: tuple[PPTerm, ...]
    rows: tuple[tuple[int, ...], ...]


def plan_partial_products(n: int) -> PartialProductPlan:
    """One row per (x vector, y vector, y bit), n terms per row."""
    if n < 1:
        raise ValueError("multiplier needs n >= 1")
    terms: list[PPTerm] = []
    rows: list[tuple[int, ...]] = []
    for xv in ("XS", "XK"):
        for yv in ("YS", "YK"):
            for j in range(n):
                idx = []
                for i in range(n):
                    idx.append(len(terms))
                    terms.append(PPTerm((xv, i), (yv, j), i + j + OFFSETS[xv] + OFFSETS[yv], len(rows)))
                rows.append(tuple(idx))
    return PartialProductPlan(n, tuple(terms), tuple(rows))


def _x_index(reg: str, bit: int, n: int) -> int:
    return bit + (n if reg.endswith("K") else 0)


def build_cs_multiplier(n: int, fanout: bool = False) -> tuple[Circuit, Layout]:
    """Multiply two carry-save operands into a carry-save product.

    The create layer is ordered by an edge colouring of the (x bit, y bit)
    pairs, so it takes 2n Toffoli steps. With ``fanout`` every operand bit is
    first copied by CNOTs, which lets all partial products form in one step
    at the cost of extra wires.
    """
    plan = plan_partial_products(n)
    b = CircuitBuilder()
    regs = {name: b.new_register(name, n, "operand") for name in ("XS", "XK", "YS", "YK")}
    pp = b.new_register("PP", len(plan.terms), "ancilla")

    def wire(ref):
        return regs[ref[0]][ref[1]]

    m = 2 * n
    create_start = b.mark()
    if fanout:
        xcopy = {}
        ycopy = {}
        extra = []
        for reg in ("XS", "XK", "YS", "YK"):
            for i, w in enumerate(regs[reg]):
                copies = [w] + b.wires(m - 1)
                extra.extend(copies[1:])
                for cw in copies[1:]:
                    b.cx(w, cw)
                (xcopy if reg[0] == "X" else ycopy)[_x_index(reg, i, n)] = copies
        b.register("FAN", extra)
    order = sorted(range(len(plan.terms)),
                   key=lambda t: ((_x_index(*plan.terms[t].x, n) + _x_index(*plan.terms[t].y, n)) % m, t))
    for t in order:
        term = plan.terms[t]
        xi, yi = _x_index(*term.x, n), _x_index(*term.y, n)
        if fanout:
            b.ccx(xcopy[xi][yi], ycopy[yi][xi], pp[t])
        else:
            b.ccx(wire(term.x), wire(term.y), pp[t])
    create_stop = b.mark()

    rows = [{plan.terms[t].shift: pp[t] for t in row} for row in plan.rows]
    comp = Compressor(b)
    s, k, _ = tree_sum(b, comp, rows)
    tree_stop = b.mark()
    b.undo(create_start, create_stop)
    b.register("PS", s)
    b.register("PK", k)
    scratch = [w for w in comp.fresh if w not in set(k)]
    if scratch:
        b.register("T", scratch)
    b.notes.append(f"builder: csmul n={n}" + (" fanout" if fanout else ""))
    info = {"create": (create_start, create_stop), "tree": (create_stop, tree_stop),
            "destroy": (tree_stop, b.mark()), "plan": plan}
    layout = Layout("csmul", {"n": n}, ("XS", "XK", "YS", "YK"), (("PS", 0), ("PK", 1)),
                    {"S": "PS", "K": "PK"}, info=info)
    return b.build(), layout


def operand_value(regs, s: str, k: str):
    return regs[s] + (regs[k] << 1)


def gate_slice(circuit: Circuit, span: tuple[int, int], offset: int = 0) -> list[Gate]:
    return list(circuit.gates[span[0] + offset:span[1] + offset])
