"""Primitive cells and adder networks built from them."""

from __future__ import annotations

import string
from collections.abc import Sequence

from . import blocks
from .circuit import Circuit, CircuitBuilder
from .compress import Compressor, Row, columns
from .layout import Layout


def _cell(name: str, labels: str, emit, clobbered: str) -> Circuit:
    b = CircuitBuilder()
    wires = [b.wire("operand", "clobbered" if lab in clobbered else "") for lab in labels]
    for lab, w in zip(labels, wires):
        b.register(lab, [w])
    emit(b, *wires)
    b.notes.append(f"builder: {name}")
    return b.build()


def build_qfa() -> Circuit:
    return _cell("qfa", "ABCD", blocks.qfa, "CD")


def build_qmg() -> Circuit:
    return _cell("qmg", "ABCD", blocks.qmg, "D")


def build_qha() -> Circuit:
    return _cell("qha", "ABC", blocks.qha, "BC")


def build_sum() -> Circuit:
    return _cell("sum", "ABT", blocks.xor3, "T")


def emit_ripple(b: CircuitBuilder, a: Sequence[int], s: Sequence[int], carries: Sequence[int], cout: int) -> None:
    """s <- a + s with the overflow xored into ``cout``.

    ``carries`` are n clean wires; carries[0] is the carry-in and stays 0.
    Forward majority cells push carries up, then the backward sweep clears
    each carry before the sum cell at that slice overwrites ``s``.
    """
    n = len(a)
    up = list(carries[1:]) + [cout]
    for i in range(n):
        blocks.qmg(b, a[i], s[i], carries[i], up[i])
    for i in reversed(range(n)):
        if i < n - 1:
            blocks.qmg(b, a[i], s[i], carries[i], up[i])
        blocks.xor3(b, a[i], carries[i], s[i])


def build_ripple_adder(n: int) -> tuple[Circuit, Layout]:
    if n < 1:
        raise ValueError("ripple adder needs n >= 1")
    b = CircuitBuilder()
    a = b.new_register("A", n, "operand")
    s = b.new_register("B", n, "operand", "clobbered")
    c = b.new_register("C", n, "ancilla")
    co = b.new_register("CO", 1, "carryout")
    emit_ripple(b, a, s, c, co[0])
    b.notes.append(f"builder: ripple n={n}")
    layout = Layout("ripple", {"n": n}, ("A", "B"), (("B", 0), ("CO", n)), {"S": "B", "CO": "CO"})
    return b.build(), layout


def build_csa_3to2(n: int) -> tuple[Circuit, Layout]:
    if n < 1:
        raise ValueError("3->2 adder needs n >= 1")
    b = CircuitBuilder()
    a = b.new_register("A", n, "operand")
    bb = b.new_register("B", n, "operand")
    c = b.new_register("C", n, "operand", "clobbered")
    k = b.new_register("K", n, "result")
    for i in range(n):
        blocks.qfa(b, a[i], bb[i], c[i], k[i])
    b.notes.append(f"builder: csa32 n={n}")
    layout = Layout("csa32", {"n": n}, ("A", "B", "C"), (("C", 0), ("K", 1)), {"S": "C", "K": "K"})
    return b.build(), layout


def build_csa_4to2(n: int) -> tuple[Circuit, Layout]:
    """Two full-adder layers, then the first layer is undone.

    D is overwritten with the sum vector, X carries the intermediate carries
    and is restored, Y receives the output carries and CO the carry that
    leaves the top slice.
    """
    if n < 1:
        raise ValueError("4->2 adder needs n >= 1")
    b = CircuitBuilder()
    a = b.new_register("A", n, "operand")
    bb = b.new_register("B", n, "operand")
    c = b.new_register("C", n, "operand")
    d = b.new_register("D", n, "operand", "clobbered")
    x = b.new_register("X", n, "ancilla")
    y = b.new_register("Y", n, "result")
    co = b.new_register("CO", 1, "carryout")[0]
    start = b.mark()
    for i in range(n):
        blocks.qfa(b, a[i], bb[i], c[i], x[i])
    stop = b.mark()
    blocks.qha(b, c[0], d[0], y[0])
    for i in range(1, n):
        blocks.qfa(b, c[i], x[i - 1], d[i], y[i])
    b.cx(x[n - 1], co)
    b.undo(start, stop)
    b.notes.append(f"builder: csa42 n={n}")
    layout = Layout("csa42", {"n": n}, ("A", "B", "C", "D"), (("D", 0), ("CO", n), ("Y", 1)),
                    {"S": "D", "K": "Y", "CO": "CO"})
    return b.build(), layout


def tree_sum(b: CircuitBuilder, comp: Compressor, rows: list[Row]) -> tuple[list[int], list[int], dict]:
    """Reduce rows to a fresh (S, K) pair while leaving every input intact.

    Greedy layers of 3->2 compression run until three rows remain. One of
    those is a carry row made by the layers; it is copied into the fresh S
    vector and then reused in place as K, so after the layers are undone the
    wire holds exactly the final carry. S columns start at 0, K at 1.
    """
    start = b.mark()
    made: list[int] = []
    while len(rows) > 3:
        nxt: list[Row] = []
        full = len(rows) // 3 * 3
        for i in range(0, full, 3):
            s, k = comp.compress3(rows[i:i + 3])
            nxt.append(s)
            if k:
                nxt.append(k)
                made.append(id(k))
        nxt.extend(rows[full:])
        rows = nxt
    stop = b.mark()
    rows = list(rows) + [{}] * (3 - len(rows))
    ranked = sorted(range(3), key=lambda i: made.index(id(rows[i])) if id(rows[i]) in made else -1)
    ci = ranked[-1]
    reuse = id(rows[ci]) in made
    c = rows[ci]
    a, bb = (rows[i] for i in range(3) if i != ci)

    cols = columns([a, bb, c])
    top = max(cols)
    width = comp.regular_width

    def tag(k: int) -> str:
        return "boundary" if width is not None and k >= width else ""

    s_wires = [b.wire("result", tag(i)) for i in range(top + 1)]
    k_top = max([col + 1 for col, ws in cols.items() if len(ws) >= 2] + ([max(c)] if reuse else []), default=0)
    k_wires = []
    for col in range(1, k_top + 1):
        if reuse and col in c:
            w = c[col]
            b.set_role(w, "result", b.roles[w].meta)
        else:
            w = b.wire("result", tag(width) if reuse and width is not None else tag(col - 1))
        k_wires.append(w)
    for col in sorted(c):
        b.cx(c[col], s_wires[col])
    for col in cols:
        xs = [r[col] for r in (a, bb) if col in r]
        dst = s_wires[col]
        carry = k_wires[col] if col + 1 <= k_top else None
        if len(xs) == 2:
            blocks.qfa(b, xs[0], xs[1], dst, carry)
        elif len(xs) == 1 and col in c:
            blocks.qha(b, xs[0], dst, carry)
        elif len(xs) == 1:
            b.cx(xs[0], dst)
    final = (stop, b.mark())
    b.undo(start, stop)
    return s_wires, k_wires, {"layers": (start, stop), "final": final}


def input_names(count: int) -> list[str]:
    if count <= 26:
        return list(string.ascii_uppercase[:count])
    return [f"X{i}" for i in range(count)]


def build_tree_adder(n_inputs: int, L: int) -> tuple[Circuit, Layout]:
    if n_inputs < 3:
        raise ValueError("tree adder needs at least 3 inputs")
    if L < 1:
        raise ValueError("tree adder needs L >= 1")
    b = CircuitBuilder()
    names = input_names(n_inputs)
    # S and K are named outputs, keep inputs clear of them
    names = [nm if nm not in ("S", "K") else nm * 2 for nm in names]
    rows = [dict(enumerate(b.new_register(nm, L, "operand"))) for nm in names]
    comp = Compressor(b, regular_width=L)
    s, k, info = tree_sum(b, comp, rows)
    b.register("S", s)
    b.register("K", k)
    scratch = [w for w in comp.fresh if w not in set(k)]
    if scratch:
        b.register("T", scratch)
    b.notes.append(f"builder: tree N={n_inputs} L={L}")
    layout = Layout("tree", {"N": n_inputs, "L": L}, tuple(names), (("S", 0), ("K", 1)),
                    {"S": "S", "K": "K"}, info=info)
    return b.build(), layout
