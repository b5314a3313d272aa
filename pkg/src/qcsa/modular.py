"""Modular carry-save arithmetic.

Bits that reach weight 2^(N-1) or above are folded back as their residues
mod M (P for weight 2^(N-1), Q for 2^N), which keeps the value congruent
while pulling it under 2^N. Residues live on constant wires prepared by NOT
gates. Every construction computes forward, copies the reduced pair out to
fresh registers and then runs the forward part backwards, so inputs are
preserved and all scratch wires return to 0.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .adders import emit_ripple
from .circuit import Circuit, CircuitBuilder
from .compress import Compressor, Row, columns, structural_max
from .layout import Layout
from .sim import Probe


@dataclass(frozen=True)
class ModulusContext:
    N: int
    M: int
    P: int
    Q: int

    def residue(self, col: int) -> int:
        return pow(2, col, self.M)


def make_modulus_context(N: int, M: int) -> ModulusContext:
    if N < 4:
        raise ValueError(f"N={N} leaves no legal modulus (need 3 <= M <= 2^(N-2))")
    if not 3 <= M <= 1 << (N - 2):
        raise ValueError(f"modulus {M} outside [3, {1 << (N - 2)}] for N={N}")
    return ModulusContext(N, M, pow(2, N - 1, M), pow(2, N, M))


def mod_fold_reference(x: int, ctx: ModulusContext) -> int:
    if x < 0:
        raise ValueError("x must be non-negative")
    return (x & ((1 << ctx.N) - 1)) + (x >> ctx.N) * ctx.Q


class Reducer:
    """Drives rows of bits down to a pair below 2^N, congruent mod M.

    ``bound`` is a proven upper limit on the value held by the rows. Bits
    whose weight exceeds it must be 0 and are dropped from bookkeeping.
    """

    def __init__(self, b: CircuitBuilder, ctx: ModulusContext, consts: dict[int, list[int]] | None = None,
                 reuse: bool = False):
        self.b = b
        self.ctx = ctx
        self.comp = Compressor(b, top_col=ctx.N - 1, reuse=reuse)
        self.consts = {} if consts is None else consts
        self.folds = 0

    def const(self, col: int) -> list[int]:
        if col not in self.consts:
            name = {self.ctx.N - 1: "P", self.ctx.N: "Q"}.get(col, f"R{col}")
            r = self.ctx.residue(col)
            self.consts[col] = self.b.constant(name, r, r.bit_length())
        return self.consts[col]

    def fold(self, rows: list[Row], bound: int) -> tuple[list[Row], int]:
        top = self.ctx.N - 1
        low = [{c: w for c, w in r.items() if c < top} for r in rows]
        low = [r for r in low if r]
        high = sorted(((c, w) for r in rows for c, w in r.items() if c >= top), key=lambda cw: -cw[0])
        lmax = structural_max(low)
        rsum, dmin = 0, None
        folded: list[Row] = []
        for c, w in high:
            r = self.ctx.residue(c)
            rsum += r
            d = (1 << c) - r
            dmin = d if dmin is None else min(dmin, d)
            if not r:
                continue
            const = self.const(c)
            row = {}
            for j in range(r.bit_length()):
                if r >> j & 1:
                    row[j] = self.comp.new_wire()
                    self.b.ccx(w, const[j], row[j])
            folded.append(row)
        self.folds += 1
        return low + folded, min(lmax + rsum, max(lmax, bound - dmin))

    def reduce(self, rows: Sequence[Row], bound: int) -> list[Row]:
        limit = 1 << self.ctx.N
        rows = [r for r in rows if r]
        while True:
            bound = min(bound, structural_max(rows))
            rows = [{c: w for c, w in r.items() if 1 << c <= bound} for r in rows]
            rows = [r for r in rows if r]
            if len(rows) > 2:
                rows = self.comp.wallace_layer(rows)
            elif bound >= limit:
                rows, bound = self.fold(rows, bound)
            elif len(columns(rows).get(0, [])) > 1:
                rows = [r for r in self.comp.compress3(rows) if r]
            else:
                return rows

    def copy_out(self, rows: Sequence[Row], s_out: Sequence[int], k_out: Sequence[int]) -> None:
        """CNOT the reduced pair into S (columns 0..N-1) and K (1..N-1)."""
        for c, ws in columns(rows).items():
            self.b.cx(ws[0], s_out[c])
            if len(ws) == 2:
                self.b.cx(ws[1], k_out[c - 1])

    def probes(self) -> tuple[Probe, ...]:
        off = self.b.offset
        return tuple(Probe(p.gate + off, p.a, p.b) for p in self.comp.probes)


def _row(wires: Sequence[int], first_col: int = 0) -> Row:
    return {first_col + i: w for i, w in enumerate(wires)}


def _outputs(b: CircuitBuilder, N: int, s_name: str = "S", k_name: str = "K") -> tuple[list[int], list[int]]:
    return b.new_register(s_name, N, "result"), b.new_register(k_name, N - 1, "result")


def _ctx_note(b: CircuitBuilder, ctx: ModulusContext) -> None:
    b.notes.append(f"N = {ctx.N}, M = {ctx.M}, P = {ctx.P}, Q = {ctx.Q}")


def build_mod_csa(ctx: ModulusContext) -> tuple[Circuit, Layout]:
    """Modular 3->2 adder on three N-bit binary operands."""
    N = ctx.N
    b = CircuitBuilder()
    a, bb, c = (b.new_register(nm, N, "operand") for nm in "ABC")
    s_out, k_out = _outputs(b, N)
    red = Reducer(b, ctx)
    start = b.mark()
    rows = red.reduce([_row(a), _row(bb), _row(c)], 3 * ((1 << N) - 1))
    stop = b.mark()
    red.copy_out(rows, s_out, k_out)
    b.undo(start, stop)
    b.notes.append("builder: modcsa")
    _ctx_note(b, ctx)
    layout = Layout("modcsa", {"N": N, "M": ctx.M}, ("A", "B", "C"), (("S", 0), ("K", 1)),
                    {"S": "S", "K": "K"}, red.probes(), {"folds": red.folds})
    return b.build(), layout


def emit_mod_multiply(red: Reducer, xs: Sequence[int], xk: Sequence[int], ys: Sequence[int],
                      yk: Sequence[int], s_out: Sequence[int], k_out: Sequence[int]) -> None:
    """(s_out, k_out) ^= reduced X*Y with every scratch wire restored.

    S vectors start at column 0 and K vectors at column 1. Products landing
    at column N-1 or above are created directly at the columns of their
    residue, one Toffoli per set residue bit.
    """
    b, ctx = red.b, red.ctx
    N = ctx.N
    xbits = list(_row(xs).items()) + list(_row(xk, 1).items())
    ybits = list(_row(ys).items()) + list(_row(yk, 1).items())
    start = b.mark()
    rows: list[Row] = []
    for ci, xw in xbits:
        for cj, yw in ybits:
            col = ci + cj
            targets = [col] if col < N - 1 else [j for j in range(N) if ctx.residue(col) >> j & 1]
            for t in targets:
                w = red.comp.new_wire()
                b.ccx(xw, yw, w)
                for row in rows:
                    if t not in row:
                        row[t] = w
                        break
                else:
                    rows.append({t: w})
    out = red.reduce(rows, structural_max(rows))
    stop = b.mark()
    red.copy_out(out, s_out, k_out)
    b.undo(start, stop)


def build_mod_multiplier(ctx: ModulusContext, binary_y: bool = False) -> tuple[Circuit, Layout]:
    N = ctx.N
    b = CircuitBuilder()
    xs = b.new_register("XS", N, "operand")
    xk = b.new_register("XK", N - 1, "operand")
    ys = b.new_register("YS", N, "operand")
    yk = [] if binary_y else b.new_register("YK", N - 1, "operand")
    s_out, k_out = _outputs(b, N)
    red = Reducer(b, ctx)
    emit_mod_multiply(red, xs, xk, ys, yk, s_out, k_out)
    b.notes.append("builder: modmul")
    _ctx_note(b, ctx)
    inputs = ("XS", "XK", "YS") if binary_y else ("XS", "XK", "YS", "YK")
    layout = Layout("modmul", {"N": N, "M": ctx.M}, inputs, (("S", 0), ("K", 1)), {"S": "S", "K": "K"},
                    red.probes())
    return b.build(), layout


def normalizer_stages(ctx: ModulusContext) -> int:
    return math.ceil(((1 << ctx.N) - 1) / ctx.M)


def emit_normalizer(b: CircuitBuilder, ctx: ModulusContext, s: Sequence[int], k: Sequence[int],
                    r_out: Sequence[int]) -> None:
    """r_out ^= (S + 2K) mod M for inputs below 2^N.

    A ripple adder collapses the pair into an (N+1)-bit register, then each
    trial stage subtracts M, copies the sign bit to a flag and adds M back
    under that flag. The residue is copied out and everything else is
    computed backwards to 0.
    """
    N, M = ctx.N, ctx.M
    n1 = N + 1
    neg_m = b.constant("NEGM", (1 << n1) - M, n1)
    acc = b.wires(n1, reuse=True)
    carries = b.wires(n1, reuse=True)
    pad = [b.wire(reuse=True)] + list(k) + [b.wire(reuse=True)]
    gate = b.wires(n1, reuse=True)
    start = b.mark()
    for i in range(N):
        b.cx(s[i], acc[i])
    emit_ripple(b, pad, acc, carries, b.wire())
    for _ in range(normalizer_stages(ctx)):
        emit_ripple(b, neg_m, acc, carries, b.wire())
        flag = b.wire()
        b.cx(acc[N], flag)
        for j in range(n1):
            if M >> j & 1:
                b.cx(flag, gate[j])
        emit_ripple(b, gate, acc, carries, b.wire())
        for j in range(n1):
            if M >> j & 1:
                b.cx(flag, gate[j])
    stop = b.mark()
    for i in range(N):
        b.cx(acc[i], r_out[i])
    b.undo(start, stop)
    b.release(acc + carries + [pad[0], pad[-1]] + gate)


def build_final_normalizer(ctx: ModulusContext) -> tuple[Circuit, Layout]:
    N = ctx.N
    b = CircuitBuilder()
    s = b.new_register("S", N, "operand")
    k = b.new_register("K", N - 1, "operand")
    r = b.new_register("R", N, "result")
    emit_normalizer(b, ctx, s, k, r)
    b.notes.append("builder: normalize")
    _ctx_note(b, ctx)
    layout = Layout("normalize", {"N": N, "M": ctx.M}, ("S", "K"), (("R", 0),), {"R": "R"},
                    info={"stages": normalizer_stages(ctx)})
    return b.build(), layout


def build_modexp(ctx: ModulusContext, a: int, m: int, normalize: bool = False) -> tuple[Circuit, Layout]:
    """Accumulator chain computing a^e mod M for an m-bit exponent register E.

    Stage i multiplies the accumulator by y_i = e_i ? a^(2^i) mod M : 1. The
    y register is set from e_i with CNOT and NOT gates, used as the second
    factor of a modular multiply into a fresh accumulator, then cleared.
    """
    N, M = ctx.N, ctx.M
    if not 0 <= a < M:
        raise ValueError(f"base {a} must satisfy 0 <= a < {M}")
    if m < 1:
        raise ValueError("exponent width must be >= 1")
    b = CircuitBuilder()
    e = b.new_register("E", m, "operand")
    one = b.constant("ONE", 1, 1)
    consts: dict[int, list[int]] = {}
    acc_s, acc_k = list(one), []
    probes: list[Probe] = []
    for i in range(m):
        c = pow(a, 1 << i, M)
        y = b.wires(N, reuse=True)
        start = b.mark()
        for j in range(N):
            cj, oj = c >> j & 1, int(j == 0)
            if cj and not oj:
                b.cx(e[i], y[j])
            elif oj and not cj:
                b.cx(e[i], y[j])
                b.x(y[j])
            elif cj and oj:
                b.x(y[j])
        stop = b.mark()
        new_s, new_k = _outputs(b, N, f"S{i + 1}", f"K{i + 1}")
        red = Reducer(b, ctx, consts, reuse=True)
        emit_mod_multiply(red, acc_s, acc_k, y, [], new_s, new_k)
        probes.extend(red.comp.probes)
        b.undo(start, stop)
        b.release(red.comp.fresh + y)
        acc_s, acc_k = new_s, new_k
    outputs = {"S": f"S{m}", "K": f"K{m}"}
    if normalize:
        r = b.new_register("R", N, "result")
        emit_normalizer(b, ctx, acc_s, acc_k, r)
        outputs["R"] = "R"
    b.notes.append(f"builder: modexp a={a} m={m}" + (" normalized" if normalize else ""))
    _ctx_note(b, ctx)
    off = b.offset
    layout = Layout("modexp", {"N": N, "M": M, "a": a, "m": m}, ("E",),
                    ((f"S{m}", 0), (f"K{m}", 1)), outputs,
                    tuple(Probe(p.gate + off, p.a, p.b) for p in probes))
    return b.build(), layout
