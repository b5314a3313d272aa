"""Column-wise carry-save compression over rows of wires.

A row maps a column (bit weight exponent) to the wire holding that bit.
Compressing three rows emits one full-adder cell per column holding three
bits, one half-adder cell per column holding two, and leaves single bits
alone. Sums are written in place and carries land on fresh wires one
column up.
"""

from __future__ import annotations

from collections.abc import Sequence

from . import blocks
from .circuit import CircuitBuilder
from .sim import Probe

Row = dict[int, int]


def columns(rows: Sequence[Row]) -> dict[int, list[int]]:
    cols: dict[int, list[int]] = {}
    for r in rows:
        for c, w in r.items():
            cols.setdefault(c, []).append(w)
    return dict(sorted(cols.items()))


def structural_max(rows: Sequence[Row]) -> int:
    return sum(1 << c for r in rows for c in r)


class Compressor:
    """Emits compression cells into a builder and tracks fresh wires.

    ``regular_width`` tags every fresh-row wire past that many columns as a
    boundary wire. ``top_col`` enables the exclusive-carry merge: when a half
    adder at ``top_col - 1`` consumes the sum of an earlier half adder whose
    carry is the only other bit at ``top_col``, the two carries can never be
    1 together, so a CNOT replaces the half adder that would combine them.
    """

    def __init__(self, b: CircuitBuilder, regular_width: int | None = None, top_col: int | None = None,
                 reuse: bool = False):
        self.b = b
        self.reuse = reuse
        self.regular_width = regular_width
        self.top_col = top_col
        # carry wire -> wire holding the sum of the same half adder
        self.pairs: dict[int, int] = {}
        self.probes: list[Probe] = []
        self.fresh: list[int] = []

    def new_wire(self, meta: str = "") -> int:
        w = self.b.wire("ancilla", meta, reuse=self.reuse)
        self.fresh.append(w)
        return w

    def fresh_row(self, cols) -> Row:
        row = {}
        for k, c in enumerate(sorted(cols)):
            boundary = self.regular_width is not None and k >= self.regular_width
            row[c] = self.new_wire("boundary" if boundary else "")
        return row

    def compress3(self, rows: Sequence[Row]) -> tuple[Row, Row]:
        if not 1 <= len(rows) <= 3:
            raise ValueError("compress3 takes one to three rows")
        cols = columns(rows)
        carry = self.fresh_row(c + 1 for c, ws in cols.items() if len(ws) >= 2)
        total: Row = {}
        written: list[int] = []
        halves: dict[int, tuple[int, int]] = {}
        for c, ws in cols.items():
            if len(ws) == 3:
                x, y, z = ws
                blocks.qfa(self.b, x, y, z, carry[c + 1])
                written.append(z)
            elif len(ws) == 2:
                x, y = ws
                blocks.qha(self.b, x, y, carry[c + 1])
                written.append(y)
                halves[c] = (x, y)
            total[c] = ws[-1]
        if self.top_col is not None:
            self._merge(cols, total, carry, halves, written)
        return total, carry

    def _merge(self, cols, total: Row, carry: Row, halves, written) -> None:
        t = self.top_col
        merged = False
        if t - 1 in halves and cols.get(t, []) and len(cols[t]) == 1:
            v = cols[t][0]
            if self.pairs.get(v) in halves[t - 1]:
                # v = 1 forces the old sum to 0, so the new carry is 0 too
                new = carry[t]
                self.probes.append(Probe(self.b.mark(), v, new))
                self.b.cx(v, new)
                del total[t]
                self.pairs.pop(v, None)
                merged = True
        for w in written:
            for v in [v for v, s in self.pairs.items() if w in (v, s)]:
                del self.pairs[v]
        if t - 1 in halves and not merged:
            self.pairs[carry[t]] = halves[t - 1][1]

    def wallace_layer(self, rows: Sequence[Row]) -> list[Row]:
        out: list[Row] = []
        full = len(rows) // 3 * 3
        for i in range(0, full, 3):
            s, k = self.compress3(rows[i:i + 3])
            out.extend(r for r in (s, k) if r)
        out.extend(rows[full:])
        return out
