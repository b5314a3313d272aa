"""Gate-level emitters for the four primitive cells."""

from __future__ import annotations

from .circuit import CircuitBuilder


def qfa(b: CircuitBuilder, a: int, bb: int, c: int, d: int) -> None:
    """c <- a^bb^c, d <- d ^ maj(a, bb, c); a and bb pass through."""
    b.ccx(bb, c, d)
    b.cx(bb, c)
    b.ccx(a, c, d)
    b.cx(a, c)


def qmg(b: CircuitBuilder, a: int, bb: int, c: int, d: int) -> None:
    """d <- d ^ maj(a, bb, c); a, bb and c pass through."""
    b.ccx(bb, c, d)
    b.cx(bb, c)
    b.ccx(a, c, d)
    b.cx(bb, c)


def qha(b: CircuitBuilder, a: int, bb: int, c: int) -> None:
    """bb <- a^bb, c <- c ^ (a & bb)."""
    b.ccx(a, bb, c)
    b.cx(a, bb)


def xor3(b: CircuitBuilder, a: int, bb: int, t: int) -> None:
    """t <- a^bb^t."""
    b.cx(a, t)
    b.cx(bb, t)
