"""Metadata a builder returns next to its circuit."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .sim import Probe


@dataclass
class Layout:
    """Which registers are inputs, where the result lives, and extras.

    ``value_terms`` lists (register, shift) pairs whose weighted sum is the
    arithmetic result, so a carry-save output is ``[("S", 0), ("K", 1)]``.
    ``outputs`` names the register holding each logical output when a
    result is written in place over an input.
    """

    name: str
    params: dict[str, int]
    inputs: tuple[str, ...]
    value_terms: tuple[tuple[str, int], ...] = ()
    outputs: dict[str, str] = field(default_factory=dict)
    probes: tuple[Probe, ...] = ()
    info: dict[str, Any] = field(default_factory=dict)

    def value(self, regs: dict[str, Any]):
        total = 0
        for name, shift in self.value_terms:
            total = total + (regs[name] << shift)
        return total


AdderLayout = Layout
