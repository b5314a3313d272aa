"""Named constructions with their parameters and verification recipes."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from . import adders, modular, multiplier
from .circuit import Circuit
from .layout import Layout
from .reference import QFA_TABLE, QHA_TABLE, QMG_TABLE, classical_modexp, table_as_permutation
from .sim import (DEFAULT_SEED, EXHAUSTIVE, Sample, VerificationReport, truth_table,
                  verify_against_oracle)

EXHAUSTIVE_BITS = 16
SAMPLES = 10_000


@dataclass(frozen=True)
class Entry:
    name: str
    params: tuple[str, ...]
    smallest: dict[str, int]
    build: Callable[[dict], tuple[Circuit, Layout | None]]
    check: Callable[[Circuit, Layout | None, int], VerificationReport]
    labels: tuple[str, str] | None = None


def _domain(circuit: Circuit, layout: Layout, seed: int):
    bits = sum(len(circuit.register(n)) for n in layout.inputs)
    return EXHAUSTIVE if bits <= EXHAUSTIVE_BITS else Sample(SAMPLES, seed)


def _table_check(golden) -> Callable:
    def check(circuit: Circuit, layout, seed: int) -> VerificationReport:
        want = table_as_permutation(golden)
        got = truth_table(circuit).rows
        for (x, y), (gx, gy) in zip(got, want):
            if x != gx or y != gy:
                return VerificationReport(False, x + 1, ({"state": x}, {"state": gy}, {"state": y}),
                                          "value-mismatch", "row differs from reference table")
        if len(got) != len(want):
            return VerificationReport(False, len(got), ({}, {"rows": len(want)}, {"rows": len(got)}),
                                      "value-mismatch", "row count differs")
        return VerificationReport(True, len(want), detail="rows match reference table")
    return check


def _sum_check(circuit, layout, seed):
    return verify_against_oracle(circuit, lambda v: {"T": v["A"] ^ v["B"] ^ v["T"]},
                                 inputs=("A", "B", "T"))


def _value_check(oracle: Callable, extra: Callable | None = None) -> Callable:
    def check(circuit: Circuit, layout: Layout, seed: int) -> VerificationReport:
        def expected(v):
            out = {"value": oracle(v)}
            if extra:
                out.update(extra[0](v))
            return out

        def observe(r):
            out = {"value": layout.value(r)}
            if extra:
                out.update(extra[1](r))
            return out
        return verify_against_oracle(circuit, expected, inputs=layout.inputs, observe=observe,
                                     domain=_domain(circuit, layout, seed))
    return check


def _total(v, names):
    return sum(v[n] for n in names)


def _cs(v, s, k):
    return v[s] + (v[k] << 1)


def _mod_check(oracle: Callable) -> Callable:
    def check(circuit: Circuit, layout: Layout, seed: int) -> VerificationReport:
        M, N = layout.params["M"], layout.params["N"]

        def observe(r):
            value = layout.value(r)
            return {"residue": value % M, "in_range": (value < (1 << N)).astype(np.int64)}
        return verify_against_oracle(circuit, lambda v: {"residue": oracle(v, layout) % M, "in_range": 1},
                                     inputs=layout.inputs, observe=observe, probes=layout.probes,
                                     domain=_domain(circuit, layout, seed))
    return check


def _normalize_check(circuit, layout, seed):
    M, N = layout.params["M"], layout.params["N"]

    def observe(r):
        value = r["S"] + (r["K"] << 1)
        # inputs at or above 2^N are outside the contract
        return {"ok": ((value >= (1 << N)) | (r["R"] == value % M)).astype(np.int64)}
    return verify_against_oracle(circuit, lambda v: {"ok": 1}, inputs=layout.inputs, observe=observe,
                                 domain=_domain(circuit, layout, seed))


def _modexp_check(circuit, layout, seed):
    M, a = layout.params["M"], layout.params["a"]
    powmod = np.vectorize(lambda e: classical_modexp(a, int(e), M), otypes=[np.int64])

    def expected(v):
        want = powmod(v["E"])
        out = {"residue": want}
        if "R" in layout.outputs:
            out["R"] = want
        return out

    def observe(r):
        out = {"residue": layout.value(r) % M}
        if "R" in layout.outputs:
            out["R"] = r["R"]
        return out
    return verify_against_oracle(circuit, expected, inputs=layout.inputs, observe=observe,
                                 probes=layout.probes, domain=_domain(circuit, layout, seed))


def _ctx(p):
    return modular.make_modulus_context(p["bits"], p["modulus"])


REGISTRY: dict[str, Entry] = {}


def _register(entry: Entry) -> None:
    REGISTRY[entry.name] = entry


_register(Entry("qfa", (), {}, lambda p: (adders.build_qfa(), None), _table_check(QFA_TABLE),
                ("A B C D", "A B S K")))
_register(Entry("qmg", (), {}, lambda p: (adders.build_qmg(), None), _table_check(QMG_TABLE),
                ("A B C D", "A B C K")))
_register(Entry("qha", (), {}, lambda p: (adders.build_qha(), None), _table_check(QHA_TABLE),
                ("A B C", "A S K")))
_register(Entry("sum", (), {}, lambda p: (adders.build_sum(), None), _sum_check, ("A B T", "A B S")))
_register(Entry("ripple", ("n",), {"n": 1}, lambda p: adders.build_ripple_adder(p["n"]),
                _value_check(lambda v: v["A"] + v["B"])))
_register(Entry("csa32", ("n",), {"n": 1}, lambda p: adders.build_csa_3to2(p["n"]),
                _value_check(lambda v: v["A"] + v["B"] + v["C"],
                             (lambda v: {"xor": v["A"] ^ v["B"] ^ v["C"]}, lambda r: {"xor": r["C"]}))))
_register(Entry("csa42", ("n",), {"n": 1}, lambda p: adders.build_csa_4to2(p["n"]),
                _value_check(lambda v: v["A"] + v["B"] + v["C"] + v["D"])))


def _tree_check(circuit, layout, seed):
    return _value_check(lambda v: _total(v, layout.inputs))(circuit, layout, seed)


_register(Entry("tree", ("inputs", "L"), {"inputs": 3, "L": 1},
                lambda p: adders.build_tree_adder(p["inputs"], p["L"]), _tree_check))
_register(Entry("csmul", ("n",), {"n": 1}, lambda p: multiplier.build_cs_multiplier(p["n"]),
                _value_check(lambda v: _cs(v, "XS", "XK") * _cs(v, "YS", "YK"))))
_register(Entry("modcsa", ("bits", "modulus"), {"bits": 4, "modulus": 3},
                lambda p: modular.build_mod_csa(_ctx(p)),
                _mod_check(lambda v, lay: v["A"] + v["B"] + v["C"])))


def _modmul_oracle(v, layout):
    y = _cs(v, "YS", "YK") if "YK" in v else v["YS"]
    return _cs(v, "XS", "XK") * y


_register(Entry("modmul", ("bits", "modulus"), {"bits": 4, "modulus": 3},
                lambda p: modular.build_mod_multiplier(_ctx(p)), _mod_check(_modmul_oracle)))
_register(Entry("modexp", ("bits", "modulus", "base", "expwidth"),
                {"bits": 4, "modulus": 3, "base": 0, "expwidth": 1},
                lambda p: modular.build_modexp(_ctx(p), p["base"], p["expwidth"], normalize=True),
                _modexp_check))
_register(Entry("normalize", ("bits", "modulus"), {"bits": 4, "modulus": 3},
                lambda p: modular.build_final_normalizer(_ctx(p)), _normalize_check))


def build(name: str, params: dict | None = None) -> tuple[Circuit, Layout | None]:
    if name not in REGISTRY:
        raise ValueError(f"unknown construction {name!r}; known: {', '.join(REGISTRY)}")
    entry = REGISTRY[name]
    params = params or {}
    missing = [p for p in entry.params if params.get(p) is None]
    if missing:
        raise ValueError(f"{name} needs parameters: {', '.join(missing)}")
    return entry.build({p: params[p] for p in entry.params})


def verify(name: str, params: dict | None = None, seed: int = DEFAULT_SEED) -> VerificationReport:
    circuit, layout = build(name, params)
    return REGISTRY[name].check(circuit, layout, seed)
