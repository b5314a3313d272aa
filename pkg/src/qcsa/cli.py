"""Command-line interface: build, simulate, truthtable, verify, resources, export."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import netlist
from .circuit import Circuit, CircuitError
from .registry import REGISTRY, build
from .resources import measure
from .sim import DEFAULT_SEED, decode, dirty_wires, encode, run_int, truth_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULTS = {"n": 4, "inputs": 8, "L": 4, "bits": 4, "modulus": 3, "base": 2, "expwidth": 2}


class UsageError(Exception):
    pass


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("-n", type=int, dest="n", help="operand width (ripple, csa32, csa42, csmul)")
    p.add_argument("--inputs", type=int, help="number of tree-adder inputs")
    p.add_argument("-L", type=int, dest="L", help="tree-adder input width")
    p.add_argument("--bits", type=int, help="modular data width N")
    p.add_argument("--modulus", type=int, help="odd modulus M with 3 <= M <= 2^(N-2)")
    p.add_argument("--base", type=int, help="modexp base a < M")
    p.add_argument("--expwidth", type=int, help="modexp exponent width m")


def _params(args) -> dict[str, int]:
    entry = REGISTRY[args.name]
    out = {}
    for key in entry.params:
        val = getattr(args, key)
        out[key] = DEFAULTS[key] if val is None else val
    if "modulus" in out and out["modulus"] % 2 == 0:
        raise UsageError(f"modulus must be odd, got {out['modulus']}")
    return out


def _is_construction(target: str) -> bool:
    return target in REGISTRY


def _load(target: str, args) -> tuple[Circuit, object, str | None]:
    """A construction name builds fresh; anything else is read as a netlist file."""
    if _is_construction(target):
        args.name = target
        circuit, layout = build(target, _params(args))
        return circuit, layout, target
    path = Path(target)
    if not path.exists():
        raise UsageError(f"{target!r} is neither a construction ({', '.join(REGISTRY)}) nor a file")
    return netlist.parse(path.read_text()), None, None


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    if not _is_construction(args.name):
        raise UsageError(f"unknown construction {args.name!r}; known: {', '.join(REGISTRY)}")
    circuit, _, _ = _load(args.name, args)
    _write(netlist.emit(circuit), args.output)
    return EXIT_OK


def _assignment(items: list[str]) -> dict[str, int]:
    values = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"expected REG=VALUE, got {item!r}")
        name, val = item.split("=", 1)
        try:
            values[name.strip()] = int(val, 0)
        except ValueError:
            raise UsageError(f"bad value in {item!r}") from None
    return values


def cmd_simulate(args) -> int:
    circuit, _, _ = _load(args.target, args)
    values = _assignment(args.set or [])
    for name in values:
        circuit.register(name)
    operand_regs = [n for n, ws in circuit.registers.items()
                    if any(circuit.roles[w].kind == "operand" for w in ws)]
    missing = [n for n in operand_regs if n not in values]
    if missing and not args.zero_missing:
        raise UsageError(f"missing register value(s): {', '.join(missing)}")
    y = run_int(circuit, encode(circuit, values))
    for name, v in decode(circuit, y).items():
        print(f"{name}={v}")
    dirty = dirty_wires(circuit, y)
    print("ancillas: clean" if not dirty else f"ancillas: dirty {dirty}")
    return EXIT_OK


def cmd_truthtable(args) -> int:
    circuit, _, name = _load(args.target, args)
    table = truth_table(circuit, args.limit)
    labels = REGISTRY[name].labels if name else None
    ins, outs = (labels[0].split(), labels[1].split()) if labels else (None, None)
    print(table.format(ins, outs))
    return EXIT_OK


def cmd_verify(args) -> int:
    if not _is_construction(args.name):
        raise UsageError(f"unknown construction {args.name!r}; known: {', '.join(REGISTRY)}")
    circuit, layout, _ = _load(args.name, args)
    report = REGISTRY[args.name].check(circuit, layout, args.seed)
    print(f"{args.name}: {report.summary()}")
    return EXIT_OK if report.passed else EXIT_FAIL


def _jsonable(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    return v


def cmd_resources(args) -> int:
    circuit, layout, _ = _load(args.target, args)
    report = measure(circuit, layout)
    if args.format == "json":
        print(json.dumps({k: _jsonable(v) for k, v in report.as_dict().items()}, indent=2))
    elif args.format == "kv":
        print("\n".join(report.lines()))
    else:
        print(report.table())
    return EXIT_OK


def cmd_export(args) -> int:
    circuit, _, _ = _load(args.target, args)
    _write(netlist.to_qasm(circuit), args.output)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcsa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    names = ", ".join(REGISTRY)

    p = sub.add_parser("build", help="emit a netlist for a named construction")
    p.add_argument("name", help=names)
    _add_params(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("simulate", help="run one basis state through a netlist or construction")
    p.add_argument("target")
    p.add_argument("--set", action="append", metavar="REG=VALUE")
    p.add_argument("--zero-missing", action="store_true", help="treat unassigned operands as 0")
    _add_params(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("truthtable", help="print a truth table, most significant wire left")
    p.add_argument("target")
    p.add_argument("--limit", type=int, default=20)
    _add_params(p)
    p.set_defaults(func=cmd_truthtable)

    p = sub.add_parser("verify", help="check a construction against its classical oracle")
    p.add_argument("name", help=names)
    _add_params(p)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("resources", help="count wires, gates and depth")
    p.add_argument("target")
    _add_params(p)
    p.add_argument("--format", choices=("table", "kv", "json"), default="table")
    p.set_defaults(func=cmd_resources)

    p = sub.add_parser("export", help="write OpenQASM 2.0")
    p.add_argument("target")
    _add_params(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CircuitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
