"""Classical reference models used as oracles.

The golden tables are written with the most significant column on the left,
so for the 4-wire cells the columns read D C B A on input and K S B A (or
K C B A) on output.
"""

from __future__ import annotations

from dataclasses import dataclass


def _rows(text: str) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    rows = []
    for line in text.strip().splitlines():
        left, right = line.split("|")
        rows.append((tuple(map(int, left.split())), tuple(map(int, right.split()))))
    return rows


# A B Cin | Sum Cout
FULL_ADDER_TABLE = _rows("""
0 0 0 | 0 0
0 0 1 | 1 0
0 1 0 | 1 0
0 1 1 | 0 1
1 0 0 | 1 0
1 0 1 | 0 1
1 1 0 | 0 1
1 1 1 | 1 1
""")

# A B | Sum Cout
HALF_ADDER_TABLE = _rows("""
0 0 | 0 0
0 1 | 1 0
1 0 | 1 0
1 1 | 0 1
""")

# D C B A | K S B A
QFA_TABLE = _rows("""
0 0 0 0 | 0 0 0 0
0 0 0 1 | 0 1 0 1
0 0 1 0 | 0 1 1 0
0 0 1 1 | 1 0 1 1
0 1 0 0 | 0 1 0 0
0 1 0 1 | 1 0 0 1
0 1 1 0 | 1 0 1 0
0 1 1 1 | 1 1 1 1
1 0 0 0 | 1 0 0 0
1 0 0 1 | 1 1 0 1
1 0 1 0 | 1 1 1 0
1 0 1 1 | 0 0 1 1
1 1 0 0 | 1 1 0 0
1 1 0 1 | 0 0 0 1
1 1 1 0 | 0 0 1 0
1 1 1 1 | 0 1 1 1
""")

# D C B A | K C B A
QMG_TABLE = _rows("""
0 0 0 0 | 0 0 0 0
0 0 0 1 | 0 0 0 1
0 0 1 0 | 0 0 1 0
0 0 1 1 | 1 0 1 1
0 1 0 0 | 0 1 0 0
0 1 0 1 | 1 1 0 1
0 1 1 0 | 1 1 1 0
0 1 1 1 | 1 1 1 1
1 0 0 0 | 1 0 0 0
1 0 0 1 | 1 0 0 1
1 0 1 0 | 1 0 1 0
1 0 1 1 | 0 0 1 1
1 1 0 0 | 1 1 0 0
1 1 0 1 | 0 1 0 1
1 1 1 0 | 0 1 1 0
1 1 1 1 | 0 1 1 1
""")

# C B A | K S A
QHA_TABLE = _rows("""
0 0 0 | 0 0 0
0 0 1 | 0 1 1
0 1 0 | 0 1 0
0 1 1 | 1 0 1
1 0 0 | 1 0 0
1 0 1 | 1 1 1
1 1 0 | 1 1 0
1 1 1 | 0 0 1
""")


def msb_first_to_int(bits) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | b
    return v


def table_as_permutation(rows) -> list[tuple[int, int]]:
    """Golden rows as (input, output) integers with wire 0 = rightmost column."""
    return [(msb_first_to_int(i), msb_first_to_int(o)) for i, o in rows]


def _bit(v) -> int:
    if v not in (0, 1, True, False):
        raise ValueError(f"expected a bit, got {v!r}")
    return int(v)


def majority(a: int, b: int, c: int) -> int:
    return (a & b) | (a & c) | (b & c)


def classical_full_add(a: int, b: int, cin: int) -> tuple[int, int]:
    a, b, cin = _bit(a), _bit(b), _bit(cin)
    return a ^ b ^ cin, majority(a, b, cin)


def classical_half_add(a: int, b: int) -> tuple[int, int]:
    a, b = _bit(a), _bit(b)
    return a ^ b, a & b


@dataclass(frozen=True)
class CarrySaveNumber:
    sum_bits: tuple[int, ...]
    carry_bits: tuple[int, ...]
    offset: int = 1

    def __post_init__(self):
        if self.offset < 0:
            raise ValueError("offset must be non-negative")
        for b in self.sum_bits + self.carry_bits:
            _bit(b)

    @classmethod
    def from_ints(cls, s: int, k: int, n: int, m: int | None = None, offset: int = 1) -> "CarrySaveNumber":
        m = n if m is None else m
        return cls(tuple((s >> i) & 1 for i in range(n)), tuple((k >> i) & 1 for i in range(m)), offset)

    @property
    def value(self) -> int:
        return cs_value(self)


def cs_value(x: CarrySaveNumber) -> int:
    s = sum(b << i for i, b in enumerate(x.sum_bits))
    k = sum(b << (i + x.offset) for i, b in enumerate(x.carry_bits))
    return s + k


def carry_save_add(a: int, b: int, c: int, n: int) -> CarrySaveNumber:
    """Bitwise 3->2 compression of three n-bit integers."""
    sums, carries = [], []
    for i in range(n):
        s, k = classical_full_add((a >> i) & 1, (b >> i) & 1, (c >> i) & 1)
        sums.append(s)
        carries.append(k)
    return CarrySaveNumber(tuple(sums), tuple(carries), 1)


def classical_modexp(a: int, e: int, M: int) -> int:
    if M == 0:
        raise ValueError("modulus must be non-zero")
    if M < 0 or a < 0 or e < 0:
        raise ValueError("arguments must be non-negative")
    result, base = 1 % M, a % M
    while e:
        if e & 1:
            result = result * base % M
        base = base * base % M
        e >>= 1
    return result
