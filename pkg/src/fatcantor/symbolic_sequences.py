"""Two-sided integer index sets: Thue-Morse, arithmetic progressions, shifts, explicit windows."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np


def thue_morse_bit(n: int) -> int:
    """Parity of the binary digit sum of ``n``; negative ``n`` mirrors to ``-1 - n``."""
    if n < 0:
        n = -1 - n
    return bin(n).count("1") & 1


def thue_morse_bits(n: np.ndarray) -> np.ndarray:
    """Vectorized :func:`thue_morse_bit` over an integer array."""
    n = np.asarray(n, dtype=np.int64)
    m = np.where(n < 0, -1 - n, n).astype(np.uint64)
    for shift in (32, 16, 8, 4, 2, 1):
        m ^= m >> np.uint64(shift)
    return (m & np.uint64(1)).astype(np.int8)


class IndexSet:
    """A subset of the integers given by a vectorized membership test."""

    def mask(self, a: int, b: int) -> np.ndarray:
        """Boolean membership of ``a, a+1, ..., b``."""
        raise NotImplementedError

    def __contains__(self, m: int) -> bool:
        return bool(self.mask(m, m)[0])

    def enumerate(self, a: int, b: int) -> list[int]:
        return enumerate_window(self, a, b)

    def shift(self, offset: int) -> "Shifted":
        return Shifted(self, offset)


@dataclass(frozen=True)
class ThueMorse(IndexSet):
    def mask(self, a, b):
        return thue_morse_bits(np.arange(a, b + 1)) == 1

    def __str__(self):
        return "thue-morse"


@dataclass(frozen=True)
class Arithmetic(IndexSet):
    """The progression ``j + n Z``."""

    j: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("modulus must be positive")

    def mask(self, a, b):
        return np.mod(np.arange(a, b + 1) - self.j, self.n) == 0

    def __str__(self):
        return f"arith:{self.j}:{self.n}"


@dataclass(frozen=True)
class Shifted(IndexSet):
    """``offset + base``."""

    base: IndexSet
    offset: int

    def mask(self, a, b):
        return self.base.mask(a - self.offset, b - self.offset)

    def __str__(self):
        return f"{self.offset}+({self.base})"


@dataclass(frozen=True)
class Explicit(IndexSet):
    """Members are ``start + i`` for each ``i`` with ``bits[i] == 1``; nothing outside the window."""

    start: int
    bits: tuple[int, ...]

    def mask(self, a, b):
        out = np.zeros(b - a + 1, dtype=bool)
        lo, hi = max(a, self.start), min(b, self.start + len(self.bits) - 1)
        if lo <= hi:
            window = np.asarray(self.bits[lo - self.start : hi - self.start + 1], dtype=np.int8)
            out[lo - a : hi - a + 1] = window == 1
        return out

    @property
    def members(self) -> list[int]:
        return [self.start + i for i, bit in enumerate(self.bits) if bit]

    def __len__(self):
        return sum(self.bits)

    def __str__(self):
        return f"bits@{self.start}[{len(self.bits)}]"


def enumerate_window(F: IndexSet, a: int, b: int) -> list[int]:
    """Members of ``F`` in ``[a, b]``, ascending."""
    if a > b:
        raise ValueError("empty window")
    return (np.flatnonzero(F.mask(a, b)) + a).tolist()


def truncate(F: IndexSet, n: int) -> Explicit:
    """``F`` intersected with ``[0, n]``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return Explicit(0, tuple(int(x) for x in F.mask(0, n)))


@dataclass(frozen=True)
class CoverResult:
    covered: bool
    first_uncovered: int | None = None

    def __bool__(self):
        return self.covered


def is_cover(sets: Sequence[IndexSet], a: int, b: int) -> CoverResult:
    """Whether every integer in ``[a, b]`` lies in one of ``sets``."""
    if not sets:
        raise ValueError("need at least one set")
    hit = np.zeros(b - a + 1, dtype=bool)
    for F in sets:
        hit |= F.mask(a, b)
    if hit.all():
        return CoverResult(True)
    return CoverResult(False, int(a + np.argmin(hit)))


def upper_beurling_estimate(F: IndexSet, k: int, a: int, b: int) -> Fraction:
    """Largest fraction of members in a window ``{s+1, ..., s+k}`` over ``s in [a, b-k]``.

    For an integer set the supremum over real open intervals of length ``k``
    is attained by these half-open integer windows.
    """
    if k < 1:
        raise ValueError("window length must be positive")
    if b - a < k:
        raise ValueError("search range shorter than the window")
    m = F.mask(a + 1, b).astype(np.int64)
    c = np.concatenate([[0], np.cumsum(m)])
    counts = c[k:] - c[:-k]
    return Fraction(int(counts.max()), k)


def density_schedule(F: IndexSet, a: int, b: int, exponents: Sequence[int]) -> list[tuple[int, Fraction]]:
    """Estimates over window lengths ``2**m``; reported as a table, not extrapolated."""
    return [(2**m, upper_beurling_estimate(F, 2**m, a, b)) for m in exponents if 2**m <= b - a]


def parse_index_set(text: str) -> IndexSet:
    """Parse a descriptor: ``thue-morse``, ``arith:j:n`` or ``bits:<path>``.

    A bits file holds a start index on its first line followed by a string of
    0/1 characters (whitespace ignored), or is a ``n,bit`` CSV.
    """
    text = text.strip()
    if text in ("thue-morse", "thue_morse", "tm"):
        return ThueMorse()
    if text.startswith("arith:"):
        _, j, n = text.split(":")
        return Arithmetic(int(j), int(n))
    if text.startswith("bits:"):
        with open(text[5:]) as fh:
            return read_bits(fh.read())
    raise ValueError(f"unrecognized index set descriptor: {text!r}")


def read_bits(content: str) -> Explicit:
    lines = [ln.strip() for ln in content.splitlines() if ln.strip() and not ln.startswith("#")]
    if lines and "," in lines[0]:
        rows = list(csv.reader(lines))
        if rows[0][0].strip() == "n":
            rows = rows[1:]
        pairs = sorted((int(n), int(bit)) for n, bit in rows)
        start = pairs[0][0]
        bits = [0] * (pairs[-1][0] - start + 1)
        for n, bit in pairs:
            bits[n - start] = bit
        return Explicit(start, tuple(bits))
    start = int(lines[0])
    bits = "".join(lines[1:])
    if set(bits) - {"0", "1"}:
        raise ValueError("bit string must contain only 0 and 1")
    return Explicit(start, tuple(int(ch) for ch in bits))


def bits_csv(F: IndexSet, a: int, b: int) -> str:
    """``n,bit`` CSV for the window ``[a, b]``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "bit"])
    for n, bit in zip(range(a, b + 1), F.mask(a, b)):
        w.writerow([n, int(bit)])
    return buf.getvalue()
