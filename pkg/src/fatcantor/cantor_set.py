"""Exact construction of ternary fat Cantor sets on the circle.

The set with Haar measure ``gamma`` starts from ``[-1/2, 1/2]``. Step ``j``
removes the open middle interval of length ``(1 - gamma) 3**-j`` from each of
the ``2**(j-1)`` surviving intervals. Every quantity here is an exact
:class:`~fractions.Fraction`; floating point never enters this module.

Circle arcs are stored reduced to ``[0, 1]``. Use :meth:`IntervalSet.centered`
to view them in ``[-1/2, 1/2]`` coordinates.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

MAX_DEPTH = 24

Arc = tuple[Fraction, Fraction]


class DepthExceededError(ValueError):
    """Raised when a level set would have more arcs than the configured limit."""


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions, decimal strings and floats to an exact Fraction.

    Floats are read through their shortest decimal repr, so ``0.05`` becomes
    ``1/20`` rather than the binary expansion of the double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"not a finite number: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class CantorParams:
    """The measure parameter of one ternary fat Cantor set."""

    gamma: Fraction

    def __post_init__(self):
        g = as_fraction(self.gamma)
        if not 0 < g < 1:
            raise ValueError(f"gamma must lie strictly between 0 and 1, got {g}")
        object.__setattr__(self, "gamma", g)

    @property
    def key(self) -> str:
        return fraction_str(self.gamma)


def interval_length(params: CantorParams, j: int) -> Fraction:
    """Length ``L_j = gamma 2**-j + (1-gamma) 3**-j`` of each arc of ``S_j``."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    g = params.gamma
    return g / 2**j + (1 - g) / 3**j


def gap_offset(params: CantorParams, j: int) -> Fraction:
    """Center shift ``x_j`` between a parent arc of ``S_{j-1}`` and its children."""
    if j < 1:
        raise ValueError("j must be positive")
    g = params.gamma
    return g / 2 ** (j + 1) + (1 - g) / 3**j


def gap_offset_from_lengths(params: CantorParams, j: int) -> Fraction:
    if j < 1:
        raise ValueError("j must be positive")
    return (interval_length(params, j - 1) - interval_length(params, j)) / 2


def removed_gap(params: CantorParams, j: int) -> Fraction:
    """Length of each gap removed at step ``j``; also the shift ``sigma_j``."""
    if j < 1:
        raise ValueError("j must be positive")
    return (1 - params.gamma) / 3**j


sigma = removed_gap


def residual_measure(params: CantorParams, J: int) -> Fraction:
    """Exact ``mu(S_J minus B) = (1-gamma)(2/3)**J``."""
    return (1 - params.gamma) * Fraction(2, 3) ** J


def level_measure(params: CantorParams, J: int) -> Fraction:
    return params.gamma + residual_measure(params, J)


def _reduce_arc(a: Fraction, b: Fraction) -> list[Arc]:
    length = b - a
    if length >= 1:
        return [(Fraction(0), Fraction(1))]
    a0 = a - math.floor(a)
    b0 = a0 + length
    if b0 <= 1:
        return [(a0, b0)]
    return [(a0, Fraction(1)), (Fraction(0), b0 - 1)]


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of closed circle arcs with exact endpoints in ``[0, 1]``.

    Arcs are sorted and pairwise non-overlapping. Arcs may touch at a single
    point (for instance at the wrap point ``0 == 1``); that is a null set and
    is kept so that level sets retain one arc per construction interval.
    """

    arcs: tuple[Arc, ...] = ()

    @classmethod
    def from_arcs(cls, arcs: Iterable[tuple]) -> "IntervalSet":
        """Build from arbitrary real-line arcs, reducing them modulo 1."""
        pieces: list[Arc] = []
        for a, b in arcs:
            a, b = as_fraction(a), as_fraction(b)
            if b < a:
                raise ValueError(f"arc endpoints out of order: [{a}, {b}]")
            if a == b:
                continue
            pieces.extend(_reduce_arc(a, b))
        pieces.sort()
        merged: list[list[Fraction]] = []
        for a, b in pieces:
            if merged and a < merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return cls(tuple((a, b) for a, b in merged))

    @classmethod
    def full(cls) -> "IntervalSet":
        return cls(((Fraction(0), Fraction(1)),))

    def __len__(self) -> int:
        return len(self.arcs)

    def __iter__(self):
        return iter(self.arcs)

    def __neg__(self) -> "IntervalSet":
        return IntervalSet.from_arcs((-b, -a) for a, b in self.arcs)

    @property
    def measure(self) -> Fraction:
        return sum((b - a for a, b in self.arcs), Fraction(0))

    def centered(self) -> list[Arc]:
        """Arcs in ``[-1/2, 1/2]`` coordinates, sorted.

        Arcs straddling 1/2 are split there; pieces that touch on the line are joined.
        """
        half = Fraction(1, 2)
        out: list[Arc] = []
        for a, b in self.arcs:
            if b <= half:
                out.append((a, b))
            elif a >= half:
                out.append((a - 1, b - 1))
            else:
                out.append((a, half))
                out.append((-half, b - 1))
        out.sort()
        return list(_coalesce(out))

    def contains(self, x) -> bool:
        x = as_fraction(x)
        x = x - math.floor(x)
        return any(a <= x <= b for a, b in self.arcs) or (
            x == 0 and any(b == 1 for _, b in self.arcs)
        )

    def same_set(self, other: "IntervalSet") -> bool:
        """Equality as point sets, ignoring how touching arcs are split."""
        return _coalesce(self.arcs) == _coalesce(other.arcs)

    def to_json(self) -> list[list[str]]:
        return [[fraction_str(a), fraction_str(b)] for a, b in self.arcs]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str]]) -> "IntervalSet":
        return cls.from_arcs((Fraction(a), Fraction(b)) for a, b in data)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _coalesce(arcs: Sequence[Arc]) -> tuple[Arc, ...]:
    out: list[list[Fraction]] = []
    for a, b in arcs:
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


def level_set(params: CantorParams, J: int, max_depth: int = MAX_DEPTH) -> IntervalSet:
    """The level-``J`` approximation ``S_J``: ``2**J`` arcs of length ``L_J``."""
    if J < 0:
        raise ValueError("J must be nonnegative")
    if J > max_depth:
        raise DepthExceededError(
            f"level {J} would materialize 2**{J} arcs; limit is depth {max_depth}"
        )
    centers = [Fraction(0)]
    for j in range(1, J + 1):
        x = gap_offset(params, j)
        centers = [c + s for c in centers for s in (-x, x)]
    half = interval_length(params, J) / 2
    return IntervalSet.from_arcs((c - half, c + half) for c in centers)


def measure(s: IntervalSet) -> Fraction:
    return s.measure


def translate(s: IntervalSet, t) -> IntervalSet:
    t = as_fraction(t)
    return IntervalSet.from_arcs((a + t, b + t) for a, b in s.arcs)


def _endpoints(s: IntervalSet) -> list[Fraction]:
    return [x for arc in s.arcs for x in arc]


def _combine(a: IntervalSet, b: IntervalSet, keep) -> IntervalSet:
    # Sweep the elementary segments between consecutive endpoints of both sets.
    points = [Fraction(0)]
    for p in heapq.merge(_endpoints(a), _endpoints(b), [Fraction(1)]):
        if p != points[-1]:
            points.append(p)
    ia = ib = 0
    na, nb = len(a.arcs), len(b.arcs)
    out: list[list[Fraction]] = []
    for p, q in zip(points, points[1:]):
        while ia < na and a.arcs[ia][1] <= p:
            ia += 1
        while ib < nb and b.arcs[ib][1] <= p:
            ib += 1
        in_a = ia < na and a.arcs[ia][0] <= p
        in_b = ib < nb and b.arcs[ib][0] <= p
        if keep(in_a, in_b):
            if out and out[-1][1] == p:
                out[-1][1] = q
            else:
                out.append([p, q])
    return IntervalSet(tuple((x, y) for x, y in out))


def symmetric_difference(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return _combine(a, b, lambda x, y: x != y)


def union(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return _combine(a, b, lambda x, y: x or y)


def intersection(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return _combine(a, b, lambda x, y: x and y)


def difference(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return _combine(a, b, lambda x, y: x and not y)
