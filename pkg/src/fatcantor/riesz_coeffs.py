"""Fourier coefficients of the characteristic function of a ternary fat Cantor set.

The transform is the Riesz product ``gamma * prod_j cos(2 pi x_j k)``. It is
truncated at a depth chosen so that the tail of the product is certifiably
below a requested tolerance.

Two further routes compute the transform of the finite level ``S_J``: a
closed form (sinc envelope times the truncated product) and a brute-force
sum over the materialized arcs. They are independent and are used to check
each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cantor_set import (
    MAX_DEPTH,
    CantorParams,
    DepthExceededError,
    gap_offset,
    interval_length,
    level_set,
)

DEFAULT_EPS = 1e-12

_INT64_SAFE = 2**62
_ULP = 2.0**-52


def _phase_mod1(x: Fraction, k: np.ndarray) -> np.ndarray:
    """``k * x mod 1`` as float64, exact before the final division when it fits int64."""
    kmax = int(np.max(np.abs(k))) if k.size else 0
    num, den = x.numerator, x.denominator
    if den < _INT64_SAFE and num * max(kmax, 1) < _INT64_SAFE:
        r = np.mod(k.astype(np.int64) * num, den)
        return r.astype(np.float64) / den
    # Deep factors: x is tiny, so the direct product carries negligible error.
    return np.mod(k.astype(np.float64) * float(x), 1.0)


def _cos_factor(x: Fraction, k: np.ndarray) -> np.ndarray:
    return np.cos(2.0 * np.pi * _phase_mod1(x, k))


def _riesz_product(params: CantorParams, k: np.ndarray, J: int) -> np.ndarray:
    out = np.ones(k.shape, dtype=np.float64)
    for j in range(1, J + 1):
        out *= _cos_factor(gap_offset(params, j), k)
    return out


def coefficient(params: CantorParams, k: int, J: int) -> float:
    """``gamma * prod_{j=1..J} cos(2 pi x_j k)``."""
    if J < 1:
        raise ValueError("J must be at least 1")
    return float(params.gamma) * float(_riesz_product(params, np.array([k]), J)[0])


def tail_bound(params: CantorParams, K: int, J: int) -> float:
    """Upper bound on ``sum_{j>J} 2 pi^2 x_j^2 K^2``.

    ``x_j <= (gamma/2 + (1-gamma)) 2**-j`` and the tail is geometric with ratio 1/4.
    """
    g = float(params.gamma)
    c = g / 2 + (1 - g)
    return 2 * math.pi**2 * K**2 * c**2 * 4.0 ** (-J) / 3.0


def choose_depth(params: CantorParams, K: int, eps: float = DEFAULT_EPS) -> int:
    """Smallest depth whose product tail perturbs every ``|k| <= K`` by at most ``eps``.

    Uses ``|prod cos(t_j) - 1| <= sum (1 - cos t_j) <= sum t_j**2 / 2``. The
    tail sum is evaluated exactly from the closed form of ``x_j`` up to the
    point where the geometric remainder bound takes over.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if K == 0:
        return 1
    # Exact tail sums over j > J, truncated where the geometric bound is far below eps.
    horizon = 1
    while tail_bound(params, K, horizon) > eps * 1e-6:
        horizon += 1
    terms = [2 * math.pi**2 * K**2 * float(gap_offset(params, j)) ** 2 for j in range(1, horizon + 1)]
    rest = tail_bound(params, K, horizon)
    tail = rest
    for J in range(horizon, 0, -1):
        # tail == sum_{j > J} terms + rest
        if tail > eps:
            return J + 1
        tail += terms[J - 1]
    return 1


@dataclass(frozen=True, eq=False)
class FourierTable:
    """Coefficients ``chi_B^(k)`` for ``k = -K..K`` with a certified error bound.

    ``values[K + k]`` holds the coefficient at frequency ``k``.
    """

    gamma: Fraction
    K: int
    J: int
    eps: float
    values: np.ndarray = field(repr=False)
    err_bound: float = 0.0

    def __post_init__(self):
        self.values.setflags(write=False)

    def __getitem__(self, k):
        return self.values[np.asarray(k) + self.K]

    @property
    def params(self) -> CantorParams:
        return CantorParams(self.gamma)

    @property
    def nonnegative(self) -> np.ndarray:
        """Coefficients for ``k = 0..K``."""
        return self.values[self.K:]


def table(params: CantorParams, K: int, eps: float = DEFAULT_EPS) -> FourierTable:
    if K < 0:
        raise ValueError("K must be nonnegative")
    J = choose_depth(params, K, eps)
    k = np.arange(0, K + 1)
    half = float(params.gamma) * _riesz_product(params, k, J)
    values = np.concatenate([half[:0:-1], half])
    g = float(params.gamma)
    # Truncation tail plus float rounding: each factor is accurate to a few ulps.
    err = g * eps + g * 4 * J * _ULP
    return FourierTable(params.gamma, K, J, float(eps), values, err)


def level_coefficient_exact(params: CantorParams, J: int, k: int) -> float:
    """Closed-form transform of ``S_J``: ``2**J L_J sinc(k L_J) prod_{j<=J} cos(2 pi x_j k)``."""
    if J < 0:
        raise ValueError("J must be nonnegative")
    L = interval_length(params, J)
    mass = float(2**J * L)
    if k == 0:
        return mass
    # sin(pi k L) / (pi k L), with k L reduced mod 2 exactly.
    kl = k * L
    r = kl - 2 * math.floor(kl / 2)
    sinc = math.sin(math.pi * float(r)) / (math.pi * float(kl))
    prod = float(_riesz_product(params, np.array([k]), J)[0]) if J else 1.0
    return mass * sinc * prod


def level_coefficient_direct(
    params: CantorParams, J: int, k: int | np.ndarray, max_depth: int = MAX_DEPTH
) -> float | np.ndarray:
    """Transform of ``S_J`` by integrating ``exp(-2 pi i k x)`` over each materialized arc."""
    if J > max_depth:
        raise DepthExceededError(f"level {J} exceeds depth limit {max_depth}")
    s = level_set(params, J, max_depth=max_depth)
    scalar = np.ndim(k) == 0
    ks = np.atleast_1d(np.asarray(k, dtype=np.int64))
    ends = np.array([x for arc in s.arcs for x in arc], dtype=object)
    den = math.lcm(*(x.denominator for x in ends))
    nums = [int(x * den) for x in ends]
    kmax = int(np.max(np.abs(ks))) if ks.size else 0
    out = np.empty(ks.shape, dtype=np.float64)
    if den * max(kmax, 1) < _INT64_SAFE:
        n = np.array(nums, dtype=np.int64)
        for i, kk in enumerate(ks):
            if kk == 0:
                out[i] = float(s.measure)
                continue
            ph = np.mod(n * kk, den).astype(np.float64) / den
            e = np.exp(-2j * np.pi * ph)
            total = np.sum(e[1::2] - e[0::2])
            out[i] = (total / (-2j * np.pi * kk)).real
    else:
        for i, kk in enumerate(ks):
            kk = int(kk)
            if kk == 0:
                out[i] = float(s.measure)
                continue
            ph = np.array([(m * kk % den) / den for m in nums])
            e = np.exp(-2j * np.pi * ph)
            total = np.sum(e[1::2] - e[0::2])
            out[i] = (total / (-2j * np.pi * kk)).real
    return float(out[0]) if scalar else out


def parseval_partial(t: FourierTable) -> float:
    """``sum_{|k| <= K} chi_B^(k)**2``; tends to ``gamma`` from below as ``K`` grows."""
    return float(np.sum(t.values**2))
