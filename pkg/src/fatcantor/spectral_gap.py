"""Restricted Laurent (Toeplitz) matrices and their smallest eigenvalues.

For a finite index set ``G`` the matrix ``[chi_B^(G[q] - G[p])]`` is a
principal submatrix of the Laurent operator of ``chi_B``. Its smallest
eigenvalue is ``alpha(B, G)``, the least energy on ``B`` of a unit-norm
trigonometric polynomial with frequencies in ``G``. The eigenvector holds the
coefficients of that most localized polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.linalg

from .cantor_set import CantorParams
from .riesz_coeffs import DEFAULT_EPS, FourierTable, table
from .symbolic_sequences import IndexSet, truncate

RESIDUAL_TOL = 1e-8
PSD_TOL = 1e-7


class TableRangeError(ValueError):
    """A required lag is not covered by the Fourier table."""


class EigenConvergenceError(RuntimeError):
    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True, eq=False)
class RestrictedGram:
    indices: np.ndarray
    entries: np.ndarray = field(repr=False)
    gamma: Fraction
    K: int
    eps: float

    @property
    def size(self) -> int:
        return len(self.indices)


@dataclass(frozen=True, eq=False)
class EigenPair:
    eigenvalue: float
    eigenvector: np.ndarray = field(repr=False)
    residual: float
    norm: float
    spectrum_min: float
    spectrum_max: float


def build_gram(t: FourierTable, G: Sequence[int]) -> RestrictedGram:
    idx = np.asarray(sorted(G), dtype=np.int64)
    if idx.size == 0:
        raise ValueError("empty index set")
    span = int(idx[-1] - idx[0])
    if span > t.K:
        raise TableRangeError(f"index span {span} exceeds tabulated range K={t.K}")
    lags = idx[None, :] - idx[:, None]
    entries = t[lags]
    return RestrictedGram(idx, np.ascontiguousarray(entries), t.gamma, t.K, t.eps)


def min_eigenpair(m: RestrictedGram) -> EigenPair:
    """Smallest eigenpair by dense symmetric reduction, with residual check.

    Negative eigenvalues from rounding are returned as computed.
    """
    M = m.entries
    w, V = scipy.linalg.eigh(M, check_finite=False)
    lam, v = float(w[0]), V[:, 0]
    v = v / np.linalg.norm(v)
    norm = float(max(abs(w[0]), abs(w[-1])))
    residual = float(np.linalg.norm(M @ v - lam * v))
    if residual > RESIDUAL_TOL * max(norm, np.finfo(float).tiny):
        raise EigenConvergenceError(
            f"eigen residual {residual:.3e} above {RESIDUAL_TOL:g} * ||M|| = {RESIDUAL_TOL * norm:.3e}",
            residual,
        )
    return EigenPair(lam, v, residual, norm, lam, float(w[-1]))


@dataclass(frozen=True)
class AlphaPoint:
    n: int
    size: int
    alpha: float

    @property
    def L(self) -> float:
        return math.log2(self.n + 1)

    @property
    def log10_alpha(self) -> float:
        return math.log10(self.alpha) if self.alpha > 0 else float("nan")


def alpha(t: FourierTable, G: Sequence[int]) -> EigenPair:
    return min_eigenpair(build_gram(t, G))


def alpha_sequence(
    params: CantorParams,
    F: IndexSet,
    schedule: Sequence[int],
    eps: float = DEFAULT_EPS,
    t: FourierTable | None = None,
) -> list[AlphaPoint]:
    """``alpha(B, F_n)`` for each ``n`` in an ascending schedule, ``F_n = F`` cut to ``[0, n]``."""
    if list(schedule) != sorted(schedule):
        raise ValueError("schedule must be ascending")
    if t is None:
        t = table(params, max(schedule), eps)
    out = []
    for n in schedule:
        G = truncate(F, n).members
        out.append(AlphaPoint(n, len(G), alpha(t, G).eigenvalue))
    return out


def default_schedule(m_min: int = 3, m_max: int = 12) -> list[int]:
    return [2**m - 1 for m in range(m_min, m_max + 1)]
