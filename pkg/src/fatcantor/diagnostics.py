"""Numerical checks of the regularity and measure inequalities for ternary fat Cantor sets.

The infinite set ``B`` is never materialized. Every ``B``-dependent measure
is sandwiched through a finite level ``S_J`` using the exact identity
``mu(S_J minus B) = (1 - gamma)(2/3)**J``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .cantor_set import (
    MAX_DEPTH,
    CantorParams,
    DepthExceededError,
    IntervalSet,
    fraction_str,
    level_set,
    residual_measure,
    sigma,
    symmetric_difference,
    translate,
)
from .riesz_coeffs import FourierTable
from .symbolic_sequences import IndexSet, upper_beurling_estimate

# Exponent p in ||chi_B(. - sigma_j) - chi_B||^2 <= c sigma_j^p.
SOBOLEV_EXPONENT = 1.0 - math.log(2) / math.log(3)


@lru_cache(maxsize=64)
def _level(params: CantorParams, J: int) -> IntervalSet:
    return level_set(params, J)


@dataclass
class SobolevProbe:
    gamma: Fraction
    s: float
    K_schedule: list[int]
    partial_sums: list[float]
    p: float = SOBOLEV_EXPONENT
    c: float = 0.0
    growth_ratios: list[float] = field(default_factory=list)
    block_slope: float = float("nan")
    predicted_slope: float = float("nan")
    signature: str = "inconclusive"

    def sigma(self, j: int) -> Fraction:
        return sigma(CantorParams(self.gamma), j)

    def to_json(self) -> dict:
        d = asdict(self)
        d["gamma"] = fraction_str(self.gamma)
        return d


def sobolev_partial_sums(
    t: FourierTable,
    s: float,
    K_schedule: Sequence[int] | None = None,
    fit_blocks: int = 8,
    margin: float = 0.02,
) -> SobolevProbe:
    """Partial sums of ``sum_{0<|k|<=K} chi^(k)**2 |k|**(2s)`` over increasing cutoffs.

    The signature is read from the dyadic block increments: the slope of
    ``log2(increment)`` against the block index, fitted over the last
    ``fit_blocks`` blocks, is compared with zero. A negative slope means the
    blocks shrink geometrically (``convergent``); a positive one means they
    grow (``divergent``). This is a finite heuristic, not a proof.
    """
    if s < 0:
        raise ValueError("s must be nonnegative")
    if K_schedule is None:
        K_schedule = [2**m for m in range(int(math.log2(t.K)) + 1)] if t.K >= 1 else []
    K_schedule = list(K_schedule)
    if K_schedule and max(K_schedule) > t.K:
        raise ValueError("cutoff beyond tabulated range")
    c = t.nonnegative
    k = np.arange(len(c), dtype=np.float64)
    weighted = 2.0 * c**2 * k ** (2.0 * s)
    weighted[0] = 0.0
    cums = np.cumsum(weighted)
    sums = [float(cums[K]) for K in K_schedule]
    ratios = [b / a for a, b in zip(sums, sums[1:]) if a > 0]
    g = float(t.gamma)
    probe = SobolevProbe(
        gamma=t.gamma,
        s=s,
        K_schedule=K_schedule,
        partial_sums=sums,
        c=4 * (1 - g) ** (1 - SOBOLEV_EXPONENT),
        growth_ratios=ratios,
        predicted_slope=2 * s - SOBOLEV_EXPONENT,
    )
    dyadic = [K for K in K_schedule if K & (K - 1) == 0]
    if len(dyadic) >= 3 and dyadic == K_schedule:
        incr = np.diff(sums)[-fit_blocks:]
        if np.all(incr > 0):
            x = np.arange(len(incr), dtype=np.float64)
            slope = float(np.polyfit(x, np.log2(incr), 1)[0])
            probe.block_slope = slope
            if slope < -margin:
                probe.signature = "convergent"
            elif slope > margin:
                probe.signature = "divergent"
    return probe


@dataclass(frozen=True)
class TranslationReport:
    gamma: Fraction
    j: int
    J: int
    sigma: Fraction
    step_value: Fraction
    step_bound: Fraction
    level_value: Fraction
    residual: Fraction
    combined: Fraction
    combined_bound: Fraction
    nesting_value: Fraction
    nesting_expected: Fraction

    @property
    def step_ok(self) -> bool:
        return self.step_value <= self.step_bound

    @property
    def combined_ok(self) -> bool:
        return self.combined <= self.combined_bound

    @property
    def nesting_ok(self) -> bool:
        return self.nesting_value == self.nesting_expected

    @property
    def passed(self) -> bool:
        return self.step_ok and self.combined_ok and self.nesting_ok

    @property
    def power_bound(self) -> float:
        """``c sigma_j**p`` in floating point; equals ``combined_bound`` analytically."""
        g = float(self.gamma)
        return 4 * (1 - g) ** (1 - SOBOLEV_EXPONENT) * float(self.sigma) ** SOBOLEV_EXPONENT

    def to_json(self) -> dict:
        exact = {
            name: fraction_str(getattr(self, name))
            for name in (
                "gamma", "sigma", "step_value", "step_bound", "level_value",
                "residual", "combined", "combined_bound", "nesting_value", "nesting_expected",
            )
        }
        return {
            "check": "translation_inequality",
            "inputs": {"gamma": exact["gamma"], "j": self.j, "J": self.J},
            "exact": exact,
            "float": {
                "step_value": float(self.step_value),
                "step_bound": float(self.step_bound),
                "combined": float(self.combined),
                "combined_bound": float(self.combined_bound),
                "power_bound": self.power_bound,
            },
            "step_ok": self.step_ok,
            "combined_ok": self.combined_ok,
            "nesting_ok": self.nesting_ok,
            "passed": self.passed,
        }


def translation_inequality_check(
    params: CantorParams, j: int, J: int = 12, max_depth: int = MAX_DEPTH
) -> TranslationReport:
    """Exact check of ``mu((B + sigma_j) symdiff B) <= 4 (1 - gamma)(2/3)**j``.

    ``mu((B+s) symdiff B)`` is bounded by the exactly computed
    ``mu((S_J+s) symdiff S_J)`` plus twice the residual ``mu(S_J symdiff B)``.
    """
    if not 1 <= j <= J:
        raise ValueError("need 1 <= j <= J")
    if J > max_depth:
        raise DepthExceededError(f"level {J} exceeds depth limit {max_depth}")
    s = sigma(params, j)
    Sj, SJ = _level(params, j), _level(params, J)
    one_minus = 1 - params.gamma
    step_value = symmetric_difference(translate(Sj, s), Sj).measure
    level_value = symmetric_difference(translate(SJ, s), SJ).measure
    residual = residual_measure(params, J)
    return TranslationReport(
        gamma=params.gamma,
        j=j,
        J=J,
        sigma=s,
        step_value=step_value,
        step_bound=2 * one_minus * Fraction(2, 3) ** j,
        level_value=level_value,
        residual=residual,
        combined=level_value + 2 * residual,
        combined_bound=4 * one_minus * Fraction(2, 3) ** j,
        nesting_value=symmetric_difference(Sj, SJ).measure,
        nesting_expected=residual_measure(params, j) - residual,
    )


def sigma_ratio_check(params: CantorParams, jmax: int = 32) -> dict:
    """Both ratio conditions on ``sigma_j``: ``limsup < 1`` and ``liminf > 0``."""
    ratios = {sigma(params, j + 1) / sigma(params, j) for j in range(1, jmax)}
    return {
        "ratios": sorted(fraction_str(r) for r in ratios),
        "limsup_below_one": max(ratios) < 1,
        "liminf_above_zero": min(ratios) > 0,
    }


@dataclass(frozen=True)
class DensityVerdict:
    estimate: Fraction
    gamma: Fraction
    k: int
    slack: Fraction
    verdict: str

    def to_json(self) -> dict:
        return {
            "check": "density_vs_measure",
            "k": self.k,
            "estimate": fraction_str(self.estimate),
            "estimate_float": float(self.estimate),
            "gamma": fraction_str(self.gamma),
            "slack": fraction_str(self.slack),
            "verdict": self.verdict,
        }


ALPHA_MUST_VANISH = "alpha must vanish"
NO_OBSTRUCTION = "no obstruction"


def density_vs_measure(F: IndexSet, params: CantorParams, k: int, a: int, b: int) -> DensityVerdict:
    """Compare the upper density estimate of ``F`` with ``mu(B)``.

    Only one direction is meaningful: density above the measure rules out a
    Riesz pair, while density below it proves nothing.
    """
    est = upper_beurling_estimate(F, k, a, b)
    slack = Fraction(4, k)
    verdict = ALPHA_MUST_VANISH if est - slack > params.gamma else NO_OBSTRUCTION
    return DensityVerdict(est, params.gamma, k, slack, verdict)
