import math
from fractions import Fraction as Fr

import numpy as np
import pytest

from fatcantor.cantor_set import CantorParams, gap_offset, interval_length, level_measure
from fatcantor.riesz_coeffs import (
    choose_depth,
    coefficient,
    level_coefficient_direct,
    level_coefficient_exact,
    parseval_partial,
    table,
)

P = CantorParams
G34 = P(Fr(3, 4))


def reference_product(params, k, J=90):
    """Riesz product with exact-rational phase reduction for every factor."""
    out = float(params.gamma)
    for j in range(1, J + 1):
        ph = (gap_offset(params, j) * k) % 1
        out *= math.cos(2 * math.pi * float(ph))
    return out


@pytest.mark.parametrize("g", [Fr(1, 4), Fr(1, 2), Fr(3, 4)])
@pytest.mark.parametrize("J", [1, 7, 40])
def test_coefficient_at_zero_is_gamma(g, J):
    assert coefficient(P(g), 0, J) == float(g)


def test_single_factor():
    assert coefficient(G34, 1, 1) == pytest.approx(0.75 * math.cos(2 * math.pi * 13 / 48), abs=1e-15)


def test_choose_depth_examples():
    assert choose_depth(G34, 1, 1e-12) <= 30
    assert choose_depth(G34, 4095, 1e-12) <= 55


@pytest.mark.parametrize("g", [Fr(1, 20), Fr(1, 4), Fr(3, 4), Fr(19, 20)])
def test_choose_depth_monotone_in_K(g):
    depths = [choose_depth(P(g), K, 1e-12) for K in [0, 1, 2, 5, 17, 100, 1000, 4095, 65536]]
    assert depths == sorted(depths)


@pytest.mark.parametrize("g", [Fr(1, 4), Fr(3, 4)])
def test_choose_depth_is_minimal_and_certified(g):
    p, K, eps = P(g), 4095, 1e-12
    J = choose_depth(p, K, eps)
    tail = sum(2 * math.pi**2 * float(gap_offset(p, j)) ** 2 * K**2 for j in range(J + 1, 200))
    assert tail <= eps
    tail_prev = tail + 2 * math.pi**2 * float(gap_offset(p, J)) ** 2 * K**2
    assert tail_prev > eps


@pytest.mark.parametrize("g", [Fr(1, 4), Fr(3, 4), Fr(2, 7)])
def test_table_within_certified_bound_of_deep_product(g):
    t = table(P(g), 4095, 1e-12)
    ks = list(range(0, 60)) + list(range(4000, 4096)) + [1023, 2048, 3001]
    for k in ks:
        assert abs(t[k] - reference_product(P(g), k)) <= t.err_bound


def test_table_basic_properties(tm_tables):
    assert np.array_equal(table(G34, 0).values, [0.75])
    for g, t in tm_tables.items():
        assert abs(t[0] - float(g)) <= t.err_bound
        assert np.array_equal(t.values, t.values[::-1])
        assert np.all(np.abs(t.values) <= float(g))
        assert len(t.values) == 2 * 4095 + 1


def test_table_is_read_only():
    t = table(G34, 10)
    with pytest.raises(ValueError):
        t.values[0] = 1.0


def test_riesz_product_matches_level_limit():
    # coefficient at depth 60 against the level-40 closed form with its sinc envelope removed
    t = table(G34, 4095, 1e-12)
    J = 40
    mass = float(2**J * interval_length(G34, J))
    for k in range(0, 4096, 7):
        rescaled = level_coefficient_exact(G34, J, k) / mass * 0.75
        assert abs(coefficient(G34, k, 60) - rescaled) <= t.err_bound
        assert abs(t[k] - rescaled) <= t.err_bound


@pytest.mark.parametrize("g", [Fr(1, 4), Fr(3, 4)])
def test_level_exact_at_zero_is_level_measure(g):
    for J in range(0, 30):
        assert level_coefficient_exact(P(g), J, 0) == pytest.approx(float(level_measure(P(g), J)), rel=1e-15)


def test_level_zero_is_full_interval():
    for k in range(1, 50):
        assert abs(level_coefficient_exact(G34, 0, k)) < 1e-15
        assert abs(level_coefficient_direct(G34, 0, k)) < 1e-15


@pytest.mark.parametrize("g", [Fr(1, 4), Fr(1, 2), Fr(3, 4)])
def test_exact_matches_direct_small(g):
    ks = np.arange(-64, 65)
    for J in range(0, 8):
        direct = level_coefficient_direct(P(g), J, ks)
        exact = np.array([level_coefficient_exact(P(g), J, int(k)) for k in ks])
        assert np.max(np.abs(direct - exact)) <= 1e-12 * 2**J


def test_direct_even_and_mass():
    ks = np.arange(1, 100)
    plus = level_coefficient_direct(G34, 6, ks)
    minus = level_coefficient_direct(G34, 6, -ks)
    assert np.max(np.abs(plus - minus)) < 1e-13
    assert level_coefficient_direct(G34, 6, 0) == float(level_measure(G34, 6))


def test_convergence_in_level():
    for k in (1, 5, 37):
        errs = []
        for J in (5, 10, 20, 30):
            mass = float(2**J * interval_length(G34, J))
            approx = level_coefficient_exact(G34, J, k) / mass * 0.75
            errs.append(abs(coefficient(G34, k, 60) - approx))
        assert errs == sorted(errs, reverse=True)
        assert errs[-1] < 1e-14


def test_parseval_partial():
    for g in (Fr(1, 4), Fr(3, 4)):
        assert parseval_partial(table(P(g), 0)) == float(g) ** 2
    t = table(G34, 65536, 1e-12)
    sums = np.cumsum(t.nonnegative**2 * np.r_[1, 2 * np.ones(65536)])
    assert np.all(np.diff(sums) >= 0)
    assert sums[-1] == pytest.approx(parseval_partial(t), rel=1e-12)
    total = parseval_partial(t)
    assert 0.70 <= total <= 0.75
    assert total <= 0.75 + 2 * (2 * 65536 + 1) * t.err_bound * 0.75
    # doubling K barely moves the sum
    assert total - parseval_partial(table(G34, 32768)) < 2e-3
