from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fatcantor.cantor_set import (
    CantorParams,
    DepthExceededError,
    IntervalSet,
    difference,
    gap_offset,
    gap_offset_from_lengths,
    intersection,
    interval_length,
    level_set,
    measure,
    removed_gap,
    residual_measure,
    symmetric_difference,
    translate,
    union,
)

GAMMAS = [Fr(1, 4), Fr(1, 2), Fr(3, 4), Fr(1, 20), Fr(19, 20), Fr(2, 7)]


def P(g):
    return CantorParams(g)


@pytest.mark.parametrize("bad", [0, 1, Fr(-1, 3), Fr(3, 2)])
def test_params_reject_out_of_range(bad):
    with pytest.raises(ValueError):
        CantorParams(bad)


def test_params_read_decimals_exactly():
    assert CantorParams(0.05).gamma == Fr(1, 20)
    assert CantorParams("3/4").gamma == Fr(3, 4)


@pytest.mark.parametrize("g", GAMMAS)
def test_interval_length_at_zero_is_one(g):
    assert interval_length(P(g), 0) == 1


def test_interval_length_examples():
    assert interval_length(P(Fr(3, 4)), 1) == Fr(11, 24)
    assert interval_length(P(Fr(1, 4)), 2) == Fr(1, 4) * Fr(1, 4) + Fr(3, 4) * Fr(1, 9) == Fr(7, 48)


@pytest.mark.parametrize("g", GAMMAS)
def test_interval_length_recurrence(g):
    for j in range(1, 30):
        assert interval_length(P(g), j) == (interval_length(P(g), j - 1) - removed_gap(P(g), j)) / 2


def test_gap_offset_examples():
    assert gap_offset(P(Fr(3, 4)), 1) == Fr(13, 48)
    # 1/4 * 1/8 + 3/4 * 1/9
    assert gap_offset(P(Fr(1, 4)), 2) == Fr(1, 32) + Fr(1, 12) == Fr(11, 96)


def test_gap_offset_dyadic_limit():
    eps = Fr(1, 10**9)
    assert abs(gap_offset(P(1 - eps), 1) - Fr(1, 4)) <= eps


@pytest.mark.parametrize("g", GAMMAS)
def test_gap_offset_forms_agree(g):
    for j in range(1, 33):
        assert gap_offset(P(g), j) == gap_offset_from_lengths(P(g), j)


def test_level_set_examples():
    p = P(Fr(3, 4))
    assert level_set(p, 0).centered() == [(Fr(-1, 2), Fr(1, 2))]
    assert level_set(p, 1).centered() == [(Fr(-1, 2), Fr(-1, 24)), (Fr(1, 24), Fr(1, 2))]


@pytest.mark.parametrize("g", [Fr(1, 4), Fr(3, 4), Fr(2, 7)])
def test_measure_law_exact(g):
    top = 16 if g == Fr(3, 4) else 12
    for J in range(top + 1):
        S = level_set(P(g), J)
        assert len(S) == 2**J
        assert all(b - a == interval_length(P(g), J) for a, b in S.centered())
        assert measure(S) == g + (1 - g) * Fr(2, 3) ** J


@pytest.mark.parametrize("g", [Fr(1, 4), Fr(3, 4)])
def test_nesting_symmetry_and_separation(g):
    p = P(g)
    prev = level_set(p, 0).centered()
    for J in range(1, 11):
        arcs = level_set(p, J).centered()
        # nesting: each child arc inside some parent arc
        parents = iter(prev)
        a0, b0 = next(parents)
        for a, b in arcs:
            while not (a0 <= a and b <= b0):
                a0, b0 = next(parents)
        # symmetry about 0
        assert sorted((-b, -a) for a, b in arcs) == arcs
        # separation on the line
        gaps = [c - b for (_, b), (c, _) in zip(arcs, arcs[1:])]
        assert min(gaps) >= removed_gap(p, J)
        assert min(gaps) == removed_gap(p, J)
        prev = arcs


def test_depth_limit():
    with pytest.raises(DepthExceededError):
        level_set(P(Fr(1, 2)), 25)
    with pytest.raises(DepthExceededError):
        level_set(P(Fr(1, 2)), 5, max_depth=4)


def test_measure_examples():
    assert measure(IntervalSet()) == 0
    assert measure(level_set(P(Fr(3, 4)), 1)) == Fr(11, 12) == 2 * interval_length(P(Fr(3, 4)), 1)
    assert measure(IntervalSet.full()) == 1
    assert measure(IntervalSet.from_arcs([(Fr(-1, 2), Fr(1, 2))])) == 1


def test_translate_examples():
    s = IntervalSet.from_arcs([(0, Fr(1, 4)), (Fr(1, 2), Fr(2, 3))])
    assert translate(s, 0) == s
    wrapped = translate(IntervalSet.from_arcs([(0, Fr(1, 4))]), Fr(7, 8))
    assert wrapped.arcs == ((0, Fr(1, 8)), (Fr(7, 8), 1))


def test_symmetric_difference_examples():
    S = level_set(P(Fr(3, 4)), 5)
    assert measure(symmetric_difference(S, S)) == 0
    a = IntervalSet.from_arcs([(0, Fr(1, 2))])
    b = IntervalSet.from_arcs([(Fr(1, 4), Fr(3, 4))])
    assert measure(symmetric_difference(a, b)) == Fr(1, 2)


@pytest.mark.parametrize("g", [Fr(1, 4), Fr(3, 4)])
def test_symmetric_difference_of_levels(g):
    p = P(g)
    for J in range(0, 7):
        for m in range(1, 5):
            d = symmetric_difference(level_set(p, J), level_set(p, J + m))
            assert measure(d) == (1 - g) * (Fr(2, 3) ** J - Fr(2, 3) ** (J + m))
            assert measure(d) == residual_measure(p, J) - residual_measure(p, J + m)


def test_json_round_trip():
    S = level_set(P(Fr(3, 4)), 3)
    data = S.to_json()
    assert all("/" in x for arc in data for x in arc)
    assert IntervalSet.from_json(data) == S


def test_reflection():
    S = level_set(P(Fr(2, 7)), 6)
    assert (-S).same_set(S)


# Grid oracle: with every endpoint a multiple of 1/N, a set is a union of
# cells [i/N, (i+1)/N] and its measure is the count of covered cells over N.
N = 48


def cells(s: IntervalSet) -> set[int]:
    out = set()
    for a, b in s.arcs:
        out |= set(range(int(a * N), int(b * N)))
    return out


arc_st = st.tuples(st.integers(-2 * N, 2 * N), st.integers(0, N)).map(
    lambda t: (Fr(t[0], N), Fr(t[0] + t[1], N))
)
set_st = st.lists(arc_st, max_size=6).map(IntervalSet.from_arcs)


@settings(max_examples=200, deadline=None)
@given(set_st, set_st, st.integers(-3 * N, 3 * N))
def test_boolean_ops_match_grid_oracle(a, b, shift):
    ca, cb = cells(a), cells(b)
    assert measure(a) == Fr(len(ca), N)
    assert measure(symmetric_difference(a, b)) == Fr(len(ca ^ cb), N)
    assert measure(union(a, b)) == Fr(len(ca | cb), N)
    assert measure(intersection(a, b)) == Fr(len(ca & cb), N)
    assert measure(difference(a, b)) == Fr(len(ca - cb), N)
    t = translate(a, Fr(shift, N))
    assert measure(t) == measure(a)
    assert cells(t) == {(c + shift) % N for c in ca}
    assert measure(symmetric_difference(a, b)) <= measure(a) + measure(b)


@settings(max_examples=100, deadline=None)
@given(set_st, st.fractions(min_value=-5, max_value=5, max_denominator=1000))
def test_translation_preserves_measure(s, t):
    assert measure(translate(s, t)) == measure(s)
    assert translate(translate(s, t), -t).same_set(s)


@settings(max_examples=100, deadline=None)
@given(set_st)
def test_canonical_form(s):
    assert all(0 <= a < b <= 1 for a, b in s.arcs)
    assert all(b1 <= a2 for (_, b1), (a2, _) in zip(s.arcs, s.arcs[1:]))
