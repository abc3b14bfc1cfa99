from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from numerosities.combinatorics import Monomial, subsets_of, tuple_count_of_monomial
from numerosities.pointset import EMPTY, Diagonal, Finite, FullSpace
from numerosities.series import (
    TruncatedSeries,
    TruncationWindow,
    WindowMismatch,
    add,
    char_series,
    decompose_positive,
    evaluate,
    evaluate_at_support,
    in_I0_poly,
    in_I1_window,
    indicator,
    is_characteristic,
    least_bound,
    mobius_invert,
    mul,
    parse_series,
    squarefree,
    sub,
    subset_sum,
    to_text,
    truncate,
    window_for,
)

from conftest import brute_members, brute_series

t = lambda *pairs: Monomial(dict(pairs))  # noqa: E731


def series(window, **terms):
    return TruncatedSeries.build(window, terms)


def test_char_series_examples():
    W = TruncationWindow({1, 2}, 2)
    assert char_series(Finite([(1, 2), (2, 1)]), W).coeffs == {t((1, 1), (2, 1)): 2}
    W2 = TruncationWindow({0, 1}, 2)
    assert char_series(FullSpace(2), W2).coeffs == {t((0, 2)): 1, t((0, 1), (1, 1)): 2, t((1, 2)): 1}
    assert not char_series(EMPTY, W2)


def test_union_intersection_law_example():
    W = TruncationWindow({0, 1, 2}, 1)
    X, Y = Finite([(0,), (1,)]), Finite([(1,), (2,)])
    lhs = add(char_series(X, W), char_series(Y, W))
    rhs = add(char_series(X | Y, W), char_series(X & Y, W))
    assert lhs == rhs
    assert lhs.coeffs == {t((0, 1)): 1, t((1, 1)): 2, t((2, 1)): 1}


def test_sub_self_and_product_example():
    W = TruncationWindow({0, 1}, 2)
    S = char_series(FullSpace(2), W)
    assert not sub(S, S)
    W1 = TruncationWindow({0, 1}, 1)
    N = char_series(FullSpace(1), W1)
    assert mul(N, N) == char_series(FullSpace(2), TruncationWindow({0, 1}, 2))


def test_window_mismatch():
    with pytest.raises(WindowMismatch):
        add(TruncatedSeries.zero(TruncationWindow({0}, 1)), TruncatedSeries.zero(TruncationWindow({0}, 2)))
    with pytest.raises(WindowMismatch):
        mul(TruncatedSeries.zero(TruncationWindow({0}, 1)), TruncatedSeries.zero(TruncationWindow({1}, 1)))
    with pytest.raises(ValueError):
        TruncatedSeries(TruncationWindow({0}, 1), {t((0, 2)): 1})
    with pytest.raises(ValueError):
        TruncationWindow({0}, 0)


def test_evaluate_examples():
    W = TruncationWindow({0, 1, 2}, 2)
    assert evaluate(char_series(Diagonal(2), W), indicator({0, 1, 2})) == 3
    assert evaluate(TruncatedSeries.zero(W), {0: 5}) == 0
    S = TruncatedSeries.build(TruncationWindow({1, 2}, 1), {t((1, 1), (2, 1)): 2})
    assert evaluate(S, {1: Fraction(1, 2), 2: Fraction(1, 2)}) == Fraction(1, 2)
    with pytest.raises(ValueError):
        evaluate(S, {3: 1})
    with pytest.raises(ValueError):
        evaluate(S, {1: -1})


def test_squarefree_examples():
    W = TruncationWindow({0}, 2)
    S = TruncatedSeries.build(W, {t((0, 2)): 1, t((0, 1)): 2})
    assert squarefree(S).coeffs == {t((0, 1)): 3}
    assert squarefree(squarefree(S)) == squarefree(S)
    C = char_series(FullSpace(2), TruncationWindow({0, 1}, 2))
    assert to_text(squarefree(C)) == "1*t0 + 1*t1 + 2*t0*t1"


def test_mobius_examples():
    F = {0, 1}
    g = {E: int({0, 1} <= E) for E in subsets_of(F)}
    n = mobius_invert(g, F)
    assert n[frozenset(F)] == 1 and sum(n.values()) == 1
    zero = {E: 0 for E in subsets_of(range(3))}
    assert set(mobius_invert(zero, range(3)).values()) == {0}
    g = {E: len(brute_members(FullSpace(1), E)) for E in subsets_of(range(3))}
    n = mobius_invert(g, range(3))
    assert {E: v for E, v in n.items() if v} == {frozenset({i}): 1 for i in range(3)}
    with pytest.raises(KeyError):
        mobius_invert({frozenset(): 0}, {0})


def test_is_characteristic_examples():
    W = TruncationWindow({1, 2}, 1)
    assert is_characteristic(TruncatedSeries.build(W, {t((1, 1), (2, 1)): 2}))
    assert not is_characteristic(TruncatedSeries.build(W, {t((1, 1), (2, 1)): 3}))
    assert is_characteristic(TruncatedSeries.zero(W))
    assert not is_characteristic(TruncatedSeries.build(W, {Monomial.one(): 1}))
    assert not is_characteristic(TruncatedSeries.build(W, {t((1, 1)): -1}))


def test_decompose_examples():
    W = TruncationWindow({0, 1, 2}, 2)
    S = TruncatedSeries.build(W, {t((1, 1), (2, 1)): 4})
    assert S.bound_b == 2
    a, layers = decompose_positive(S)
    assert a == 0 and [L.coeffs for L in layers] == [{t((1, 1), (2, 1)): 2}] * 2
    assert decompose_positive(TruncatedSeries.build(W, {Monomial.one(): 3})) == (3, [])
    S = TruncatedSeries.build(W, {t((0, 1)): 1, t((0, 2)): 1})
    a, layers = decompose_positive(S)
    assert a == 0 and len(layers) == 1 and layers[0] == S
    with pytest.raises(ValueError):
        decompose_positive(TruncatedSeries.build(W, {t((0, 1)): -1}))


def test_ideal_examples():
    W = TruncationWindow({5}, 1)
    assert in_I0_poly(TruncatedSeries.build(W, {t((5, 1)): 1, Monomial.one(): -1}))
    W = TruncationWindow({0, 1}, 2)
    X = Finite([(0,)])
    up = sub(char_series(X * Finite([(1,)]), W), char_series(X, W))
    assert in_I0_poly(up)
    assert not in_I0_poly(TruncatedSeries.build(W, {t((0, 1)): 1, Monomial.one(): 1}))
    assert in_I1_window(TruncatedSeries.build(W, {t((0, 2)): 1, t((0, 1)): -1}))
    assert not in_I1_window(TruncatedSeries.build(W, {t((0, 1), (1, 1)): 1}))


def test_squared_idempotent_defects_lie_in_I1():
    W = TruncationWindow(range(3), 4)
    for n in range(3):
        # (t_n^2 - t_n)^2 = t_n^4 - 2 t_n^3 + t_n^2
        S = TruncatedSeries.build(W, {t((n, 4)): 1, t((n, 3)): -2, t((n, 2)): 1})
        assert in_I1_window(S)


def test_text_round_trip_and_format():
    W = TruncationWindow({0, 1}, 2)
    S = TruncatedSeries.build(W, {t((0, 1)): 3, t((0, 1), (1, 1)): 2, t((1, 2)): -1})
    assert to_text(S) == "3*t0 + 2*t0*t1 - 1*t1^2"
    assert parse_series(to_text(S), W) == S
    assert to_text(TruncatedSeries.zero(W)) == "0"
    assert parse_series("t0 - 2*t1^2").coeffs == {t((0, 1)): 1, t((1, 2)): -2}
    for bad in ["3 t0", "t0 t1", "*t0", "3*t0 +"]:
        with pytest.raises(ValueError):
            parse_series(bad)


def test_window_for_uses_certificate():
    W = window_for(parse := FullSpace(3), {0, 4})
    assert W.degree_cap == parse.bound(4) == 3
    assert window_for(EMPTY, set()).degree_cap == 1


def test_least_bound():
    assert least_bound({t((1, 1), (2, 1)): 3}) == 2
    assert least_bound({t((0, 1)): -2}) == 2
    assert least_bound({}) == 0


# -- randomized properties -----------------------------------------------------

WIN = TruncationWindow(range(3), 2)
monomials = st.sampled_from(WIN.monomials())
random_series = st.dictionaries(monomials, st.integers(-5, 5), max_size=6).map(
    lambda d: TruncatedSeries.build(WIN, d))
points = st.lists(st.integers(0, 3), min_size=1, max_size=3).map(tuple)


@settings(max_examples=150)
@given(st.sets(points, max_size=8))
def test_char_series_matches_brute(pts):
    W = TruncationWindow(range(3), 2)
    assert char_series(Finite(pts), W).coeffs == brute_series(pts, range(3), 2)


@given(random_series)
def test_evaluation_at_supports(S):
    for F in subsets_of(range(3)):
        assert evaluate(S, indicator(F)) == evaluate_at_support(S, F)
        assert evaluate_at_support(squarefree(S), F) == evaluate_at_support(S, F)


@given(random_series, random_series, random_series)
def test_ring_axioms(A, B, C):
    assert A + B == B + A
    assert (A + B) + C == A + (B + C)
    assert A - A == TruncatedSeries.zero(WIN)
    assert A * B == B * A
    assert (A * B) * C == A * (B * C)
    W4 = (A * B).window
    assert A * (B + C) == add(A * B, A * C)
    assert truncate(A * B, WIN).window == WIN
    assert W4.degree_cap == 4


@given(random_series)
def test_evaluation_is_multiplicative(S):
    T = S * S
    for F in subsets_of(range(3)):
        assert evaluate(T, indicator(F)) == evaluate(S, indicator(F)) ** 2


@given(st.dictionaries(st.frozensets(st.integers(0, 4)), st.integers(-9, 9)))
def test_mobius_round_trip(partial):
    F = range(5)
    g = {E: partial.get(E, 0) for E in subsets_of(F)}
    assert subset_sum(mobius_invert(g, F), F) == g
    assert mobius_invert(subset_sum(g, F), F) == g


@settings(max_examples=100)
@given(st.dictionaries(monomials.filter(lambda m: m.degree > 0), st.integers(0, 3), max_size=5))
def test_is_characteristic_matches_tuple_capacity(coeffs):
    S = TruncatedSeries.build(WIN, coeffs)
    expected = all(c <= tuple_count_of_monomial(m) for m, c in S.coeffs.items())
    assert is_characteristic(S) == expected
    if S.coeffs:
        a, layers = decompose_positive(S)
        assert a == 0 and all(is_characteristic(L) for L in layers)
        total = TruncatedSeries.zero(WIN)
        for L in layers:
            total = total + L
        assert total == S


def test_monomial_listing():
    ms = TruncationWindow({0, 1}, 1).monomials()
    assert ms == [Monomial.one(), t((0, 1)), t((1, 1)), t((0, 1), (1, 1))]
    assert len(TruncationWindow(range(3), 2).monomials()) == 27
    assert all(len(list(product(range(2), repeat=2))) == 4 for _ in ms)
