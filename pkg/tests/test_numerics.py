import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cesaro.numerics import (
    Bracket,
    ExactComplex,
    bernoulli,
    binomial,
    generalized_binomial,
    quadratic_tail,
    telescoping_tail,
)
from oracles import bernoulli_by_recurrence, pascal_binomial, quadratic_tail_mp


@pytest.mark.parametrize("n,k,expected", [(4, 2, 6), (7, 0, 1), (30, 15, 155117520), (5, -1, 0), (5, 6, 0)])
def test_binomial_values(n, k, expected):
    assert binomial(n, k) == expected


def test_binomial_matches_pascal_oracle():
    for n in range(0, 41):
        for k in range(-1, n + 2):
            assert binomial(n, k) == pascal_binomial(n, k)


def test_binomial_rejects_negative_n():
    with pytest.raises(ValueError):
        binomial(-1, 0)


@given(st.integers(1, 200), st.integers(-3, 203))
def test_pascal_rule(n, k):
    assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


@pytest.mark.parametrize("alpha,k,expected", [(1, 1, 1), (2, 3, 0), (0.5, 2, -0.125), (7, 0, 1)])
def test_generalized_binomial_values(alpha, k, expected):
    assert generalized_binomial(alpha, k) == expected


def test_generalized_binomial_exact_for_rationals():
    assert generalized_binomial(Fraction(1, 2), 3) == Fraction(1, 16)
    assert isinstance(generalized_binomial(Fraction(1, 2), 3), Fraction)


@given(st.integers(0, 40), st.integers(0, 45))
def test_generalized_binomial_integer_alpha(m, k):
    assert generalized_binomial(m, k) == binomial(m, k)


def test_generalized_binomial_complex():
    a = 0.3 + 0.7j
    expected = a * (a - 1) * (a - 2) / 6
    assert abs(generalized_binomial(a, 3) - expected) < 1e-15


@pytest.mark.parametrize("n,expected", [(0, 1), (1, Fraction(1, 2)), (2, Fraction(1, 6)), (3, 0), (4, Fraction(-1, 30))])
def test_bernoulli_values(n, expected):
    assert bernoulli(n) == expected


def test_bernoulli_matches_recurrence_oracle():
    oracle = bernoulli_by_recurrence(30)
    assert [bernoulli(n) for n in range(31)] == oracle


def test_bernoulli_defining_recurrence():
    # with B_1 = +1/2 the recurrence reads sum_k C(n+1,k) B_k (-1)^k ... use the shifted form
    for n in range(2, 31):
        b = [bernoulli(k) for k in range(n + 1)]
        b[1] = -b[1]
        assert sum(binomial(n + 1, k) * b[k] for k in range(n + 1)) == 0


@pytest.mark.parametrize("K,expected", [(0, 1), (4, Fraction(1, 5)), (99, Fraction(1, 100))])
def test_telescoping_tail(K, expected):
    assert telescoping_tail(K) == expected


def test_telescoping_tail_against_partial_sums():
    K = 7
    head = sum(Fraction(1, (k + 1) * (k + 2)) for k in range(K, 2000))
    assert telescoping_tail(K) - head == Fraction(1, 2001)


@pytest.mark.parametrize("K", [1, 2, 10, 57, 1000])
def test_quadratic_tail_encloses_trigamma(K):
    b = quadratic_tail(K)
    assert b.lo <= quadratic_tail_mp(K) <= b.hi


def test_quadratic_tail_frozen_oracle_values():
    assert quadratic_tail(1).contains(0.6449340668482264)
    assert quadratic_tail(10).contains(0.09516633568168574)
    assert quadratic_tail(1000).contains(0.0009995001666666334)
    assert abs(0.6449340668482264 - (math.pi**2 / 6 - 1)) < 1e-15


def test_quadratic_tail_cheap_bounds():
    # the integral comparison gives 1/(K+1) <= tail <= 1/K
    b = quadratic_tail(10)
    assert b.lo >= 1 / 11 and b.hi <= 1 / 10


def test_quadratic_tail_width_with_thousand_terms():
    assert quadratic_tail(1000, terms=1000).width <= 1e-6


def test_quadratic_tail_no_terms_is_still_valid():
    b = quadratic_tail(5, terms=0)
    assert b.lo <= quadratic_tail_mp(5) <= b.hi


def test_quadratic_tail_rejects_zero():
    with pytest.raises(ValueError):
        quadratic_tail(0)


@given(st.integers(1, 3000))
def test_quadratic_tail_property(K):
    b = quadratic_tail(K, terms=200)
    assert b.lo <= quadratic_tail_mp(K) <= b.hi


fracs = st.fractions(min_value=-50, max_value=50, max_denominator=60)


@given(fracs, fracs, fracs, fracs)
def test_bracket_arithmetic_encloses(a, b, c, d):
    x = Bracket.from_fractions(min(a, b), max(a, b))
    y = Bracket.from_fractions(min(c, d), max(c, d))
    for u in (min(a, b), max(a, b)):
        for v in (min(c, d), max(c, d)):
            assert (x + y).contains(u + v)
            assert (x - y).contains(u - v)
            assert (x * y).contains(u * v)


@given(fracs, fracs)
def test_exact_brackets_stay_exact(a, b):
    s = Bracket.from_fraction(a) + Bracket.from_fraction(b)
    assert s.exact == a + b
    assert (Bracket.from_fraction(a) * Bracket.from_fraction(b)).exact == a * b


def test_bracket_rejects_empty():
    with pytest.raises(ValueError):
        Bracket(1.0, 0.0)


@given(fracs, fracs, fracs, fracs)
def test_exact_complex_field_ops(a, b, c, d):
    x, y = ExactComplex(a, b), ExactComplex(c, d)
    assert (x + y) - y == x
    assert x * y == y * x
    if y != 0:
        assert (x / y) * y == x
    assert (x * x.conjugate()).im == 0
    assert abs(complex(x * y) - complex(x) * complex(y)) < 1e-9 * (1 + abs(complex(x) * complex(y)))


def test_exact_complex_zero_division():
    with pytest.raises(ZeroDivisionError):
        ExactComplex(1, 1) / ExactComplex(0, 0)
