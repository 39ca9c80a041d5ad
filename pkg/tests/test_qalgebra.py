"""Exact Laurent arithmetic, q-combinatorics and fraction-field linear algebra."""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb

import pytest
import sympy

from qwebs.qalgebra import (
    NOT_IN_SPAN,
    ONE,
    Q,
    ZERO,
    LaurentPoly,
    RatFunc,
    bar,
    eval_at,
    in_span,
    nullspace,
    qbinom,
    qint,
    qpow,
    rank,
)

q = sympy.symbols("q")


def _from_sympy(expr) -> LaurentPoly:
    expr = sympy.expand(sympy.cancel(expr))
    terms = {}
    for term in sympy.Add.make_args(expr):
        c, e = term.as_coeff_exponent(q)
        terms[int(e)] = terms.get(int(e), 0) + int(c)
    return LaurentPoly(terms)


def _product_formula(m: int, k: int) -> LaurentPoly:
    """Independent oracle: prod [m-i]/[i+1] as a rational function."""
    expr = sympy.Integer(1)
    for i in range(k):
        expr *= (q ** (m - i) - q ** (i - m)) / (q ** (i + 1) - q ** (-i - 1))
    return _from_sympy(expr)


def _rand_poly(rng: random.Random) -> LaurentPoly:
    return LaurentPoly({rng.randint(-4, 4): rng.randint(-5, 5) for _ in range(rng.randint(0, 4))})


def test_canonical_form_drops_zeros():
    p = LaurentPoly({2: 0, -1: 3})
    assert p.terms == {-1: 3}
    assert LaurentPoly({0: 0}) == ZERO
    assert str(LaurentPoly({2: 1, 0: 2, -2: 1})) == "q^-2 + 2 + q^2"


def test_ring_axioms_random_triples():
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = (_rand_poly(rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == ZERO
        assert a * ONE == a


def test_json_round_trip():
    p = LaurentPoly({-3: 12345678901234567890, 4: -2})
    assert LaurentPoly.from_json(p.to_json()) == p
    assert p.to_json() == {"-3": "12345678901234567890", "4": "-2"}


def test_qint_examples():
    assert qint(3) == LaurentPoly({2: 1, 0: 1, -2: 1})
    assert qint(0) == ZERO
    assert qint(1) == ONE
    for n in range(-6, 7):
        assert qint(-n) == -qint(n)


def test_qbinom_examples():
    assert qbinom(4, 2) == LaurentPoly({4: 1, 2: 1, 0: 2, -2: 1, -4: 1})
    assert qbinom(-1, 0) == ZERO
    for n in range(8):
        assert qbinom(n, 0) == ONE
    assert qbinom(3, -1) == ZERO
    assert qbinom(3, 4) == ZERO


@pytest.mark.parametrize("m", range(0, 9))
def test_qbinom_matches_product_formula(m):
    for k in range(m + 1):
        assert qbinom(m, k) == _product_formula(m, k)


def test_qbinom_recurrence_symmetry_and_classical_limit():
    for m in range(1, 13):
        for k in range(m + 1):
            assert qbinom(m, k) == qpow(k) * qbinom(m - 1, k) + qpow(k - m) * qbinom(m - 1, k - 1)
            assert qbinom(m, k) == qbinom(m, m - k)
            assert bar(qbinom(m, k)) == qbinom(m, k)
            assert eval_at(qbinom(m, k), 1) == comb(m, k)


def test_vandermonde_grid():
    for x in range(9):
        for y in range(9):
            for z in range(x + y + 1):
                rhs = ZERO
                for i in range(y + 1):
                    rhs = rhs + qpow(-(x + y) * i) * qbinom(y, i) * qbinom(x, z - i)
                assert qbinom(x + y, z) == qpow(y * z) * rhs


def test_bar_and_eval():
    assert bar(Q * Q + ONE) == qpow(-2) + ONE
    assert bar(bar(qint(5) + Q)) == qint(5) + Q
    assert bar(ZERO) == ZERO
    assert eval_at(qint(2), 1) == 2
    assert eval_at(qbinom(4, 2), 1) == 6
    assert eval_at(Q - qpow(-1), 2) == Fraction(3, 2)
    with pytest.raises(ZeroDivisionError):
        eval_at(Q, 0)


def test_ratfunc_field_axioms():
    rng = random.Random(11)
    for _ in range(40):
        a, b, c = (RatFunc(_rand_poly(rng) + qpow(5), _rand_poly(rng) + qpow(6)) for _ in range(3))
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a / a == RatFunc(ONE)
    x, y = qint(3), qbinom(4, 2)
    assert RatFunc(x) * RatFunc(y) == RatFunc(x * y)
    assert RatFunc(x) + RatFunc(y) == RatFunc(x + y)


def test_ratfunc_reduces_to_laurent():
    r = RatFunc(qint(4), qint(2))
    assert r.as_laurent() == qpow(2) + qpow(-2)
    assert RatFunc(ONE, qint(2)).as_laurent() is None


def test_in_span_examples():
    basis = [[ONE, Q, ZERO], [ZERO, ONE, qint(2)]]
    assert in_span(basis[0], basis) == [RatFunc(ONE), RatFunc(ZERO)]
    assert in_span([ZERO, ZERO, ZERO], basis) == [RatFunc(ZERO), RatFunc(ZERO)]
    assert in_span([ONE, ZERO, ZERO], basis) is NOT_IN_SPAN


def test_in_span_recombines_random_instances():
    rng = random.Random(3)
    for _ in range(20):
        basis = [[_rand_poly(rng) for _ in range(4)] for _ in range(2)]
        coeffs = [_rand_poly(rng), _rand_poly(rng)]
        v = [coeffs[0] * x + coeffs[1] * y for x, y in zip(*basis)]
        w = in_span(v, basis)
        assert w is not NOT_IN_SPAN
        for i in range(4):
            assert w[0] * RatFunc(basis[0][i]) + w[1] * RatFunc(basis[1][i]) == RatFunc(v[i])


def test_rank_and_nullspace():
    cols = [[ONE, Q], [Q, Q * Q], [ZERO, ONE]]
    assert rank(cols) == 2
    ns = nullspace(cols)
    assert len(ns) == 1
    vec = ns[0]
    for row in range(2):
        total = RatFunc(ZERO)
        for c, col in zip(vec, cols):
            total = total + c * RatFunc(col[row])
        assert total.is_zero()
