import random

import pytest
from hypothesis import given, settings

from qkummer.algebra import (
    AlgebraElement,
    conj_scalar,
    cocycle_by_transpositions,
    flip,
    flip_monomial,
    multiply,
    normal_order_cocycle,
    twisted_conj_scalar,
)
from qkummer.scalars import ONE, lam

from strategies import elements, exp_vecs

FAST = settings(max_examples=60, deadline=None)


def gen(n, i, e=1):
    return AlgebraElement.generator(n, i, e)


def test_defining_relation():
    for n in (2, 3, 4):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                assert gen(n, i) * gen(n, j) == (gen(n, j) * gen(n, i)).scale(lam(i, j))


def test_cocycle_examples():
    assert normal_order_cocycle((0, 0), (1, -2)) == ONE
    assert normal_order_cocycle((0, 1), (1, 0)) == lam(1, 2, -1)
    assert normal_order_cocycle((0, 0, 1), (1, 1, 0)) == lam(1, 3, -1) * lam(2, 3, -1)


@FAST
@given(exp_vecs(3), exp_vecs(3))
def test_cocycle_matches_transposition_oracle(pi, rho):
    assert normal_order_cocycle(pi, rho) == cocycle_by_transpositions(pi, rho)


def test_multiply_examples():
    a = AlgebraElement.monomial((2, -1))
    assert AlgebraElement.one(2) * a == a
    assert gen(2, 2) * gen(2, 1) == AlgebraElement.monomial((1, 1), lam(1, 2, -1))


def test_associativity_on_random_triples():
    rng = random.Random(0)
    for _ in range(100):
        a, b, c = (
            AlgebraElement.monomial(tuple(rng.randint(-2, 2) for _ in range(3)))
            for _ in range(3)
        )
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@FAST
@given(elements(3), elements(3), elements(3))
def test_associativity_and_distributivity(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_conj_scalar_examples():
    assert conj_scalar(1, (0, 0)) == ONE
    assert conj_scalar(2, (0, 0, 0)) == ONE
    assert conj_scalar(1, (0, 1)) == lam(1, 2, -1)


def test_twisted_conj_scalar_examples():
    assert twisted_conj_scalar(1, (0, 0)) == ONE
    assert twisted_conj_scalar(1, (0, 1)) == lam(1, 2, -1)
    # nu_2 (nu_1 nu_3) nu_2: nu_2 nu_1 = lambda_21 nu_1 nu_2 and
    # nu_3 nu_2 = lambda_32 nu_2 nu_3
    assert twisted_conj_scalar(2, (1, 0, 1)) == lam(1, 2, -1) * lam(2, 3, -1)


@FAST
@given(exp_vecs(3))
def test_twisted_conj_scalar_by_direct_product(beta):
    for i in (1, 2, 3):
        g = gen(3, i)
        direct = g * AlgebraElement.monomial(beta) * g
        target = tuple(b + (2 if t == i - 1 else 0) for t, b in enumerate(beta))
        assert direct == AlgebraElement.monomial(target, twisted_conj_scalar(i, beta))


def test_flip_examples():
    assert flip(AlgebraElement.one(2)) == AlgebraElement.one(2)
    # nu_1^-1 nu_2^-1 = lambda_12^-1 nu_2^-1 nu_1^-1, and nu^(1,1) = nu_1 nu_2
    s, k = flip_monomial((1, 1))
    assert k == (-1, -1)
    expected = gen(2, 1, -1) * gen(2, 2, -1)
    assert AlgebraElement.monomial(k, s) == expected


@FAST
@given(elements(3), elements(3))
def test_flip_is_an_involutive_automorphism(a, b):
    assert flip(a * b) == flip(a) * flip(b)
    assert flip(flip(a)) == a
    assert flip(a + b) == flip(a) + flip(b)


def test_axis_out_of_range():
    with pytest.raises(ValueError):
        conj_scalar(3, (0, 0))
