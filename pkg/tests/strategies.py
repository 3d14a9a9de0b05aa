"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from qkummer.algebra import AlgebraElement
from qkummer.scalars import LambdaMonomial, LaurentPoly, Scalar, lambda_pairs

PAIRS3 = lambda_pairs(3)


def monomials(pairs=PAIRS3, lo=-2, hi=2):
    return st.dictionaries(st.sampled_from(pairs), st.integers(lo, hi), max_size=2).map(
        LambdaMonomial.from_mapping
    )


def polys(pairs=PAIRS3, max_terms=3):
    return st.lists(
        st.tuples(monomials(pairs), st.integers(-3, 3)), max_size=max_terms
    ).map(lambda ts: sum((LaurentPoly.monomial(m, c) for m, c in ts), LaurentPoly()))


def nonzero_polys(pairs=PAIRS3, max_terms=3):
    return polys(pairs, max_terms).filter(lambda p: not p.is_zero())


def scalars(pairs=PAIRS3):
    return st.builds(Scalar, polys(pairs, 2), nonzero_polys(pairs, 2))


def nonzero_scalars(pairs=PAIRS3):
    return scalars(pairs).filter(lambda a: not a.is_zero())


def exp_vecs(n, lo=-2, hi=2):
    return st.tuples(*[st.integers(lo, hi) for _ in range(n)])


def elements(n, max_terms=2):
    pairs = lambda_pairs(n)
    return st.dictionaries(
        exp_vecs(n), st.builds(Scalar.from_poly, nonzero_polys(pairs, 2)), max_size=max_terms
    ).map(lambda d: AlgebraElement(n, d))
