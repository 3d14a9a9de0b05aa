"""The quantum torus in the normal-ordered monomial basis.

``nu^pi = nu_1**pi_1 ... nu_n**pi_n`` with relations
``nu_i nu_j = lambda_ij nu_j nu_i``.  Products are brought back into normal
order by :func:`normal_order_cocycle`; the transposition expansion
:func:`cocycle_by_transpositions` is kept as an independent reference.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

from .scalars import ONE, ZERO, LambdaMonomial, Scalar, _mono_mul

ExpVec = tuple[int, ...]


def zero_vec(n: int) -> ExpVec:
    return (0,) * n


def unit_vec(n: int, i: int, e: int = 1) -> ExpVec:
    """``e * e_i`` with ``i`` 1-based."""
    v = [0] * n
    v[i - 1] = e
    return tuple(v)


def vec_add(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x + y for x, y in zip(a, b))


def vec_neg(a: ExpVec) -> ExpVec:
    return tuple(-x for x in a)


@lru_cache(maxsize=1 << 16)
def _cocycle_key(pi: ExpVec, rho: ExpVec):
    # moving nu_j**rho_j (j < i) left past nu_i**pi_i costs lambda_ij**(pi_i rho_j)
    key = ()
    n = len(pi)
    for i in range(n):
        if not pi[i]:
            continue
        for j in range(i):
            e = pi[i] * rho[j]
            if e:
                key = _mono_mul(key, (((j + 1, i + 1), -e),))
    return key


def normal_order_cocycle(pi: ExpVec, rho: ExpVec) -> Scalar:
    """Scalar ``c`` with ``nu^pi nu^rho = c nu^(pi + rho)``."""
    return Scalar.monomial(_cocycle_key(tuple(pi), tuple(rho)))


def cocycle_by_transpositions(pi: ExpVec, rho: ExpVec) -> Scalar:
    """Reference cocycle: expand both monomials into letters and bubble sort.

    Each adjacent swap ``nu_a**x nu_b**y -> nu_b**y nu_a**x`` (``a > b``,
    ``x, y = +-1``) contributes ``lambda_ab**(x*y)``.
    """
    word: list[tuple[int, int]] = []
    for vec in (pi, rho):
        for i, e in enumerate(vec, start=1):
            step = 1 if e > 0 else -1
            word.extend((i, step) for _ in range(abs(e)))
    scalar = LambdaMonomial()
    changed = True
    while changed:
        changed = False
        for k in range(len(word) - 1):
            (a, x), (b, y) = word[k], word[k + 1]
            if a > b:
                scalar = scalar * LambdaMonomial.of(a, b, x * y)
                word[k], word[k + 1] = word[k + 1], word[k]
                changed = True
    return Scalar.monomial(scalar)


class AlgebraElement:
    """Finitely supported sum of ``Scalar * nu^beta``; no stored zeros."""

    __slots__ = ("n", "support")

    def __init__(self, n: int, support: Mapping[ExpVec, Scalar] | None = None):
        self.n = n
        self.support: dict[ExpVec, Scalar] = {}
        for k, v in (support or {}).items():
            if len(k) != n:
                raise ValueError(f"exponent vector {k} has length != {n}")
            if not v.is_zero():
                self.support[tuple(k)] = v

    @classmethod
    def monomial(cls, beta: Iterable[int], coef: Scalar = ONE) -> "AlgebraElement":
        beta = tuple(beta)
        return cls(len(beta), {beta: coef})

    @classmethod
    def one(cls, n: int) -> "AlgebraElement":
        return cls(n, {zero_vec(n): ONE})

    @classmethod
    def generator(cls, n: int, i: int, e: int = 1) -> "AlgebraElement":
        return cls(n, {unit_vec(n, i, e): ONE})

    def is_zero(self) -> bool:
        return not self.support

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.support)
        for k, v in other.support.items():
            out[k] = out.get(k, ZERO) + v
        return AlgebraElement(self.n, out)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.n, {k: -v for k, v in self.support.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, c: Scalar) -> "AlgebraElement":
        return AlgebraElement(self.n, {k: v * c for k, v in self.support.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        keys = set(self.support) | set(other.support)
        return all(self.support.get(k, ZERO) == other.support.get(k, ZERO) for k in keys)

    def single(self) -> tuple[Scalar, ExpVec]:
        """``(coef, beta)`` of a one-term element."""
        if len(self.support) != 1:
            raise ValueError("element is not a single monomial")
        ((beta, c),) = self.support.items()
        return c, beta

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*nu^{k}" for k, c in sorted(self.support.items()))
        return f"AlgebraElement({body or 0})"


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    out: dict[ExpVec, Scalar] = {}
    for pa, ca in a.support.items():
        for pb, cb in b.support.items():
            k = vec_add(pa, pb)
            v = ca * cb * normal_order_cocycle(pa, pb)
            out[k] = out.get(k, ZERO) + v
    return AlgebraElement(a.n, out)


def mono_mul(pi: ExpVec, rho: ExpVec) -> tuple[Scalar, ExpVec]:
    """Product of two basis monomials as ``(scalar, exponent)``."""
    return normal_order_cocycle(pi, rho), vec_add(pi, rho)


def mono_product(vecs: Iterable[ExpVec], n: int) -> tuple[Scalar, ExpVec]:
    """Normal-ordered product of a sequence of basis monomials."""
    coef, acc = ONE, zero_vec(n)
    for v in vecs:
        c, acc = mono_mul(acc, v)
        coef = coef * c
    return coef, acc


def mono_inverse(pi: ExpVec) -> tuple[Scalar, ExpVec]:
    """``(nu^pi)**-1 = nu_n**-pi_n ... nu_1**-pi_1`` brought to normal order."""
    n = len(pi)
    return mono_product((unit_vec(n, i, -pi[i - 1]) for i in range(n, 0, -1)), n)


def _check_axis(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise ValueError(f"generator index {i} outside 1..{n}")


@lru_cache(maxsize=1 << 16)
def conj_scalar(i: int, beta: ExpVec) -> Scalar:
    """``sigma`` with ``nu_i**-1 nu^beta nu_i = sigma nu^beta`` (via multiply)."""
    n = len(beta)
    _check_axis(i, n)
    prod = multiply(
        multiply(AlgebraElement.generator(n, i, -1), AlgebraElement.monomial(beta)),
        AlgebraElement.generator(n, i),
    )
    c, k = prod.single()
    assert k == tuple(beta)
    return c


@lru_cache(maxsize=1 << 16)
def twisted_conj_scalar(i: int, beta: ExpVec) -> Scalar:
    """``tau`` with ``nu_i nu^beta nu_i = tau nu^(beta + 2 e_i)`` (via multiply)."""
    n = len(beta)
    _check_axis(i, n)
    g = AlgebraElement.generator(n, i)
    c, _ = multiply(multiply(g, AlgebraElement.monomial(beta)), g).single()
    return c


@lru_cache(maxsize=1 << 16)
def flip_monomial(pi: ExpVec) -> tuple[Scalar, ExpVec]:
    """Image of ``nu^pi`` under ``nu_i -> nu_i**-1``: ``(scalar, -pi)``."""
    n = len(pi)
    return mono_product((unit_vec(n, i, -pi[i - 1]) for i in range(1, n + 1)), n)


def flip(a: AlgebraElement) -> AlgebraElement:
    """The order-two automorphism ``nu_i -> nu_i**-1``."""
    out: dict[ExpVec, Scalar] = {}
    for pi, c in a.support.items():
        s, k = flip_monomial(pi)
        out[k] = out.get(k, ZERO) + c * s
    return AlgebraElement(a.n, out)
