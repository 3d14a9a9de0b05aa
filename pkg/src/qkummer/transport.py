"""Chain maps between the Koszul and bar (Hochschild) complexes.

``h_map`` antisymmetrizes a Koszul generator into a Hochschild chain,
``k_map`` goes back through the comparison maps ``rho_i``, and ``flip_bar``
applies the flip to every slot.  Together they determine how the flip acts
on untwisted Koszul homology (:func:`invariance_sign`).

Conventions
-----------
* A bar chain ``c_0 (x) a_1 (x) ... (x) a_s`` keeps one basis monomial per
  slot; all scalars live in the term coefficient.
* The free-resolution element ``x (x) e_I (x) y`` tensored down against a
  coefficient ``m`` gives ``x m y (x) e_I``; ``h_map`` therefore puts
  ``x * m`` into slot 0 (``x`` the inverse generator product).
* Products in ``A (x) Lambda V (x) A``: ``(x1, e_I, y1)(x2, e_J, y2) =
  (x1 x2, e_I ^ e_J, y2 y1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import (
    ExpVec,
    flip_monomial,
    mono_inverse,
    mono_mul,
    mono_product,
    unit_vec,
    vec_add,
    zero_vec,
)
from .koszul import KoszulChain, Wedge, check_wedge, wedges
from .scalars import ONE, ZERO, Scalar


class ShapeError(ValueError):
    """A bar term is not of the shape ``(a_1...a_s)^-1 (x) a_1 (x) ... (x) a_s``."""


class NotAMultiple(ArithmeticError):
    """The transported generator is not a scalar multiple of the original."""


Slots = tuple[ExpVec, ...]


@dataclass
class BarChain:
    """Sum of ``coef * (slot_0 (x) ... (x) slot_s)`` with monomial slots."""

    n: int
    degree: int
    terms: dict[Slots, Scalar] = field(default_factory=dict)

    def add(self, slots: Slots, coef: Scalar) -> None:
        if len(slots) != self.degree + 1:
            raise ValueError(f"expected {self.degree + 1} slots, got {len(slots)}")
        v = self.terms.get(slots, ZERO) + coef
        if v.is_zero():
            self.terms.pop(slots, None)
        else:
            self.terms[slots] = v

    def is_zero(self) -> bool:
        return not self.terms

    def __sub__(self, other: "BarChain") -> "BarChain":
        out = BarChain(self.n, self.degree, dict(self.terms))
        for k, v in other.terms.items():
            out.add(k, -v)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BarChain):
            return NotImplemented
        return self.degree == other.degree and (self - other).is_zero()

    def term_list(self) -> list[tuple[Scalar, Slots]]:
        return [(c, s) for s, c in sorted(self.terms.items())]


@dataclass
class E1Chain:
    """Sum of ``coef * (left (x) e_axis (x) right)``."""

    n: int
    terms: dict[tuple[ExpVec, int, ExpVec], Scalar] = field(default_factory=dict)

    def add(self, left: ExpVec, axis: int, right: ExpVec, coef: Scalar) -> None:
        key = (left, axis, right)
        v = self.terms.get(key, ZERO) + coef
        if v.is_zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = v

    def is_zero(self) -> bool:
        return not self.terms


# E_s elements: {(x, wedge, y): coef} with the wedge sorted
_EChain = dict[tuple[ExpVec, Wedge, ExpVec], Scalar]


def _perm_sign(seq: tuple[int, ...]) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _sort_wedge(seq: tuple[int, ...]) -> tuple[int, Wedge] | None:
    if len(set(seq)) != len(seq):
        return None
    return _perm_sign(seq), tuple(sorted(seq))


def h_map(x: KoszulChain) -> BarChain:
    """``m e_I -> sum_sigma sgn(sigma) (nu_sigma...)^-1 m (x) nu_sigma(i1) (x) ...``."""
    n, s = x.n, x.degree
    out = BarChain(n, s)
    for (beta, w), c in x.support.items():
        for perm in itertools.permutations(w):
            sign = _perm_sign(perm)
            gens = tuple(unit_vec(n, i) for i in perm)
            c_prod, pi = mono_product(gens, n)
            c_inv, inv = mono_inverse(pi)
            # (c_prod nu^pi)^-1 = c_prod^-1 c_inv nu^-pi, then times m = nu^beta
            c_m, slot0 = mono_mul(inv, beta)
            coef = c * c_inv * c_m / c_prod
            out.add((slot0,) + gens, coef if sign > 0 else -coef)
    return out


def hochschild_boundary(x: BarChain) -> BarChain:
    """Tensored-down ``b'``: ``sum_i (-1)^i ...a_i a_(i+1)... + (-1)^s a_s a_0 ...``."""
    s = x.degree
    if s < 1:
        raise ValueError("boundary needs degree >= 1")
    out = BarChain(x.n, s - 1)
    for slots, c in x.terms.items():
        for i in range(s):
            k, prod = mono_mul(slots[i], slots[i + 1])
            new = slots[:i] + (prod,) + slots[i + 2:]
            out.add(new, c * k if i % 2 == 0 else -(c * k))
        k, prod = mono_mul(slots[s], slots[0])
        new = (prod,) + slots[1:s]
        out.add(new, c * k if s % 2 == 0 else -(c * k))
    return out


def _primed_range(upper: int) -> tuple[int, range]:
    """Sign and index range of the primed sum ``sum'_{k=0}^{upper}``."""
    if upper >= 0:
        return 1, range(0, upper + 1)
    if upper == -1:
        return 1, range(0)
    return -1, range(upper + 1, 0)


def rho(i: int, pi: ExpVec) -> E1Chain:
    """``rho_i((nu^pi)^-1 (x) nu^pi) = tail^-1 (sum'_k nu_i^-k (x) e_i (x) nu_i^k) tail``.

    ``tail = nu_(i+1)^pi_(i+1) ... nu_n^pi_n``.
    """
    n = len(pi)
    if not 1 <= i <= n:
        raise ValueError(f"axis {i} outside 1..{n}")
    out = E1Chain(n)
    tail = tuple(pi[t] if t >= i else 0 for t in range(n))
    c_tinv, tail_inv = mono_inverse(tail)
    sign, ks = _primed_range(pi[i - 1] - 1)
    for k in ks:
        c_l, left = mono_mul(tail_inv, unit_vec(n, i, -k))
        c_r, right = mono_mul(unit_vec(n, i, k), tail)
        coef = c_tinv * c_l * c_r
        out.add(left, i, right, coef if sign > 0 else -coef)
    return out


def _e_product(a: _EChain, b: E1Chain) -> _EChain:
    out: _EChain = {}
    for (x1, w1, y1), c1 in a.items():
        for (x2, axis, y2), c2 in b.terms.items():
            sw = _sort_wedge(w1 + (axis,))
            if sw is None:
                continue
            sign, w = sw
            cx, x = mono_mul(x1, x2)
            cy, y = mono_mul(y2, y1)
            v = c1 * c2 * cx * cy
            key = (x, w, y)
            acc = out.get(key, ZERO) + (v if sign > 0 else -v)
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
    return out


def k_map(x: BarChain) -> KoszulChain:
    """Sum over ``i_1 > ... > i_s`` of ``rho_i1(slot 1) ^ ... ^ rho_is(slot s)``.

    Each term must be ``coef * (a_1...a_s)^-1 (x) a_1 (x) ... (x) a_s``; the
    scalar relating slot 0 to the normal-ordered inverse becomes the
    coefficient ``m`` of the tensored-down result ``x m y (x) e_I``.
    """
    n, s = x.n, x.degree
    acc: dict[tuple[ExpVec, Wedge], Scalar] = {}
    for slots, coef in x.terms.items():
        c_prod, pi = mono_product(slots[1:], n)
        c_inv, inv = mono_inverse(pi)
        if slots[0] != inv:
            raise ShapeError(f"slot 0 {slots[0]} is not the inverse of the slot product")
        # slot0 basis monomial = (c_inv / c_prod)^-1 * (a_1...a_s)^-1
        m = coef * c_prod / c_inv
        for axes in itertools.combinations(range(n, 0, -1), s):
            chain: _EChain = {(zero_vec(n), (), zero_vec(n)): ONE}
            for axis, slot in zip(axes, slots[1:]):
                chain = _e_product(chain, rho(axis, slot))
                if not chain:
                    break
            for (xl, w, yr), c in chain.items():
                cxy, beta = mono_mul(xl, yr)
                key = (beta, w)
                acc[key] = acc.get(key, ZERO) + m * c * cxy
    return KoszulChain(n, s, acc)


def flip_bar(x: BarChain) -> BarChain:
    out = BarChain(x.n, x.degree)
    for slots, c in x.terms.items():
        coef = c
        new = []
        for sl in slots:
            k, v = flip_monomial(sl)
            coef = coef * k
            new.append(v)
        out.add(tuple(new), coef)
    return out


def generator(n: int, wedge: Wedge) -> KoszulChain:
    """The untwisted homology generator ``a_0 (x) e_I`` with ``a_0 = 1``."""
    return KoszulChain.basis(n, zero_vec(n), check_wedge(wedge, n))


def invariance_sign(n: int, wedge: Wedge) -> Scalar:
    """Scalar ``c`` with ``k(flip(h(a_0 e_I))) = c a_0 e_I``."""
    gen = generator(n, wedge)
    image = k_map(flip_bar(h_map(gen)))
    key = (zero_vec(n), tuple(wedge))
    if set(image.support) - {key}:
        raise NotAMultiple(f"transport of e_{list(wedge)} left the generator line: {image}")
    return image.support.get(key, ZERO)


def invariance_table(n: int) -> dict[Wedge, Scalar]:
    return {w: invariance_sign(n, w) for s in range(n + 1) for w in wedges(n, s)}
