"""Koszul chains ``A (x) Lambda^s V`` and the untwisted / twisted differentials.

A basis element is a pair ``(beta, I)``: the monomial ``nu^beta`` tensored
with ``e_I = e_i1 ^ ... ^ e_is`` for a strictly increasing tuple ``I``.

* untwisted:  ``(beta, I) -> sum_k (-1)^k (1 - sigma_ik(beta)) (beta, I - i_k)``
* twisted:    ``(beta, I) -> sum_k (-1)^k [(beta, I - i_k)
  - tau_ik(beta) (beta + 2 e_ik, I - i_k)]``

The untwisted differential preserves ``beta``; the twisted one preserves
``beta mod 2``.  Both split into finite blocks (:class:`BlockKey`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, Mapping

from .algebra import ExpVec, conj_scalar, twisted_conj_scalar, unit_vec, vec_add
from .linalg import SparseMatrix
from .scalars import ONE, ZERO, Scalar

Wedge = tuple[int, ...]
Mode = Literal["untwisted", "twisted"]


def wedges(n: int, s: int) -> list[Wedge]:
    return list(itertools.combinations(range(1, n + 1), s))


def check_wedge(w: Iterable[int], n: int) -> Wedge:
    w = tuple(w)
    if any(a >= b for a, b in zip(w, w[1:])) or any(not 1 <= i <= n for i in w):
        raise ValueError(f"{w} is not a strictly increasing subset of 1..{n}")
    return w


class KoszulChain:
    """Finitely supported ``{(beta, I): Scalar}`` of a fixed wedge degree."""

    __slots__ = ("n", "degree", "support")

    def __init__(
        self,
        n: int,
        degree: int,
        support: Mapping[tuple[ExpVec, Wedge], Scalar] | None = None,
    ):
        self.n = n
        self.degree = degree
        self.support: dict[tuple[ExpVec, Wedge], Scalar] = {}
        for (beta, w), c in (support or {}).items():
            if len(w) != degree or len(beta) != n:
                raise ValueError(f"basis element {(beta, w)} does not fit degree {degree}")
            if not c.is_zero():
                self.support[(tuple(beta), w)] = c

    @classmethod
    def basis(cls, n: int, beta: ExpVec, w: Wedge, coef: Scalar = ONE) -> "KoszulChain":
        return cls(n, len(w), {(tuple(beta), check_wedge(w, n)): coef})

    @classmethod
    def _from_acc(cls, n: int, degree: int, acc: dict) -> "KoszulChain":
        out = cls(n, degree)
        out.support = {k: v for k, v in acc.items() if not v.is_zero()}
        return out

    def is_zero(self) -> bool:
        return not self.support

    def __add__(self, other: "KoszulChain") -> "KoszulChain":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        acc = dict(self.support)
        for k, v in other.support.items():
            acc[k] = acc.get(k, ZERO) + v
        return KoszulChain._from_acc(self.n, self.degree, acc)

    def __neg__(self) -> "KoszulChain":
        return KoszulChain._from_acc(
            self.n, self.degree, {k: -v for k, v in self.support.items()}
        )

    def __sub__(self, other: "KoszulChain") -> "KoszulChain":
        return self + (-other)

    def scale(self, c: Scalar) -> "KoszulChain":
        return KoszulChain._from_acc(
            self.n, self.degree, {k: v * c for k, v in self.support.items()}
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KoszulChain):
            return NotImplemented
        return self.degree == other.degree and (self - other).is_zero()

    def multidegrees(self) -> set[ExpVec]:
        return {beta for beta, _ in self.support}

    def __repr__(self) -> str:
        items = ", ".join(f"{b}{list(w)}: {c}" for (b, w), c in sorted(self.support.items()))
        return f"KoszulChain(deg={self.degree}, {{{items}}})"


def _diff_basis_untwisted(beta: ExpVec, w: Wedge) -> Iterator[tuple[tuple[ExpVec, Wedge], Scalar]]:
    for k, i in enumerate(w, start=1):
        c = ONE - conj_scalar(i, beta)
        if c.is_zero():
            continue
        yield (beta, w[: k - 1] + w[k:]), (c if k % 2 == 0 else -c)


def _diff_basis_twisted(beta: ExpVec, w: Wedge) -> Iterator[tuple[tuple[ExpVec, Wedge], Scalar]]:
    n = len(beta)
    for k, i in enumerate(w, start=1):
        rest = w[: k - 1] + w[k:]
        sign = ONE if k % 2 == 0 else -ONE
        yield (beta, rest), sign
        yield (vec_add(beta, unit_vec(n, i, 2)), rest), -sign * twisted_conj_scalar(i, beta)


def _apply(x: KoszulChain, basis_diff) -> KoszulChain:
    if x.degree < 1:
        raise ValueError("differential needs degree >= 1")
    acc: dict[tuple[ExpVec, Wedge], Scalar] = {}
    for (beta, w), c in x.support.items():
        for key, v in basis_diff(beta, w):
            acc[key] = acc.get(key, ZERO) + c * v
    return KoszulChain._from_acc(x.n, x.degree - 1, acc)


def untwisted_diff(x: KoszulChain) -> KoszulChain:
    return _apply(x, _diff_basis_untwisted)


def twisted_diff(x: KoszulChain) -> KoszulChain:
    return _apply(x, _diff_basis_twisted)


def diff(mode: Mode, x: KoszulChain) -> KoszulChain:
    return untwisted_diff(x) if mode == "untwisted" else twisted_diff(x)


@dataclass(frozen=True)
class BlockKey:
    """A multidegree ``beta`` (untwisted) or a residue class mod 2 (twisted)."""

    mode: Mode
    label: ExpVec

    def __post_init__(self):
        if self.mode == "twisted":
            object.__setattr__(self, "label", tuple(x % 2 for x in self.label))
        elif self.mode != "untwisted":
            raise ValueError(f"unknown mode {self.mode!r}")

    def contains(self, beta: ExpVec) -> bool:
        if self.mode == "untwisted":
            return tuple(beta) == self.label
        return all((b - c) % 2 == 0 for b, c in zip(beta, self.label))


def block_of(mode: Mode, beta: ExpVec) -> BlockKey:
    return BlockKey(mode, tuple(beta))


def restrict_block(x: KoszulChain, key: BlockKey) -> KoszulChain:
    return KoszulChain._from_acc(
        x.n, x.degree, {k: v for k, v in x.support.items() if key.contains(k[0])}
    )


def class_points(label: ExpVec, window: int) -> list[ExpVec]:
    """Points of ``label + 2 Z^n`` inside ``[-window, window]^n``, lex order."""
    axes = []
    for c in label:
        start = -window if (window - c) % 2 == 0 else -window + 1
        axes.append(range(start, window + 1, 2))
    return list(itertools.product(*axes))


def in_window(beta: ExpVec, window: int) -> bool:
    return all(-window <= b <= window for b in beta)


def block_basis(n: int, s: int, key: BlockKey, window: int) -> list[tuple[ExpVec, Wedge]]:
    if s < 0 or s > n:
        return []
    pts = [key.label] if key.mode == "untwisted" else class_points(key.label, window)
    ws = wedges(n, s)
    return [(beta, w) for beta in pts for w in ws]


def block_matrix(mode: Mode, s: int, key: BlockKey, window: int = 1) -> SparseMatrix:
    """Matrix of ``d_s`` on the block ``key`` (twisted: domain window ``window``).

    Columns are the degree-``s`` basis elements of the block inside the
    window; rows the degree-``s-1`` basis elements inside a window large
    enough to hold every image (``window`` untwisted, ``window + 2`` twisted).
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    if key.mode != mode:
        raise ValueError("block key mode does not match")
    n = len(key.label)
    cols = block_basis(n, s, key, window)
    rows = block_basis(n, s - 1, key, window if mode == "untwisted" else window + 2)
    row_index = {r: t for t, r in enumerate(rows)}
    basis_diff = _diff_basis_untwisted if mode == "untwisted" else _diff_basis_twisted
    entries: dict[tuple[int, int], Scalar] = {}
    for j, (beta, w) in enumerate(cols):
        for key_, v in basis_diff(beta, w):
            t = (row_index[key_], j)
            entries[t] = entries.get(t, ZERO) + v
    return SparseMatrix(len(rows), len(cols), entries, row_labels=rows, col_labels=cols)


def chain_to_vector(x: KoszulChain, labels: list) -> dict[int, Scalar]:
    index = {lab: t for t, lab in enumerate(labels)}
    return {index[k]: v for k, v in x.support.items()}


def vector_to_chain(n: int, degree: int, vec: Mapping[int, Scalar], labels: list) -> KoszulChain:
    return KoszulChain(n, degree, {labels[t]: v for t, v in vec.items()})
