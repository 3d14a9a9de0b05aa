"""Exact sparse linear algebra over Q(lambda_ij).

Two rank backends:

``exact``
    fraction-free elimination over the integer Laurent ring.  Unit pivots
    (``+-`` a monomial) are divided out exactly; other pivots cross-multiply
    and the row's integer content is stripped afterwards.
``modular``
    the matrix is evaluated at seeded random points modulo a 61-bit prime
    and eliminated there.  A modular rank never exceeds the true rank; the
    ranks from independent seeds must agree.

Pivot order in both: fewest active rows in the column first (Markowitz),
then the cheapest entry (unit, fewest terms), then the shortest row.
"""

from __future__ import annotations

import heapq
import logging
from math import gcd
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Literal, Mapping, Sequence

from .scalars import (
    MERSENNE_61,
    ONE,
    ZERO,
    DenominatorVanished,
    LaurentPoly,
    ModularPoint,
    Scalar,
    evaluate_mod,
)

log = logging.getLogger(__name__)

Backend = Literal["exact", "modular", "auto"]

AUTO_MODULAR_COLUMNS = 500
DEFAULT_MODULAR_SEEDS = 3


class Disagreement(ArithmeticError):
    """Modular ranks at different random points disagree."""


class NotAComplex(ValueError):
    """``d_out @ d_in`` is not the zero matrix."""


class SparseMatrix:
    """``rows x cols`` matrix with ``{(row, col): Scalar}`` entries."""

    __slots__ = ("rows", "cols", "entries", "row_labels", "col_labels")

    def __init__(
        self,
        rows: int,
        cols: int,
        entries: Mapping[tuple[int, int], Scalar] | None = None,
        row_labels: Sequence | None = None,
        col_labels: Sequence | None = None,
    ):
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], Scalar] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry {(r, c)} outside {rows}x{cols}")
            if not v.is_zero():
                self.entries[(r, c)] = v
        self.row_labels = list(row_labels) if row_labels is not None else None
        self.col_labels = list(col_labels) if col_labels is not None else None

    @classmethod
    def identity(cls, k: int) -> "SparseMatrix":
        return cls(k, k, {(i, i): ONE for i in range(k)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[Scalar | int]]) -> "SparseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {}
        for r, line in enumerate(data):
            for c, v in enumerate(line):
                v = v if isinstance(v, Scalar) else Scalar(v)
                if not v.is_zero():
                    entries[(r, c)] = v
        return cls(rows, cols, entries)

    def row_dicts(self) -> list[dict[int, Scalar]]:
        out: list[dict[int, Scalar]] = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def select_rows(self, keep: Sequence[int]) -> "SparseMatrix":
        index = {r: t for t, r in enumerate(keep)}
        entries = {(index[r], c): v for (r, c), v in self.entries.items() if r in index}
        labels = [self.row_labels[r] for r in keep] if self.row_labels else None
        return SparseMatrix(len(keep), self.cols, entries, labels, self.col_labels)

    def matvec(self, vec: Mapping[int, Scalar]) -> dict[int, Scalar]:
        out: dict[int, Scalar] = {}
        for (r, c), v in self.entries.items():
            x = vec.get(c)
            if x is not None:
                out[r] = out.get(r, ZERO) + v * x
        return {r: v for r, v in out.items() if not v.is_zero()}

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, list[tuple[int, Scalar]]] = defaultdict(list)
        for (r, c), v in other.entries.items():
            by_row[r].append((c, v))
        acc: dict[tuple[int, int], Scalar] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                acc[(r, c)] = acc.get((r, c), ZERO) + v * w
        return SparseMatrix(self.rows, other.cols, acc)

    def is_zero(self) -> bool:
        return not self.entries

    def variables(self) -> set:
        out = set()
        for v in self.entries.values():
            out |= v.num.variables() | v.den.variables()
        return out

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


@dataclass
class RankCertificate:
    rank: int
    backend: Literal["exact", "modular"]
    seeds: list[int] = field(default_factory=list)
    agreement: bool = True
    prime: int | None = None

    def as_dict(self) -> dict:
        return {
            "rank": self.rank,
            "backend": self.backend,
            "seeds": list(self.seeds),
            "agreement": self.agreement,
            "prime": self.prime,
        }


# ---------------------------------------------------------------- exact path


def _strip(row: dict[int, LaurentPoly]) -> None:
    g = 0
    for v in row.values():
        g = gcd(g, v.content())
        if g == 1:
            return
    if g > 1:
        for c in row:
            row[c] = row[c].exact_div_int(g)


def _pivot_cost_poly(v: LaurentPoly) -> tuple[int, int, int]:
    return (0 if v.is_unit() else 1, len(v.terms), v.degree())


def _poly_rows(m: SparseMatrix) -> list[dict[int, LaurentPoly]]:
    """Clear denominators column by column; returns polynomial rows."""
    col_dens: dict[int, list[LaurentPoly]] = defaultdict(list)
    for (_, c), v in m.entries.items():
        if not v.is_polynomial():
            if all(d != v.den for d in col_dens[c]):
                col_dens[c].append(v.den)
    rows: list[dict[int, LaurentPoly]] = [dict() for _ in range(m.rows)]
    for (r, c), v in m.entries.items():
        p = v.num
        for d in col_dens.get(c, ()):
            if d != v.den:
                p = p * d
        rows[r][c] = p
    return rows


def _rank_exact_rows(rows: list[dict[int, LaurentPoly]]) -> int:
    rows = [r for r in rows if r]
    col_rows: dict[int, set[int]] = defaultdict(set)
    for t, r in enumerate(rows):
        for c in r:
            col_rows[c].add(t)
    heap = [(len(s), c) for c, s in col_rows.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        cnt, c = heapq.heappop(heap)
        active = col_rows.get(c)
        if not active:
            continue
        if len(active) != cnt:
            heapq.heappush(heap, (len(active), c))
            continue
        piv = min(active, key=lambda t: (_pivot_cost_poly(rows[t][c]), len(rows[t])))
        prow = rows[piv]
        for cc in prow:
            col_rows[cc].discard(piv)
        p = prow[c]
        unit = p.is_unit()
        pinv = p.unit_inverse() if unit else None
        for t in list(active):
            r = rows[t]
            a = r[c]
            if unit:
                f = a * pinv
                for cc, v in prow.items():
                    nv = r.get(cc)
                    nv = -(f * v) if nv is None else nv - f * v
                    _store(r, cc, nv, t, col_rows)
            else:
                for cc in list(r):
                    if cc not in prow:
                        r[cc] = r[cc] * p
                for cc, v in prow.items():
                    old = r.get(cc)
                    nv = -(a * v) if old is None else old * p - a * v
                    _store(r, cc, nv, t, col_rows)
                _strip(r)
        rank += 1
        del col_rows[c]
        rows[piv] = {}
        for cc in prow:
            s = col_rows.get(cc)
            if s:
                heapq.heappush(heap, (len(s), cc))
    return rank


def _store(r: dict, cc: int, nv, t: int, col_rows) -> None:
    if nv:
        if cc not in r:
            col_rows[cc].add(t)
        r[cc] = nv
    elif cc in r:
        del r[cc]
        col_rows[cc].discard(t)


# -------------------------------------------------------------- modular path


def _rank_mod_rows(rows: list[dict[int, int]], p: int) -> int:
    rows = [r for r in rows if r]
    col_rows: dict[int, set[int]] = defaultdict(set)
    for t, r in enumerate(rows):
        for c in r:
            col_rows[c].add(t)
    heap = [(len(s), c) for c, s in col_rows.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        cnt, c = heapq.heappop(heap)
        active = col_rows.get(c)
        if not active:
            continue
        if len(active) != cnt:
            heapq.heappush(heap, (len(active), c))
            continue
        piv = min(active, key=lambda t: len(rows[t]))
        prow = rows[piv]
        for cc in prow:
            col_rows[cc].discard(piv)
        inv = pow(prow[c], -1, p)
        for t in list(active):
            r = rows[t]
            f = r[c] * inv % p
            for cc, v in prow.items():
                old = r.get(cc)
                nv = (-f * v) % p if old is None else (old - f * v) % p
                if nv:
                    if old is None:
                        col_rows[cc].add(t)
                    r[cc] = nv
                elif old is not None:
                    del r[cc]
                    col_rows[cc].discard(t)
        rank += 1
        del col_rows[c]
        rows[piv] = {}
        for cc in prow:
            s = col_rows.get(cc)
            if s:
                heapq.heappush(heap, (len(s), cc))
    return rank


def evaluate_matrix(m: SparseMatrix, point: ModularPoint) -> list[dict[int, int]]:
    cache: dict[Scalar, int] = {}
    rows: list[dict[int, int]] = [dict() for _ in range(m.rows)]
    for (r, c), v in m.entries.items():
        x = cache.get(v)
        if x is None:
            x = cache[v] = evaluate_mod(v, point)
        if x:
            rows[r][c] = x
    return rows


def _modular_rank(
    m: SparseMatrix, seeds: Sequence[int], prime: int
) -> RankCertificate:
    pairs = sorted(m.variables())
    ranks, used = [], []
    for seed in seeds:
        attempt = seed
        while True:
            point = ModularPoint.random(pairs, attempt, prime)
            try:
                rows = evaluate_matrix(m, point)
                break
            except DenominatorVanished:
                log.info("denominator vanished at seed %d, redrawing", attempt)
                attempt += 1_000_003
        ranks.append(_rank_mod_rows(rows, prime))
        used.append(attempt)
    agree = len(set(ranks)) == 1
    if not agree:
        raise Disagreement(f"modular ranks {ranks} at seeds {used}")
    return RankCertificate(ranks[0], "modular", used, True, prime)


def _choose(m: SparseMatrix, backend: Backend) -> Literal["exact", "modular"]:
    if backend == "auto":
        return "modular" if m.cols > AUTO_MODULAR_COLUMNS else "exact"
    if backend not in ("exact", "modular"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def rank(
    m: SparseMatrix,
    backend: Backend = "exact",
    seeds: Sequence[int] | None = None,
    prime: int = MERSENNE_61,
) -> RankCertificate:
    """Rank over Q(lambda) with a certificate of how it was obtained.

    ``seeds`` applies to the modular backend (at least two are required;
    default ``0, 1, 2``).  With ``backend="auto"`` a :class:`Disagreement`
    escalates to the exact backend.
    """
    chosen = _choose(m, backend)
    if not m.entries:
        return RankCertificate(0, chosen, list(seeds or []) if chosen == "modular" else [], True,
                               prime if chosen == "modular" else None)
    if chosen == "exact":
        return RankCertificate(_rank_exact_rows(_poly_rows(m)), "exact")
    seeds = list(seeds) if seeds is not None else list(range(DEFAULT_MODULAR_SEEDS))
    if len(seeds) < 2:
        raise ValueError("modular rank needs at least two seeds")
    try:
        return _modular_rank(m, seeds, prime)
    except Disagreement:
        if backend != "auto":
            raise
        log.warning("modular disagreement on %r, escalating to exact", m)
        return RankCertificate(_rank_exact_rows(_poly_rows(m)), "exact", list(seeds), False)


# ------------------------------------------------------------------- kernels


def kernel_basis(m: SparseMatrix) -> list[dict[int, Scalar]]:
    """Basis of ``ker m`` over Q(lambda) via Gauss-Jordan on fractions."""
    rows = [r for r in m.row_dicts() if r]
    pivots: list[tuple[int, dict[int, Scalar]]] = []
    for c in range(m.cols):
        found = None
        for t, r in enumerate(rows):
            if c in r:
                if found is None or len(r) < len(rows[found]):
                    found = t
        if found is None:
            continue
        prow = rows.pop(found)
        inv = prow[c].inverse()
        prow = {k: v * inv for k, v in prow.items()}
        for group in (rows, [r for _, r in pivots]):
            for r in group:
                a = r.get(c)
                if a is None:
                    continue
                for k, v in prow.items():
                    nv = r.get(k, ZERO) - a * v
                    if nv.is_zero():
                        r.pop(k, None)
                    else:
                        r[k] = nv
        pivots.append((c, prow))
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for f in range(m.cols):
        if f in pivot_cols:
            continue
        vec = {f: ONE}
        for c, prow in pivots:
            a = prow.get(f)
            if a is not None:
                vec[c] = -a
        basis.append(vec)
    return basis


def product_is_zero(d_out: SparseMatrix, d_in: SparseMatrix) -> bool:
    return (d_out @ d_in).is_zero()


def image_quotient_dim(
    d_in: SparseMatrix, d_out: SparseMatrix, backend: Backend = "exact", check: bool = True
) -> int:
    """``dim ker(d_out) - rank(d_in)`` for a two-step complex."""
    if d_out.cols != d_in.rows:
        raise ValueError("shape mismatch")
    if check and not product_is_zero(d_out, d_in):
        raise NotAComplex("d_out @ d_in != 0")
    return d_out.cols - rank(d_out, backend).rank - rank(d_in, backend).rank
