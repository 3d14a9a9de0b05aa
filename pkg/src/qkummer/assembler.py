"""Homology of the crossed product by the flip, as a direct sum of invariants.

Degree by degree, the crossed-product homology is the flip-invariant part of
the untwisted homology plus the flip-invariant part of the twisted one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .homology import HochschildResult


class DegreeMismatch(ValueError):
    """The two inputs disagree on ``n`` or do not cover degrees ``0..n``."""


def expected_dims(n: int) -> dict[int, int]:
    """Closed forms: ``2**n + 1`` in degree 0, ``C(n, s)`` in even ``s > 0``, else 0."""
    out = {0: 2**n + 1}
    for s in range(1, n + 1):
        out[s] = comb(n, s) if s % 2 == 0 else 0
    return out


@dataclass
class CrossedProductReport:
    n: int
    hh_dims: dict[int, int]
    sources: dict[int, dict[str, int]]
    theorem_check: bool
    expected: dict[int, int] = field(default_factory=dict)

    def dim(self, s: int) -> int:
        # the Koszul complex stops at degree n
        return self.hh_dims.get(s, 0)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "hh_dims": {str(k): v for k, v in sorted(self.hh_dims.items())},
            "sources": {str(k): v for k, v in sorted(self.sources.items())},
            "expected": {str(k): v for k, v in sorted(self.expected.items())},
            "theorem_check": self.theorem_check,
        }


def _check_input(r: HochschildResult, mode: str, n: int) -> None:
    if r.mode != mode:
        raise DegreeMismatch(f"expected a {mode} result, got {r.mode}")
    if r.n != n:
        raise DegreeMismatch(f"{mode} result is for n={r.n}, not n={n}")
    missing = [s for s in range(n + 1) if s not in r.invariant_dims]
    if missing:
        raise DegreeMismatch(f"{mode} result lacks degrees {missing}")


def assemble(n: int, untwisted: HochschildResult, twisted: HochschildResult) -> CrossedProductReport:
    _check_input(untwisted, "untwisted", n)
    _check_input(twisted, "twisted", n)
    hh, sources = {}, {}
    for s in range(n + 1):
        u = untwisted.invariant_dims[s]
        t = twisted.invariant_dims[s]
        hh[s] = u + t
        sources[s] = {"untwisted_invariant": u, "twisted_invariant": t}
    expected = expected_dims(n)
    return CrossedProductReport(n, hh, sources, hh == expected, expected)
