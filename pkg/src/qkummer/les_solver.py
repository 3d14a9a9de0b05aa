"""Cyclic and periodic cyclic dimensions from Hochschild dimensions.

When every odd Hochschild group vanishes, the Connes sequence
``HH_m -> HC_m -> HC_(m-2) -> HH_(m-1)`` splits into short exact pieces
``0 -> HH_2k -> HC_2k -> HC_(2k-2) -> 0`` and the dimensions follow by
recursion.  Only dimensions are tracked; no maps are built.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Mapping


class HypothesisViolated(ValueError):
    """Some odd Hochschild dimension is nonzero."""


class NotStabilized(ValueError):
    """The cyclic dimensions have not become constant within ``max_degree``."""


@dataclass
class CyclicReport:
    hh_dims: dict[int, int]
    hc_dims: dict[int, int]
    hp_even: int | None
    hp_odd: int | None
    hypothesis_ok: bool

    def as_dict(self) -> dict:
        return {
            "hh_dims": {str(k): v for k, v in sorted(self.hh_dims.items())},
            "hc_dims": {str(k): v for k, v in sorted(self.hc_dims.items())},
            "hp_even": self.hp_even,
            "hp_odd": self.hp_odd,
            "hypothesis_ok": self.hypothesis_ok,
        }


def _stable_tail(hh: Mapping[int, int], hc: Mapping[int, int], max_degree: int):
    top = max((s for s, v in hh.items() if v), default=0)
    # beyond the support of hh both parities must already be constant
    even = [hc[s] for s in range(max_degree + 1) if s % 2 == 0 and s >= top]
    odd = [hc[s] for s in range(max_degree + 1) if s % 2 == 1 and s >= top]
    if len(even) < 2 or len(odd) < 1 or len(set(even)) != 1 or len(set(odd)) != 1:
        return None, None
    return even[0], odd[0]


def cyclic_from_hochschild(hh: Mapping[int, int], max_degree: int) -> CyclicReport:
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    if any(v < 0 for v in hh.values()) or any(s < 0 for s in hh):
        raise ValueError("dimensions and degrees must be non-negative")
    odd = {s: v for s, v in hh.items() if s % 2 == 1 and v}
    if odd:
        raise HypothesisViolated(f"odd Hochschild dimensions are nonzero: {odd}")
    hc: dict[int, int] = {}
    for m in range(max_degree + 1):
        if m % 2:
            hc[m] = 0
        else:
            hc[m] = hh.get(m, 0) + (hc[m - 2] if m >= 2 else 0)
    hp_even, hp_odd = _stable_tail(hh, hc, max_degree)
    return CyclicReport(dict(hh), hc, hp_even, hp_odd, True)


def periodic_from_cyclic(report: CyclicReport) -> tuple[int, int]:
    if report.hp_even is None or report.hp_odd is None:
        raise NotStabilized(
            "cyclic dimensions are not constant beyond the Hochschild support; "
            "raise max_degree"
        )
    return report.hp_even, report.hp_odd


def exactness_audit(report: CyclicReport) -> list[int]:
    """Even degrees where ``0 -> HH_2k -> HC_2k -> HC_(2k-2) -> 0`` fails additivity.

    An empty list means every segment is consistent with exactness.
    """
    bad = []
    for m, v in report.hc_dims.items():
        if m % 2:
            if v != 0:
                bad.append(m)
            continue
        prev = report.hc_dims.get(m - 2, 0)
        if v != report.hh_dims.get(m, 0) + prev:
            bad.append(m)
    return bad


def closed_form_hc(n: int, m: int) -> int:
    """``sum_{2k <= m} C(n, 2k) + 2**n`` for even ``m``, 0 for odd ``m``."""
    if m % 2:
        return 0
    return sum(comb(n, 2 * k) for k in range(m // 2 + 1)) + 2**n


def closed_form_hp(n: int) -> tuple[int, int]:
    """``(2**(n-1) + 2**n, 0)``: untwisted plus twisted even contributions."""
    return 2 ** (n - 1) + 2**n, 0
