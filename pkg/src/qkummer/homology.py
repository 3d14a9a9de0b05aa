"""Hochschild homology of the quantum torus with untwisted and twisted coefficients.

Untwisted homology is computed block by block over multidegrees ``beta``;
every ``beta != 0`` block must be exact and the ``beta = 0`` block carries
``binom(n, s)`` classes.  Their flip eigenvalues come from :mod:`.transport`.

Twisted homology splits over the ``2**n`` residue classes of ``beta mod 2``.
Each class is infinite, so it is truncated to a window ``[-L, L]**n``:

    H_est(L) = dim C_s(L) - rank d_s(L) - dim(Z_s(L) & B_s(L + margin))

where the last term equals ``rank D - rank P_out D`` for ``D`` the matrix of
``d_(s+1)`` on the window ``L + margin`` and ``P_out`` the projection onto
rows outside the window ``L``.  Estimates are recorded for ``L - 1`` and
``L``; equal values mark the degree as stabilized.
"""

from __future__ import annotations

import itertools
import logging
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Literal

from .algebra import ExpVec, flip_monomial, twisted_conj_scalar, unit_vec, vec_add
from .koszul import (
    BlockKey,
    KoszulChain,
    block_basis,
    block_matrix,
    in_window,
    twisted_diff,
    vector_to_chain,
    wedges,
)
from .linalg import DEFAULT_MODULAR_SEEDS, Backend, kernel_basis, rank
from .scalars import ONE, ZERO, Scalar
from .transport import invariance_sign

log = logging.getLogger(__name__)

WORKERS_ENV = "QKUMMER_WORKERS"


class UnexpectedHomology(ArithmeticError):
    """A ``beta != 0`` untwisted block has nonzero homology."""


class NotStabilized(RuntimeError):
    """Twisted estimates still change between the last two windows."""


class ResidualNonzero(ArithmeticError):
    """The hyperplane sweep left a nonzero residual."""


@dataclass
class HochschildResult:
    mode: Literal["untwisted", "twisted"]
    n: int
    dims: dict[int, int]
    invariant_dims: dict[int, int]
    blocks_checked: dict = field(default_factory=dict)
    stabilized: dict[int, bool] = field(default_factory=dict)
    trajectories: dict[int, dict[int, int]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "dims": {str(k): v for k, v in sorted(self.dims.items())},
            "invariant_dims": {str(k): v for k, v in sorted(self.invariant_dims.items())},
            "blocks_checked": self.blocks_checked,
            "stabilized": {str(k): v for k, v in sorted(self.stabilized.items())},
            "trajectories": {
                str(s): {str(L): d for L, d in sorted(t.items())}
                for s, t in sorted(self.trajectories.items())
            },
            "notes": list(self.notes),
        }


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _map(fn, jobs: list) -> list:
    w = _workers()
    if w == 1 or len(jobs) < 2:
        return [fn(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=w) as pool:
        return list(pool.map(fn, *zip(*jobs)))


# ----------------------------------------------------------------- untwisted


def modular_seeds(seed: int) -> tuple[int, ...]:
    """Evaluation seeds used by the modular backend for a run seeded with ``seed``."""
    return tuple(seed + k for k in range(DEFAULT_MODULAR_SEEDS))


def untwisted_block_homology(
    n: int, beta: ExpVec, backend: Backend = "exact", seed: int = 0
) -> dict[int, int]:
    key = BlockKey("untwisted", tuple(beta))
    seeds = modular_seeds(seed)
    ranks = {
        s: rank(block_matrix("untwisted", s, key), backend, seeds).rank for s in range(1, n + 1)
    }
    ranks[0] = ranks[n + 1] = 0
    return {s: comb(n, s) - ranks[s] - ranks[s + 1] for s in range(n + 1)}


def _untwisted_chunk(
    n: int, betas: list, backend: Backend, seed: int
) -> list[tuple[ExpVec, dict[int, int]]]:
    return [(b, untwisted_block_homology(n, b, backend, seed)) for b in betas]


def untwisted_invariants(n: int, s_max: int | None = None) -> dict[int, int]:
    """Invariant dimension per degree, from the transported flip sign of each generator."""
    s_max = n if s_max is None else min(s_max, n)
    out = {}
    for s in range(s_max + 1):
        count = 0
        for w in wedges(n, s):
            sign = invariance_sign(n, w)
            if sign == ONE:
                count += 1
            elif sign != -ONE:
                raise ArithmeticError(f"flip eigenvalue {sign} on e_{list(w)} is not +-1")
        out[s] = count
    return out


def untwisted_homology(
    n: int,
    window: int = 2,
    backend: Backend = "exact",
    s_max: int | None = None,
    seed: int = 0,
) -> HochschildResult:
    """Untwisted Hochschild dimensions; certifies every ``beta != 0`` block in the window exact."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if window < 1:
        raise ValueError("window must be >= 1")
    s_max = n if s_max is None else min(s_max, n)
    betas = list(itertools.product(range(-window, window + 1), repeat=n))
    chunks = [betas[i:i + 256] for i in range(0, len(betas), 256)]
    results = [r for part in _map(_untwisted_chunk, [(n, c, backend, seed) for c in chunks]) for r in part]
    dims = {s: 0 for s in range(s_max + 1)}
    for beta, h in results:
        if any(beta) and any(h.values()):
            raise UnexpectedHomology(f"block beta={beta} has homology {h}")
        for s in dims:
            dims[s] += h[s]
    result = HochschildResult(
        "untwisted",
        n,
        dims,
        untwisted_invariants(n, s_max),
        blocks_checked={
            "window": window,
            "blocks": len(betas),
            "nonzero_blocks_acyclic": len(betas) - 1,
            "backend": backend,
            "seeds": list(modular_seeds(seed)) if backend != "exact" else [],
        },
        stabilized={s: True for s in dims},
    )
    return result


# ------------------------------------------------------------------- twisted


def residue_classes(n: int) -> list[ExpVec]:
    return list(itertools.product((0, 1), repeat=n))


def _inverse_step(i: int, beta: ExpVec) -> tuple[Scalar, ExpVec]:
    """``T_i^-1 nu^beta = c nu^(beta - 2 e_i)`` where ``T_i a = nu_i a nu_i``."""
    lower = vec_add(beta, unit_vec(len(beta), i, -2))
    return twisted_conj_scalar(i, lower).inverse(), lower


def rewrite_h0(
    x: KoszulChain, axis_order: list[int] | None = None
) -> tuple[dict[ExpVec, Scalar], KoszulChain]:
    """Rewrite a degree-0 twisted chain onto the ``{0,1}**n`` representatives.

    Returns ``(coeffs, c)`` with ``x = sum coeffs[r] nu^r + twisted_diff(c)``.
    Uses ``nu^beta - tau nu^(beta + 2 e_i) = twisted_diff(-nu^beta e_i)``.
    """
    if x.degree != 0:
        raise ValueError("rewrite_h0 expects a degree-0 chain")
    n = x.n
    order = axis_order or list(range(1, n + 1))
    coeffs: dict[ExpVec, Scalar] = {}
    boundary: dict[tuple[ExpVec, tuple[int, ...]], Scalar] = {}

    def bump(beta: ExpVec, i: int, c: Scalar) -> None:
        k = (beta, (i,))
        boundary[k] = boundary.get(k, ZERO) + c

    for (beta, _), coef in x.support.items():
        for i in order:
            while beta[i - 1] not in (0, 1):
                if beta[i - 1] < 0:
                    # coef nu^beta = coef tau nu^(beta+2e_i) + d(-coef nu^beta e_i)
                    bump(beta, i, -coef)
                    coef = coef * twisted_conj_scalar(i, beta)
                    beta = vec_add(beta, unit_vec(n, i, 2))
                else:
                    c, lower = _inverse_step(i, beta)
                    # coef nu^beta = coef c nu^lower + d(coef c nu^lower e_i)
                    coef = coef * c
                    beta = lower
                    bump(beta, i, coef)
        coeffs[beta] = coeffs.get(beta, ZERO) + coef
    coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}
    return coeffs, KoszulChain(n, 1, boundary)


@dataclass
class TwistedH0:
    n: int
    dimension: int
    representatives: list[ExpVec]

    def rewrite(self, x: KoszulChain, axis_order: list[int] | None = None):
        return rewrite_h0(x, axis_order)


def twisted_h0(n: int) -> TwistedH0:
    """``H_0`` with twisted coefficients: one class per residue class mod 2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    reps = residue_classes(n)
    # each representative must survive: it is not rewritten to anything else
    for r in reps:
        coeffs, _ = rewrite_h0(KoszulChain.basis(n, r, ()))
        assert coeffs == {r: ONE}
    return TwistedH0(n, len(reps), reps)


def h0_flip_scalar(n: int, rep: ExpVec) -> Scalar:
    """Total scalar of ``flip(nu^rep)`` rewritten back onto ``nu^rep``."""
    s, neg = flip_monomial(tuple(rep))
    coeffs, _ = rewrite_h0(KoszulChain.basis(n, neg, (), s))
    if set(coeffs) - {tuple(rep)}:
        raise ArithmeticError(f"flip moved class {rep} to {set(coeffs)}")
    return coeffs.get(tuple(rep), ZERO)


def twisted_h0_invariants(n: int) -> tuple[int, dict[ExpVec, Scalar]]:
    """Number of flip-invariant ``H_0`` classes and each class's eigenvalue."""
    scalars = {r: h0_flip_scalar(n, r) for r in twisted_h0(n).representatives}
    return sum(1 for v in scalars.values() if v == ONE), scalars


def twisted_class_estimate(
    n: int,
    s: int,
    label: ExpVec,
    window: int,
    margin: int = 2,
    backend: Backend = "exact",
    seed: int = 0,
) -> dict:
    """Windowed homology estimate of one residue class in degree ``s``."""
    key = BlockKey("twisted", tuple(label))
    seeds = modular_seeds(seed)
    dim_c = len(block_basis(n, s, key, window))
    r_a = rank(block_matrix("twisted", s, key, window), backend, seeds) if s >= 1 else None
    if s + 1 <= n:
        d = block_matrix("twisted", s + 1, key, window + margin)
        outside = [t for t, (beta, _) in enumerate(d.row_labels) if not in_window(beta, window)]
        r_d = rank(d, backend, seeds)
        r_p = rank(d.select_rows(outside), backend, seeds)
    else:
        r_d = r_p = None
    value = dim_c - (r_a.rank if r_a else 0) - ((r_d.rank - r_p.rank) if r_d else 0)
    certs = [c for c in (r_a, r_d, r_p) if c is not None]
    return {
        "label": list(label),
        "window": window,
        "dim": value,
        "chain_dim": dim_c,
        "ranks": [c.as_dict() for c in certs],
    }


def twisted_homology(
    n: int,
    s: int,
    window: int = 2,
    margin: int = 2,
    backend: Backend = "exact",
    strict: bool = True,
    seed: int = 0,
) -> dict:
    """Twisted homology in degree ``s`` over all classes, at windows ``L - 1`` and ``L``.

    Returns ``{"dimension", "trajectory", "stabilized", "classes"}``; raises
    :class:`NotStabilized` when ``strict`` and the two windows disagree.
    """
    if not 0 <= s <= n:
        raise ValueError(f"degree {s} outside 0..{n}")
    if window < 2 or margin < 2:
        raise ValueError("window and margin must be >= 2")
    windows = [window - 1, window]
    jobs = [(n, s, lab, L, margin, backend, seed) for L in windows for lab in residue_classes(n)]
    estimates = _map(twisted_class_estimate, jobs)
    trajectory = {L: sum(e["dim"] for e in estimates if e["window"] == L) for L in windows}
    stabilized = trajectory[windows[0]] == trajectory[windows[1]]
    if strict and not stabilized:
        raise NotStabilized(f"degree {s}: {trajectory}")
    return {
        "dimension": trajectory[window],
        "trajectory": trajectory,
        "stabilized": stabilized,
        "classes": [e for e in estimates if e["window"] == window],
    }


def twisted_result(
    n: int, window: int = 2, margin: int = 2, backend: Backend = "exact", seed: int = 0
) -> HochschildResult:
    """All twisted degrees: ``H_0`` by rewriting (cross-checked by windows), ``H_s`` by windows."""
    h0 = twisted_h0(n)
    inv_count, scalars = twisted_h0_invariants(n)
    dims = {0: h0.dimension}
    inv = {0: inv_count}
    stabilized, trajectories, classes = {}, {}, {}
    notes = []
    for s in range(n + 1):
        t = twisted_homology(n, s, window, margin, backend, strict=False, seed=seed)
        stabilized[s] = t["stabilized"]
        trajectories[s] = t["trajectory"]
        classes[s] = [{"label": c["label"], "dim": c["dim"]} for c in t["classes"]]
        if s == 0:
            if t["dimension"] != h0.dimension:
                notes.append(
                    f"H_0 window estimate {t['dimension']} differs from rewriting count {h0.dimension}"
                )
            continue
        dims[s] = t["dimension"]
        inv[s] = t["dimension"]
        if t["dimension"]:
            notes.append(f"twisted H_{s} is nonzero; invariant part reported as an upper bound")
    return HochschildResult(
        "twisted",
        n,
        dims,
        inv,
        blocks_checked={
            "window": window,
            "margin": margin,
            "backend": backend,
            "seeds": list(modular_seeds(seed)) if backend != "exact" else [],
            "classes": classes,
            "h0_flip_scalars": {"".join(map(str, r)): str(v) for r, v in scalars.items()},
        },
        stabilized=stabilized,
        trajectories=trajectories,
        notes=notes,
    )


# ------------------------------------------------------ explicit boundaries


@dataclass
class ReductionCertificate:
    input: KoszulChain
    preimage: KoszulChain
    residual: KoszulChain
    sweep_trace: list[tuple[int, int]]

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()

    def verify(self) -> bool:
        """``twisted_diff(preimage) == input`` recomputed from scratch."""
        return self.ok and twisted_diff(self.preimage) == self.input


def reduce_twisted_cycle(gamma: KoszulChain, strict: bool = False) -> ReductionCertificate:
    """Write a twisted cycle as an explicit boundary by sweeping hyperplanes.

    For axis ``a = 1, 2, ...``: the part of the chain without ``e_a`` is
    pushed from its top hyperplane ``{x_a = l}`` down one step at a time by
    subtracting ``twisted_diff(e_a ^ T_a^-1 (top slice))`` until it occupies
    a single hyperplane per parity of ``x_a``.  Cycle-ness then forces the
    ``e_a`` part to vanish, and the remainder is a cycle of the complex on the
    remaining axes.
    """
    n, s = gamma.n, gamma.degree
    if s < 1:
        raise ValueError("reduction needs degree >= 1; use rewrite_h0 in degree 0")
    if not twisted_diff(gamma).is_zero():
        raise ValueError("input is not a twisted cycle")
    current = gamma
    pre: dict[tuple[ExpVec, tuple[int, ...]], Scalar] = {}
    trace: list[tuple[int, int]] = []
    for a in range(1, n + 1):
        if current.is_zero():
            break
        while True:
            free = {k: v for k, v in current.support.items() if a not in k[1]}
            levels = {beta[a - 1] for beta, _ in free}
            # each parity of x_a sweeps independently
            tops = [max(l for l in levels if l % 2 == p) for p in (0, 1)
                    if sum(1 for l in levels if l % 2 == p) > 1]
            if not tops:
                break
            top = tops[0]
            corr: dict[tuple[ExpVec, tuple[int, ...]], Scalar] = {}
            for (beta, w), c in free.items():
                if beta[a - 1] != top:
                    continue
                scal, lower = _inverse_step(a, beta)
                corr[(lower, (a,) + w)] = c * scal
            step = KoszulChain(n, s + 1, corr)
            current = current - twisted_diff(step)
            for k, v in step.support.items():
                pre[k] = pre.get(k, ZERO) + v
            trace.append((a, top))
        if any(a in w for _, w in current.support):
            break
    residual = current
    cert = ReductionCertificate(gamma, KoszulChain(n, s + 1, pre), residual, trace)
    if strict and not cert.ok:
        raise ResidualNonzero(f"sweep left {residual}")
    return cert


def random_twisted_cycle(n: int, seed: int, window: int = 2) -> KoszulChain:
    """Seeded twisted 1-cycle: a random integer combination of kernel vectors.

    The kernel of ``d_1`` is taken on one residue class inside a window (grown
    from ``window`` until some class has cycles), so the cycle is not built
    as a boundary.
    """
    rng = random.Random(seed)
    labels = residue_classes(n)
    start = rng.randrange(len(labels))
    for w in range(window, window + 4):
        for label in labels[start:] + labels[:start]:
            m = block_matrix("twisted", 1, BlockKey("twisted", label), w)
            basis = kernel_basis(m)
            if basis:
                break
        if basis:
            break
    else:
        raise RuntimeError("no twisted 1-cycles found in small windows")
    while True:
        acc: dict[int, Scalar] = {}
        for vec in basis:
            c = rng.randint(-3, 3)
            if c:
                for t, v in vec.items():
                    acc[t] = acc.get(t, ZERO) + v * Scalar(c)
        chain = vector_to_chain(n, 1, acc, m.col_labels)
        if not chain.is_zero():
            return chain
