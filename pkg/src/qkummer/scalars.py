"""Exact arithmetic in the generic deformation field Q(lambda_ij).

The coefficient field is the purely transcendental field generated by the
commutation parameters ``lambda_ij`` (``1 <= i < j <= n``).  Elements are
stored as fractions of integer Laurent polynomials.  ``lambda_ji`` and
``lambda_ii`` are never stored: constructors resolve them to ``lambda_ij**-1``
and ``1``.

A randomized modular backend (:class:`ModularPoint`, :func:`evaluate_mod`)
evaluates scalars at a seeded random point modulo a large prime.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping

Pair = tuple[int, int]
# canonical monomial key: sorted tuple of ((i, j), exponent), no zero exponents
MonoKey = tuple[tuple[Pair, int], ...]

MERSENNE_61 = 2**61 - 1


class DenominatorVanished(ArithmeticError):
    """The denominator of a scalar evaluates to zero at a modular point."""


def _pair(i: int, j: int, e: int) -> tuple[Pair, int] | None:
    if i == j or e == 0:
        return None
    if i > j:
        return (j, i), -e
    return (i, j), e


def _mono_mul(a: MonoKey, b: MonoKey) -> MonoKey:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for k, e in b:
        v = d.get(k, 0) + e
        if v:
            d[k] = v
        else:
            del d[k]
    return tuple(sorted(d.items()))


def _mono_inv(a: MonoKey) -> MonoKey:
    return tuple((k, -e) for k, e in a)


def _mono_pow(a: MonoKey, e: int) -> MonoKey:
    if e == 0:
        return ()
    return tuple((k, v * e) for k, v in a)


@dataclass(frozen=True)
class LambdaMonomial:
    """A monomial ``prod lambda_ij**e_ij`` with ``i < j``."""

    exponents: MonoKey = ()

    @classmethod
    def of(cls, i: int, j: int, e: int = 1) -> "LambdaMonomial":
        p = _pair(i, j, e)
        return cls(() if p is None else (p,))

    @classmethod
    def from_mapping(cls, exps: Mapping[Pair, int]) -> "LambdaMonomial":
        key: MonoKey = ()
        for (i, j), e in exps.items():
            p = _pair(i, j, e)
            if p is not None:
                key = _mono_mul(key, (p,))
        return cls(key)

    def __mul__(self, other: "LambdaMonomial") -> "LambdaMonomial":
        return LambdaMonomial(_mono_mul(self.exponents, other.exponents))

    def inverse(self) -> "LambdaMonomial":
        return LambdaMonomial(_mono_inv(self.exponents))

    def is_one(self) -> bool:
        return not self.exponents

    def __str__(self) -> str:
        return _mono_str(self.exponents) or "1"


def _mono_str(m: MonoKey) -> str:
    parts = []
    for (i, j), e in m:
        name = f"l{i}_{j}"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


class LaurentPoly:
    """Integer Laurent polynomial in the ``lambda_ij``; immutable."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[MonoKey, int] | None = None):
        self.terms: dict[MonoKey, int] = (
            {k: c for k, c in terms.items() if c} if terms else {}
        )
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[MonoKey, int]) -> "LaurentPoly":
        # caller guarantees no zero coefficients
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls._raw({(): c} if c else {})

    @classmethod
    def monomial(cls, m: LambdaMonomial | MonoKey, c: int = 1) -> "LaurentPoly":
        key = m.exponents if isinstance(m, LambdaMonomial) else m
        return cls._raw({key: c} if c else {})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_term(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        """True for ``+-`` a monomial (the units of the Laurent ring)."""
        if len(self.terms) != 1:
            return False
        (c,) = self.terms.values()
        return c == 1 or c == -1

    def unit_inverse(self) -> "LaurentPoly":
        ((m, c),) = self.terms.items()
        return LaurentPoly._raw({_mono_inv(m): c})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        d = dict(self.terms)
        for k, c in other.terms.items():
            v = d.get(k, 0) + c
            if v:
                d[k] = v
            else:
                del d[k]
        return LaurentPoly._raw(d)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not other.terms:
            return self
        d = dict(self.terms)
        for k, c in other.terms.items():
            v = d.get(k, 0) - c
            if v:
                d[k] = v
            else:
                del d[k]
        return LaurentPoly._raw(d)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.terms or not other.terms:
            return LaurentPoly._raw({})
        d: dict[MonoKey, int] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = _mono_mul(k1, k2)
                v = d.get(k, 0) + c1 * c2
                if v:
                    d[k] = v
                else:
                    del d[k]
        return LaurentPoly._raw(d)

    def scale(self, c: int) -> "LaurentPoly":
        if c == 0:
            return LaurentPoly._raw({})
        return LaurentPoly._raw({k: v * c for k, v in self.terms.items()})

    def exact_div_int(self, c: int) -> "LaurentPoly":
        return LaurentPoly._raw({k: v // c for k, v in self.terms.items()})

    def shift(self, m: MonoKey) -> "LaurentPoly":
        if not m:
            return self
        return LaurentPoly._raw({_mono_mul(k, m): v for k, v in self.terms.items()})

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
            if g == 1:
                break
        return g

    def min_monomial(self) -> MonoKey:
        """Componentwise minimum of exponents (the monomial content)."""
        mins: dict[Pair, int] | None = None
        for k in self.terms:
            d = dict(k)
            if mins is None:
                mins = d
                continue
            for v in set(mins) | set(d):
                mins[v] = min(mins.get(v, 0), d.get(v, 0))
        if not mins:
            return ()
        return tuple(sorted((k, e) for k, e in mins.items() if e))

    def variables(self) -> set[Pair]:
        return {v for k in self.terms for v, _ in k}

    def degree(self) -> int:
        return max((sum(abs(e) for _, e in k) for k in self.terms), default=0)

    def leading(self) -> tuple[MonoKey, int]:
        k = max(self.terms)
        return k, self.terms[k]

    def evaluate_mod(self, values: Mapping[Pair, int], p: int) -> int:
        total = 0
        for k, c in self.terms.items():
            t = c
            for v, e in k:
                t = t * pow(values[v], e, p) % p
            total += t
        return total % p

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for k in sorted(self.terms, key=lambda k: (sum(abs(e) for _, e in k), k)):
            c = self.terms[k]
            m = _mono_str(k)
            if not m:
                body = str(abs(c))
            elif abs(c) == 1:
                body = m
            else:
                body = f"{abs(c)}*{m}"
            sign = "-" if c < 0 else "+"
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    __repr__ = __str__


_ONE_POLY = LaurentPoly.constant(1)


def _cancel(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Remove the polynomial gcd of ``num`` and ``den`` (via sympy)."""
    from sympy.polys.domains import ZZ
    from sympy.polys.rings import ring

    pairs = sorted(num.variables() | den.variables())
    if not pairs:
        return num, den
    names = ",".join(f"x{i}_{j}" for i, j in pairs)
    R, *_ = ring(names, ZZ)
    index = {v: t for t, v in enumerate(pairs)}

    def to_ring(p: LaurentPoly):
        shift = _mono_inv(p.min_monomial())
        q = p.shift(shift)
        terms = {}
        for k, c in q.terms.items():
            e = [0] * len(pairs)
            for v, x in k:
                e[index[v]] = x
            terms[tuple(e)] = c
        return R.from_dict(terms), shift

    def from_ring(el) -> LaurentPoly:
        out = {}
        for e, c in el.items():
            key = tuple((pairs[t], x) for t, x in enumerate(e) if x)
            out[key] = int(c)
        return LaurentPoly(out)

    pn, sn = to_ring(num)
    pd, sd = to_ring(den)
    g = pn.gcd(pd)
    if g == 1 or g == -1:
        return num, den
    qn = from_ring(pn.exquo(g)).shift(_mono_inv(sn))
    qd = from_ring(pd.exquo(g)).shift(_mono_inv(sd))
    return qn, qd


class Scalar:
    """An element of Q(lambda_ij) stored as a canonical fraction.

    Canonical form: the denominator carries no monomial content, has a
    positive leading coefficient, and shares no common factor with the
    numerator.  Denominators that are a single term are absorbed into the
    numerator (leaving only a positive integer).
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: LaurentPoly | int = 0, den: LaurentPoly | int = 1):
        if isinstance(num, int):
            num = LaurentPoly.constant(num)
        if isinstance(den, int):
            den = LaurentPoly.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _normalize(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly = _ONE_POLY) -> "Scalar":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def lam(cls, i: int, j: int, e: int = 1) -> "Scalar":
        """``lambda_ij**e`` with skew-symmetric index resolution."""
        return cls._raw(LaurentPoly.monomial(LambdaMonomial.of(i, j, e)))

    @classmethod
    def monomial(cls, m: LambdaMonomial | MonoKey, c: int = 1) -> "Scalar":
        return cls._raw(LaurentPoly.monomial(m, c))

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "Scalar":
        return cls._raw(p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den is _ONE_POLY or self.den == _ONE_POLY

    def __add__(self, other: "Scalar | int") -> "Scalar":
        other = _coerce(other)
        if self.is_polynomial() and other.is_polynomial():
            return Scalar._raw(self.num + other.num)
        return Scalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw(-self.num, self.den)

    def __sub__(self, other: "Scalar | int") -> "Scalar":
        return self + (-_coerce(other))

    def __rsub__(self, other: "Scalar | int") -> "Scalar":
        return _coerce(other) - self

    def __mul__(self, other: "Scalar | int") -> "Scalar":
        other = _coerce(other)
        if self.is_polynomial() and other.is_polynomial():
            return Scalar._raw(self.num * other.num)
        return Scalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.num.is_unit() and self.is_polynomial():
            return Scalar._raw(self.num.unit_inverse())
        return Scalar(self.den, self.num)

    def __truediv__(self, other: "Scalar | int") -> "Scalar":
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other: "Scalar | int") -> "Scalar":
        return _coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "Scalar":
        if e < 0:
            return self.inverse() ** (-e)
        out = Scalar._raw(_ONE_POLY)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _coerce(x: "Scalar | int") -> Scalar:
    if isinstance(x, Scalar):
        return x
    return Scalar._raw(LaurentPoly.constant(x)) if x else ZERO


def _normalize(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if num.is_zero():
        return num, _ONE_POLY
    if not den.is_term():
        num, den = _cancel(num, den)
    if den.is_term():
        ((m, c),) = den.terms.items()
        num = num.shift(_mono_inv(m))
        if c < 0:
            num, c = -num, -c
        g = gcd(num.content(), c)
        if g > 1:
            num, c = num.exact_div_int(g), c // g
        return num, (_ONE_POLY if c == 1 else LaurentPoly.constant(c))
    m = den.min_monomial()
    if m:
        num, den = num.shift(_mono_inv(m)), den.shift(_mono_inv(m))
    if den.leading()[1] < 0:
        num, den = -num, -den
    g = gcd(num.content(), den.content())
    if g > 1:
        num, den = num.exact_div_int(g), den.exact_div_int(g)
    return num, den


ZERO = Scalar._raw(LaurentPoly.constant(0))
ONE = Scalar._raw(_ONE_POLY)


def lam(i: int, j: int, e: int = 1) -> Scalar:
    return Scalar.lam(i, j, e)


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def scalar_is_zero(a: Scalar) -> bool:
    return a.is_zero()


def lambda_pairs(n: int) -> list[Pair]:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


@dataclass(frozen=True)
class ModularPoint:
    """A seeded random evaluation point ``lambda_ij -> residue mod prime``."""

    prime: int
    assignment: Mapping[Pair, int] = field(hash=False)
    seed: int

    @classmethod
    def random(
        cls, pairs: Iterable[Pair], seed: int, prime: int = MERSENNE_61
    ) -> "ModularPoint":
        rng = random.Random(seed)
        values = {p: rng.randrange(2, prime - 1) for p in sorted(pairs)}
        return cls(prime, values, seed)

    def __post_init__(self):
        for v in self.assignment.values():
            if v % self.prime == 0:
                raise ValueError("assigned residue is not invertible")


def evaluate_mod(a: Scalar, point: ModularPoint) -> int:
    """Image of ``a`` under ``lambda_ij -> point.assignment[(i, j)] mod p``."""
    p = point.prime
    num = a.num.evaluate_mod(point.assignment, p)
    den = a.den.evaluate_mod(point.assignment, p)
    if den == 0:
        raise DenominatorVanished(f"denominator of {a} vanishes mod {p}")
    return num * pow(den, -1, p) % p


_TERM = re.compile(r"\s*([+-]?)\s*(\d+)?\*?((?:l\d+_\d+(?:\^-?\d+)?\*?)*)")


def parse_poly(text: str) -> LaurentPoly:
    """Inverse of ``str(LaurentPoly)``; used for report round trips."""
    text = text.strip()
    if text == "0":
        return LaurentPoly()
    out = LaurentPoly()
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at {pos}")
        sign, coef, mono = m.groups()
        c = int(coef) if coef else 1
        if sign == "-":
            c = -c
        key: MonoKey = ()
        for f in filter(None, mono.split("*")):
            name, _, e = f.partition("^")
            i, j = map(int, name[1:].split("_"))
            key = _mono_mul(key, ((( i, j), int(e) if e else 1),))
        out = out + LaurentPoly.monomial(key, c)
        pos = m.end()
    return out


def parse_scalar(text: str) -> Scalar:
    text = text.strip()
    if text.startswith("(") and ")/(" in text:
        a, b = text[1:-1].split(")/(")
        return Scalar(parse_poly(a), parse_poly(b))
    return Scalar(parse_poly(text))
