"""Exact arithmetic in multiquadratic extensions of Q.

A :class:`QuadExt` is a finite sum ``sum(c_d * sqrt(d))`` over squarefree
positive radicands ``d`` with rational coefficients ``c_d``.  Values are
immutable, hashable and compare by exact structural equality, which is
sound because the square roots of distinct squarefree integers are linearly
independent over Q.
"""

from __future__ import annotations

import math
import sys
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping

from sympy import factorint

from .errors import PrecisionLoss

_EPS = sys.float_info.epsilon
_MAX_REFINE_BITS = 4096


@lru_cache(maxsize=4096)
def split_square(n: int) -> tuple[int, int]:
    """Return ``(a, d)`` with ``n == a*a*d`` and ``d`` squarefree."""
    if n <= 0:
        raise ValueError(f"radicand must be positive, got {n}")
    a, d = 1, 1
    for p, e in factorint(n).items():
        a *= p ** (e // 2)
        if e % 2:
            d *= p
    return a, d


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected a rational number, got {type(x).__name__}")


class QuadExt:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for d, c in items:
            c = _as_fraction(c)
            if c == 0:
                continue
            a, sf = split_square(int(d))
            acc[sf] = acc.get(sf, Fraction(0)) + c * a
        self._terms: tuple[tuple[int, Fraction], ...] = tuple(
            sorted((d, c) for d, c in acc.items() if c != 0)
        )
        self._hash = hash(self._terms)

    # -- construction -------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict[int, Fraction]) -> QuadExt:
        # terms already keyed by squarefree radicands
        obj = cls.__new__(cls)
        obj._terms = tuple(sorted((d, c) for d, c in terms.items() if c != 0))
        obj._hash = hash(obj._terms)
        return obj

    @classmethod
    def rational(cls, x) -> QuadExt:
        return cls({1: x})

    @classmethod
    def sqrt(cls, n: int) -> QuadExt:
        """Exact square root of a non-negative integer."""
        if n == 0:
            return cls()
        return cls({n: 1})

    @staticmethod
    def coerce(x) -> QuadExt:
        if isinstance(x, QuadExt):
            return x
        return QuadExt.rational(x)

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(d == 1 for d, _ in self._terms)

    def rational_part(self) -> Fraction:
        for d, c in self._terms:
            if d == 1:
                return c
        return Fraction(0)

    def as_integer(self) -> int | None:
        """The value as an ``int`` if it is a rational integer, else None."""
        if not self.is_rational():
            return None
        c = self.rational_part()
        return c.numerator if c.denominator == 1 else None

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        try:
            other = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self._terms)
        for d, c in other._terms:
            acc[d] = acc.get(d, Fraction(0)) + c
        return QuadExt._raw(acc)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt._raw({d: -c for d, c in self._terms})

    def __sub__(self, other):
        try:
            other = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QuadExt):
            return NotImplemented
        acc: dict[int, Fraction] = {}
        for a, ca in self._terms:
            for b, cb in other._terms:
                # sqrt(a)*sqrt(b) = g*sqrt(ab/g^2) for squarefree a, b
                g = math.gcd(a, b)
                d = (a // g) * (b // g)
                acc[d] = acc.get(d, Fraction(0)) + ca * cb * g
        return QuadExt._raw(acc)

    __rmul__ = __mul__

    def scale(self, r) -> QuadExt:
        r = _as_fraction(r)
        return QuadExt._raw({d: c * r for d, c in self._terms})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("QuadExt division by zero")
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result, base = QuadExt.rational(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadExt.rational(other)
        if not isinstance(other, QuadExt):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return self._hash

    def approx(self) -> tuple[float, float]:
        """Double-precision value with a rigorous absolute error bound."""
        if not self._terms:
            return 0.0, 0.0
        total, mag = 0.0, 0.0
        for d, c in self._terms:
            t = float(c) if d == 1 else float(c) * math.sqrt(d)
            total += t
            mag += abs(t)
        # per term: fraction->float, sqrt, product (3 roundings); plus summation
        err = (len(self._terms) + 4) * _EPS * mag + sys.float_info.min
        return total, err

    def __float__(self):
        return self.approx()[0]

    def sign(self) -> int:
        """Certified sign: -1, 0 or 1."""
        if not self._terms:
            return 0
        value, err = self.approx()
        if value > err:
            return 1
        if value < -err:
            return -1
        return self._refine_sign()

    def _refine_sign(self) -> int:
        bits = 64
        while bits <= _MAX_REFINE_BITS:
            scale = 1 << bits
            lo = hi = Fraction(0)
            for d, c in self._terms:
                r = math.isqrt(d * scale * scale)
                # r/scale <= sqrt(d) < (r+1)/scale, exact when d == 1
                s_lo = Fraction(r, scale)
                s_hi = s_lo if r * r == d * scale * scale else Fraction(r + 1, scale)
                a, b = c * s_lo, c * s_hi
                lo += min(a, b)
                hi += max(a, b)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise PrecisionLoss(f"cannot certify the sign of {self}")

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __lt__(self, other):
        return (self - QuadExt.coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - QuadExt.coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - QuadExt.coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - QuadExt.coerce(other)).sign() >= 0

    # -- rendering ----------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (d, c) in enumerate(self._terms):
            neg = c < 0
            mag = -c if neg else c
            coef = str(mag)
            if d == 1:
                body = coef
            elif mag == 1:
                body = f"sqrt({d})"
            else:
                body = f"{coef}*sqrt({d})"
            if i == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self):
        return f"QuadExt({str(self)!r})"

    def to_json(self) -> dict[str, str]:
        return {str(d): str(c) for d, c in self._terms}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> QuadExt:
        return cls({int(d): Fraction(c) for d, c in data.items()})


def sqrt_prime_power(q: int) -> QuadExt:
    """sqrt(q) for q = p**s: p**(s/2) if s is even, else p**((s-1)/2)*sqrt(p)."""
    f = factorint(q) if q > 1 else {}
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    ((p, s),) = f.items()
    if s % 2 == 0:
        return QuadExt.rational(p ** (s // 2))
    return QuadExt({p: p ** ((s - 1) // 2)})


ZERO = QuadExt()
ONE = QuadExt.rational(1)
