"""Finite commutative rings as ordered products of explicit local rings.

Three local kinds are implemented: ``Z_{p^a}``, ``GF(p^s)`` and the
truncated polynomial ring ``F_p[X]/(X^k)``.  Elements are integer indices.
Inside a local ring an element's index is the mixed-radix number formed by
its coefficient vector (constant term least significant); inside a product
ring the first factor is the most significant digit.  Index 0 is always the
additive zero.

All arithmetic methods accept Python ints or integer numpy arrays and
broadcast; scalars in give scalars out.
"""

from __future__ import annotations

import enum
import itertools
import math
import os
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from .errors import (
    IndexOutOfRange,
    NotPrimePower,
    ParseError,
    SizeCapExceeded,
)

DEFAULT_CAP = 100_000

ALL_1MOD4 = "ALL_1MOD4"
ONE_3MOD4 = "ONE_3MOD4"
UNSUPPORTED = "UNSUPPORTED"


def size_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("QUCT_CAP")
    return int(env) if env else DEFAULT_CAP


def check_cap(n: int, cap: int | None = None) -> None:
    limit = size_cap(cap)
    if n > limit:
        raise SizeCapExceeded(f"ring/graph order {n} exceeds the size cap {limit}")


class Kind(enum.Enum):
    GaloisField = "F"
    ZmodPK = "Z"
    TruncatedPoly = "T"

    @property
    def rank(self) -> int:
        return {"F": 0, "Z": 1, "T": 2}[self.value]


@dataclass(frozen=True)
class LocalRingSpec:
    kind: Kind
    p: int
    exp: int

    def __post_init__(self):
        if not isprime(self.p):
            raise NotPrimePower(f"{self.p} is not prime")
        if self.exp < 1:
            raise ParseError(f"exponent must be >= 1, got {self.exp}")

    @property
    def order(self) -> int:
        return self.p**self.exp

    @property
    def ideal_order(self) -> int:
        if self.kind is Kind.GaloisField:
            return 1
        return self.p ** (self.exp - 1)

    @property
    def residue_order(self) -> int:
        return self.order // self.ideal_order

    @property
    def text(self) -> str:
        if self.kind is Kind.ZmodPK:
            return f"Z{self.order}"
        if self.kind is Kind.GaloisField:
            return f"F{self.order}"
        return f"F{self.p}[x]/(x^{self.exp})"

    def sort_key(self) -> tuple:
        return (self.residue_order, self.order, self.kind.rank, self.p, self.exp)

    def residue_field(self) -> LocalRingSpec:
        return LocalRingSpec(Kind.GaloisField, self.p, _ilog(self.residue_order, self.p))


def _ilog(n: int, p: int) -> int:
    e = 0
    while n > 1:
        n //= p
        e += 1
    return e


def minimal_irreducible(p: int, s: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree ``s`` over F_p.

    Candidates are ordered lexicographically by their coefficient tuple
    ``(c_0, ..., c_{s-1})`` (constant term first).  Returns the full
    coefficient tuple, constant term first, including the leading 1.
    """
    for low in itertools.product(range(p), repeat=s):
        if gf_irreducible_p([1, *reversed(low)], p, ZZ):
            return (*low, 1)
    raise AssertionError("an irreducible polynomial of every degree exists")


def _scalar_out(fn):
    def wrapper(self, *args):
        scalar = all(np.ndim(a) == 0 for a in args)
        out = fn(self, *(np.asarray(a, dtype=np.int64) for a in args))
        if scalar:
            out = out.item() if isinstance(out, np.ndarray) else out
            return bool(out) if isinstance(out, (bool, np.bool_)) else int(out)
        return out

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


class LocalRing:
    """A finite local ring with on-the-fly coefficient arithmetic."""

    def __init__(self, spec: LocalRingSpec):
        self.spec = spec
        self.kind = spec.kind
        self.p = spec.p
        self.order = spec.order
        self.m = spec.ideal_order
        self.q = spec.residue_order
        if self.kind is Kind.ZmodPK:
            self.radices: tuple[int, ...] = (self.order,)
            self.modulus = None
        else:
            self.radices = (self.p,) * spec.exp
            if self.kind is Kind.GaloisField:
                self.modulus = minimal_irreducible(self.p, spec.exp)
            else:
                self.modulus = (0,) * spec.exp + (1,)
        self._weights = np.array(
            [math.prod(self.radices[:i]) for i in range(len(self.radices))], dtype=np.int64
        )
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"LocalRing({self.spec.text})"

    # digits are the additive coordinates of the element
    def digits(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self.kind is Kind.ZmodPK:
            return x[..., None]
        return (x[..., None] // self._weights) % self.p

    def undigits(self, d: np.ndarray) -> np.ndarray:
        return (np.asarray(d, dtype=np.int64) * self._weights).sum(axis=-1)

    @_scalar_out
    def add(self, x, y):
        if self.kind is Kind.ZmodPK:
            return (x + y) % self.order
        return self.undigits((self.digits(x) + self.digits(y)) % self.p)

    @_scalar_out
    def neg(self, x):
        if self.kind is Kind.ZmodPK:
            return (-x) % self.order
        return self.undigits((-self.digits(x)) % self.p)

    @_scalar_out
    def mul(self, x, y):
        if self.kind is Kind.ZmodPK:
            return (x * y) % self.order
        p, s = self.p, self.spec.exp
        dx, dy = np.broadcast_arrays(self.digits(x), self.digits(y))
        prod = np.zeros(dx.shape[:-1] + (2 * s - 1,), dtype=np.int64)
        for i in range(s):
            for j in range(s):
                prod[..., i + j] += dx[..., i] * dy[..., j]
        prod %= p
        if self.kind is Kind.GaloisField:
            f = self.modulus
            for deg in range(2 * s - 2, s - 1, -1):
                c = prod[..., deg].copy()
                for j in range(s):
                    prod[..., deg - s + j] -= c * f[j]
                prod[..., deg] = 0
                prod %= p
        return self.undigits(prod[..., :s])

    @_scalar_out
    def is_unit(self, x):
        if self.kind is Kind.GaloisField:
            return x != 0
        # Z_{p^a}: not divisible by p; F_p[X]/(X^k): nonzero constant term
        return x % self.p != 0

    @_scalar_out
    def residue(self, x):
        """Image in the residue field, as an index of ``GF(q)``."""
        if self.kind is Kind.GaloisField:
            return x
        return x % self.p

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def ideal(self) -> np.ndarray:
        e = self.elements()
        return e[~self.is_unit(e)]

    def units(self) -> np.ndarray:
        e = self.elements()
        return e[self.is_unit(e)]


@lru_cache(maxsize=None)
def build_local_ring(spec: LocalRingSpec) -> LocalRing:
    return LocalRing(spec)


class ProductRing:
    """A normalized direct product ``R_1 x ... x R_t`` of local rings.

    Factors are sorted ascending by residue order (then order, then kind).
    """

    def __init__(self, factors: Sequence[LocalRing | LocalRingSpec]):
        rings = [build_local_ring(f) if isinstance(f, LocalRingSpec) else f for f in factors]
        if not rings:
            raise ParseError("a ring needs at least one local factor")
        self.factors: tuple[LocalRing, ...] = tuple(sorted(rings, key=lambda r: r.spec.sort_key()))
        self.sizes = tuple(f.order for f in self.factors)
        self.order = math.prod(self.sizes)
        self.strides = tuple(math.prod(self.sizes[i + 1:]) for i in range(len(self.sizes)))
        self.canonical = "*".join(f.spec.text for f in self.factors)

    def __repr__(self):
        return f"ProductRing({self.canonical!r})"

    def __eq__(self, other):
        return isinstance(other, ProductRing) and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def __len__(self):
        return self.order

    # -- structure ----------------------------------------------------
    @property
    def is_local(self) -> bool:
        return len(self.factors) == 1

    @cached_property
    def classification(self) -> str:
        qs = [f.q for f in self.factors]
        if any(q % 2 == 0 for q in qs):
            return UNSUPPORTED
        bad = sum(1 for q in qs if q % 4 == 3)
        if bad == 0:
            return ALL_1MOD4
        if bad == 1:
            return ONE_3MOD4
        return UNSUPPORTED

    @property
    def r0(self) -> LocalRing | None:
        """The unique factor with residue order 3 mod 4, if there is exactly one."""
        if self.classification != ONE_3MOD4:
            return None
        return next(f for f in self.factors if f.q % 4 == 3)

    @property
    def ones(self) -> tuple[LocalRing, ...]:
        """Factors with residue order 1 mod 4, in normalized order."""
        return tuple(f for f in self.factors if f.q % 4 == 1)

    @property
    def s(self) -> int:
        return len(self.ones)

    @property
    def unit_count(self) -> int:
        return math.prod(f.order - f.m for f in self.factors)

    # -- indexing -----------------------------------------------------
    def components(self, x) -> list[np.ndarray]:
        x = np.asarray(x, dtype=np.int64)
        return [(x // st) % n for st, n in zip(self.strides, self.sizes)]

    def combine(self, comps: Sequence) -> np.ndarray:
        out = np.zeros(np.broadcast_shapes(*(np.shape(c) for c in comps)), dtype=np.int64)
        for st, c in zip(self.strides, comps):
            out = out + np.asarray(c, dtype=np.int64) * st
        return out

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return int(sum(self.strides))

    def _check(self, *xs):
        for x in xs:
            a = np.asarray(x)
            if a.size and (a.min() < 0 or a.max() >= self.order):
                raise IndexOutOfRange(f"element index out of range for {self.canonical}")

    def _lift(self, fn_name, *xs):
        self._check(*xs)
        scalar = all(np.ndim(x) == 0 for x in xs)
        parts = [self.components(x) for x in xs]
        out = self.combine(
            [getattr(f, fn_name)(*(pp[i] for pp in parts)) for i, f in enumerate(self.factors)]
        )
        return int(out) if scalar else out

    def add(self, x, y):
        return self._lift("add", x, y)

    def neg(self, x):
        return self._lift("neg", x)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        return self._lift("mul", x, y)

    def is_unit(self, x):
        self._check(x)
        comps = self.components(x)
        mask = np.ones(np.shape(x), dtype=bool)
        for f, c in zip(self.factors, comps):
            mask &= np.asarray(f.is_unit(c), dtype=bool)
        return bool(mask) if np.ndim(x) == 0 else mask


def element_arithmetic(ring: ProductRing, op: str, x, y=None):
    if op == "add":
        return ring.add(x, y)
    if op == "neg":
        return ring.neg(x)
    if op == "mul":
        return ring.mul(x, y)
    raise ValueError(f"unknown operation {op!r}")


def units(ring: ProductRing) -> np.ndarray:
    """Sorted indices of the units of ``ring``."""
    e = ring.elements()
    return e[ring.is_unit(e)]


def residue_profile(ring: ProductRing) -> tuple[list[tuple[int, int, int, int]], str]:
    rows = [(f.order, f.m, f.q, f.q % 4) for f in ring.factors]
    return rows, ring.classification


@dataclass(frozen=True)
class AdditiveCoordinates:
    """Coordinates of ``(R, +)`` as a product of cyclic groups."""

    ring: ProductRing
    orders: tuple[int, ...]

    def encode(self, x) -> np.ndarray:
        comps = self.ring.components(x)
        return np.concatenate(
            [f.digits(c) for f, c in zip(self.ring.factors, comps)], axis=-1
        )

    def decode(self, vec) -> np.ndarray | int:
        vec = np.asarray(vec, dtype=np.int64)
        comps, j = [], 0
        for f in self.ring.factors:
            r = len(f.radices)
            comps.append(f.undigits(vec[..., j:j + r]))
            j += r
        out = self.ring.combine(comps)
        return int(out) if out.ndim == 0 else out


def additive_coordinates(ring: ProductRing) -> AdditiveCoordinates:
    orders = tuple(d for f in ring.factors for d in f.radices)
    return AdditiveCoordinates(ring, orders)


# -- parsing --------------------------------------------------------------

_TRUNC = re.compile(r"F(\d+)\[x\]/\(x\^(\d+)\)")
_SIMPLE = re.compile(r"([ZF])(\d+)")


def _prime_power(n: int, token: str) -> tuple[int, int]:
    f = factorint(n) if n > 1 else {}
    if len(f) != 1:
        raise NotPrimePower(f"{token}: {n} is not a prime power")
    return next(iter(f.items()))


def parse_local_tokens(token: str) -> list[LocalRingSpec]:
    m = _TRUNC.fullmatch(token)
    if m:
        p, k = int(m.group(1)), int(m.group(2))
        if not isprime(p):
            raise NotPrimePower(f"{token}: base of a truncated polynomial ring must be prime")
        if k < 1:
            raise ParseError(f"{token}: truncation degree must be >= 1")
        return [LocalRingSpec(Kind.TruncatedPoly, p, k)]
    m = _SIMPLE.fullmatch(token)
    if not m:
        raise ParseError(f"cannot parse ring factor {token!r}")
    letter, n = m.group(1), int(m.group(2))
    if letter == "F":
        p, s = _prime_power(n, token)
        return [LocalRingSpec(Kind.GaloisField, p, s)]
    if n < 2:
        raise ParseError(f"{token}: Z_n needs n >= 2 (Z1 is the zero ring)")
    return [LocalRingSpec(Kind.ZmodPK, p, a) for p, a in factorint(n).items()]


def parse_ring_spec(text: str) -> ProductRing:
    """Parse ``"Z45"``, ``"F9*F5"``, ``"F5[x]/(x^2) * Z7"`` and friends."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty ring spec")
    specs: list[LocalRingSpec] = []
    for token in text.split("*"):
        token = token.strip()
        if not token:
            raise ParseError(f"empty factor in {text!r}")
        specs.extend(parse_local_tokens(token))
    return ProductRing(specs)


def ring(text: str) -> ProductRing:
    return parse_ring_spec(text)


def local_specs_up_to(max_order: int) -> list[LocalRingSpec]:
    """Every implemented local ring of order at most ``max_order``.

    Order-p rings appear only in field form; ``Z_{p^e}`` and
    ``F_p[X]/(X^e)`` are listed for ``e >= 2`` where they differ from
    ``GF(p^e)`` and from each other.
    """
    out = []
    for p in range(2, max_order + 1):
        if not isprime(p):
            continue
        e = 1
        while p**e <= max_order:
            out.append(LocalRingSpec(Kind.GaloisField, p, e))
            if e >= 2:
                out.append(LocalRingSpec(Kind.ZmodPK, p, e))
                out.append(LocalRingSpec(Kind.TruncatedPoly, p, e))
            e += 1
    return sorted(out, key=LocalRingSpec.sort_key)


def enumerate_rings(max_order: int, supported_only: bool = True) -> list[ProductRing]:
    """All products of implemented local rings with order at most ``max_order``,
    one per canonical form, sorted by (order, canonical string)."""
    locals_ = local_specs_up_to(max_order)
    found: dict[str, ProductRing] = {}

    def extend(start: int, chosen: list[LocalRingSpec], order: int):
        if chosen:
            r = ProductRing(chosen)
            if not supported_only or r.classification != UNSUPPORTED:
                found.setdefault(r.canonical, r)
        for i in range(start, len(locals_)):
            spec = locals_[i]
            if order * spec.order > max_order:
                continue
            extend(i, chosen + [spec], order * spec.order)

    extend(0, [], 1)
    return sorted(found.values(), key=lambda r: (r.order, r.canonical))
