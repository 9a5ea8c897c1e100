"""Closed-form spectra of quadratic unitary Cayley graphs, computed exactly."""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    EvenCharacteristicUnsupported,
    OverlappingSets,
    UnsupportedRingClass,
    WrongClassification,
)
from .qext import ONE, ZERO, QuadExt, sqrt_prime_power
from .rings import ALL_1MOD4, ONE_3MOD4, UNSUPPORTED, LocalRing, ProductRing


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue multiset as ``(value, multiplicity)`` pairs, largest first."""

    entries: tuple[tuple[QuadExt, int], ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[QuadExt, int]]) -> Spectrum:
        acc: dict[QuadExt, int] = defaultdict(int)
        for value, mult in pairs:
            if mult:
                acc[QuadExt.coerce(value)] += mult
        ordered = sorted(acc.items(), key=lambda e: e[0].approx()[0], reverse=True)
        return cls(tuple((v, m) for v, m in ordered if m))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def size(self) -> int:
        return sum(m for _, m in self.entries)

    def multiplicity(self, value) -> int:
        value = QuadExt.coerce(value)
        return next((m for v, m in self.entries if v == value), 0)

    def as_dict(self) -> dict[QuadExt, int]:
        return {v: m for v, m in self.entries}

    def moment(self, k: int) -> QuadExt:
        return sum((v**k * m for v, m in self.entries), ZERO)

    def approx_values(self) -> list[float]:
        """Every eigenvalue as a float, ascending, repeated by multiplicity."""
        out = []
        for v, m in self.entries:
            out.extend([v.approx()[0]] * m)
        return sorted(out)

    def to_json(self) -> list[dict]:
        return [
            {"value": v.to_json(), "approx": v.approx()[0], "multiplicity": m}
            for v, m in self.entries
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> Spectrum:
        return cls.from_pairs((QuadExt.from_json(e["value"]), int(e["multiplicity"])) for e in data)


def _require_odd(local: LocalRing) -> None:
    if local.q % 2 == 0:
        raise EvenCharacteristicUnsupported(
            f"{local.spec.text}: closed forms need an odd residue field order"
        )


def local_spectrum(local: LocalRing) -> Spectrum:
    _require_odd(local)
    n, m, q = local.order, local.m, local.q
    if q % 4 == 1:
        root = sqrt_prime_power(q)
        half = Fraction(m, 2)
        return Spectrum.from_pairs([
            (QuadExt.rational(Fraction(n - m, 2)), 1),
            ((root - 1).scale(half), (q - 1) // 2),
            ((-root - 1).scale(half), (q - 1) // 2),
            (ZERO, n - q),
        ])
    return Spectrum.from_pairs([
        (QuadExt.rational(n - m), 1),
        (QuadExt.rational(-m), q - 1),
        (ZERO, n - q),
    ])


def _ones_factors(ring_or_factors) -> tuple[LocalRing, ...]:
    if isinstance(ring_or_factors, ProductRing):
        if ring_or_factors.classification != ALL_1MOD4:
            raise WrongClassification(
                f"{ring_or_factors.canonical} is {ring_or_factors.classification}, need ALL_1MOD4"
            )
        return ring_or_factors.factors
    factors = tuple(ring_or_factors)
    if any(f.q % 4 != 1 for f in factors):
        raise WrongClassification("every factor needs residue order 1 mod 4")
    return factors


def lambda_ab(ring_or_factors, a: Iterable[int], b: Iterable[int]) -> QuadExt:
    """The eigenvalue indexed by disjoint factor-index sets ``a`` and ``b``.

    Indices are 1-based positions in the normalized factor list.  Equals
    ``(-1)^|b| |R^x| / (2^s prod_{i in a}(sqrt q_i + 1) prod_{j in b}(sqrt q_j - 1))``
    with each denominator rationalized by its conjugate.
    """
    factors = _ones_factors(ring_or_factors)
    a, b = frozenset(a), frozenset(b)
    if a & b:
        raise OverlappingSets(f"index sets overlap: {sorted(a & b)}")
    if not (a | b) <= set(range(1, len(factors) + 1)):
        raise IndexError("factor index out of range")
    unit_count = math.prod(f.order - f.m for f in factors)
    value = QuadExt.rational(Fraction((-1) ** len(b) * unit_count, 2 ** len(factors)))
    for i in sorted(a):
        q = factors[i - 1].q
        value = value * (sqrt_prime_power(q) - 1).scale(Fraction(1, q - 1))
    for j in sorted(b):
        q = factors[j - 1].q
        value = value * (sqrt_prime_power(q) + 1).scale(Fraction(1, q - 1))
    return value


def _disjoint_pairs(s: int):
    # each index 1..s goes to A, B, or neither
    for labels in itertools.product((0, 1, 2), repeat=s):
        yield (
            frozenset(i for i, t in enumerate(labels, 1) if t == 1),
            frozenset(i for i, t in enumerate(labels, 1) if t == 2),
        )


def _pair_multiplicity(factors: Sequence[LocalRing], a, b) -> int:
    prod = math.prod(factors[k - 1].q - 1 for k in a | b)
    mult, rem = divmod(prod, 2 ** len(a | b))
    assert rem == 0
    return mult


def zero_multiplicity_by_sum(factors: Sequence[LocalRing], n: int, r0_q: int = 1) -> int:
    """The zero multiplicity as the explicit double sum over disjoint pairs."""
    return n - sum(r0_q * _pair_multiplicity(factors, a, b) for a, b in _disjoint_pairs(len(factors)))


def spectrum_all_1mod4(ring: ProductRing) -> Spectrum:
    if ring.classification != ALL_1MOD4:
        raise WrongClassification(f"{ring.canonical} is {ring.classification}, need ALL_1MOD4")
    factors = ring.factors
    pairs = [
        (lambda_ab(factors, a, b), _pair_multiplicity(factors, a, b))
        for a, b in _disjoint_pairs(len(factors))
    ]
    zero = ring.order - math.prod(f.q for f in factors)
    return Spectrum.from_pairs(pairs + [(ZERO, zero)])


def spectrum_one_3mod4(ring: ProductRing) -> Spectrum:
    if ring.classification != ONE_3MOD4:
        raise WrongClassification(f"{ring.canonical} is {ring.classification}, need ONE_3MOD4")
    r0 = ring.r0
    rest = ring.ones
    if not rest:
        return local_spectrum(r0)
    r0_units = r0.order - r0.m
    q0 = r0.q
    pairs = []
    for a, b in _disjoint_pairs(len(rest)):
        lam = lambda_ab(rest, a, b)
        mult = _pair_multiplicity(rest, a, b)
        pairs.append((lam.scale(r0_units), mult))
        pairs.append((lam.scale(Fraction(-r0_units, q0 - 1)), (q0 - 1) * mult))
    zero = ring.order - q0 * math.prod(f.q for f in rest)
    return Spectrum.from_pairs(pairs + [(ZERO, zero)])


def closed_spectrum(ring: ProductRing) -> Spectrum:
    cls = ring.classification
    if cls == UNSUPPORTED:
        raise UnsupportedRingClass(
            f"{ring.canonical}: no closed form when a residue order is even or two or more "
            "factors have residue order 3 mod 4; the spectrum is open in this case"
        )
    if ring.is_local:
        return local_spectrum(ring.factors[0])
    if cls == ALL_1MOD4:
        return spectrum_all_1mod4(ring)
    return spectrum_one_3mod4(ring)


def tensor_spectrum(*spectra: Spectrum) -> Spectrum:
    """Spectrum of a tensor product: all products of factor eigenvalues."""
    result = [(ONE, 1)]
    for spec in spectra:
        result = [(v * w, m * k) for v, m in result for w, k in spec.entries]
    return Spectrum.from_pairs(result)
