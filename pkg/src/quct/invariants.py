"""Energy, spectral moments, triangle counts, hyperenergetic and Ramanujan
status, both from closed forms and from spectra."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .closed import Spectrum, closed_spectrum
from .errors import Disconnected, NonIntegerResult, UnsupportedRingClass
from .qext import ONE, ZERO, QuadExt, sqrt_prime_power
from .rings import ALL_1MOD4, ONE_3MOD4, UNSUPPORTED, LocalRing, ProductRing


def _require_supported(ring: ProductRing) -> None:
    if ring.classification == UNSUPPORTED:
        raise UnsupportedRingClass(
            f"{ring.canonical}: closed forms need odd residue orders with at most one "
            "factor of residue order 3 mod 4"
        )


def energy_closed(ring: ProductRing) -> QuadExt:
    _require_supported(ring)
    ones = ring.ones
    units = math.prod(f.order - f.m for f in ones)
    prod = ONE
    for f in ones:
        prod = prod * (sqrt_prime_power(f.q) + 1)
    s = len(ones)
    if ring.classification == ALL_1MOD4:
        return prod.scale(Fraction(units, 2**s))
    r0 = ring.r0
    # 2^(1-s) also covers the lone-R_0 case (s = 0): energy 2|R_0^x|
    return prod.scale(Fraction((r0.order - r0.m) * units * 2, 2**s))


def energy_of_spectrum(spec: Spectrum) -> QuadExt:
    return sum((abs(v) * m for v, m in spec.entries), ZERO)


def hyperenergetic_classifier(ring: ProductRing) -> bool:
    """Hyperenergetic status as stated by the published exception lists."""
    _require_supported(ring)
    qs = [f.q for f in ring.ones]
    if ring.classification == ALL_1MOD4:
        return not (qs == [5] or qs == [5, 5])
    if not qs:
        # G_{R_0} alone: energy 2|R_0^x| <= 2(|R_0| - 1)
        return False
    return not (ring.r0.q == 3 and qs == [5])


def hyperenergetic(ring: ProductRing) -> tuple[bool, bool]:
    """``(computed, classifier)``; computed is the exact test E > 2(n-1)."""
    computed = (energy_closed(ring) - 2 * (ring.order - 1)).sign() > 0
    return computed, hyperenergetic_classifier(ring)


def hyperenergetic_exception(ring: ProductRing) -> bool:
    """Rings where exact energy and the exception list are known to disagree:
    a single local factor with residue order 9."""
    return ring.classification == ALL_1MOD4 and [f.q for f in ring.factors] == [9]


def local_moment(local: LocalRing, k: int) -> int:
    m, q = local.m, local.q
    if q % 4 == 3:
        return m**k * (q - 1) * ((q - 1) ** (k - 1) + (-1) ** k)
    root = sqrt_prime_power(q)
    inner = 2 * (q - 1) ** (k - 1) + (root - 1) ** k + (-root - 1) ** k
    value = inner.scale(Fraction(m**k * (q - 1), 2 ** (k + 1)))
    as_int = value.as_integer()
    if as_int is None:
        raise NonIntegerResult(f"s_{k}({local.spec.text}) evaluated to {value}")
    return as_int


def moment_closed(ring: ProductRing, k: int) -> int:
    """k-th spectral moment as the product of the local closed forms."""
    _require_supported(ring)
    if k < 1:
        raise ValueError("k must be >= 1")
    return math.prod(local_moment(f, k) for f in ring.factors)


def triangles_closed(ring: ProductRing) -> int:
    _require_supported(ring)
    num = 1
    for f in ring.ones:
        num *= f.m * f.order * (f.order - f.m) * (f.q - 5)
    den = 6 * 8 ** len(ring.ones)
    r0 = ring.r0
    if r0 is not None:
        num *= r0.m * r0.order * (r0.order - r0.m) * (r0.q - 2)
    count, rem = divmod(num, den)
    if rem:
        raise NonIntegerResult(f"triangle count for {ring.canonical} is {Fraction(num, den)}")
    return count


def ramanujan_check(spec: Spectrum, degree: int) -> bool:
    """λ(G)^2 <= 4(r-1), decided exactly."""
    top, mult = spec.entries[0]
    if top != degree:
        raise ValueError(f"largest eigenvalue {top} differs from the degree {degree}")
    if mult != 1:
        raise Disconnected(f"degree eigenvalue has multiplicity {mult}")
    others = [v for v, _ in spec.entries if v != degree and v != -degree]
    lam = max((abs(v) for v in others), key=lambda v: v.approx()[0], default=ZERO)
    return (QuadExt.rational(4 * (degree - 1)) - lam * lam).sign() >= 0


def ramanujan_classified(ring: ProductRing) -> bool:
    """Ramanujan status from the classification statement alone."""
    _require_supported(ring)
    ones = ring.ones
    if ring.classification == ALL_1MOD4:
        if len(ones) == 1:
            return ones[0].m == 1
        return len(ones) == 2 and all(f.m == 1 and f.q == 5 for f in ones)
    r0 = ring.r0
    if not ones:
        return 4 * r0.order >= (r0.m + 2) ** 2
    return (
        len(ones) == 1
        and r0.m == 1
        and ones[0].m == 1
        and (r0.q, ones[0].q) in {(3, 5), (3, 9), (3, 13)}
    )


def degree_closed(ring: ProductRing) -> int:
    """|T_R|: the top eigenvalue of the closed spectrum."""
    return closed_spectrum(ring).entries[0][0].as_integer()


@dataclass
class InvariantReport:
    ring: str
    order: int
    classification: str
    degree: int | None = None
    energy: dict | None = None
    hyperenergetic: dict | None = None
    moments: dict = field(default_factory=dict)
    triangles: dict = field(default_factory=dict)
    ramanujan: dict | None = None
    diameter: int | str | None = None
    tensor_decomposes: bool | None = None
    spectrum: list | None = None
    numeric_spectrum: list | None = None
    matches: list = field(default_factory=list)
    sources: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)
