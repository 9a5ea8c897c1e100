"""Spectrum oracles that share no code with the closed forms.

* :func:`character_spectrum` evaluates the additive characters of the ring
  on the connection set (eigenvalues of an abelian Cayley graph).
* :func:`jacobi_spectrum` diagonalizes the adjacency matrix with cyclic
  Jacobi rotations.
* :func:`walk_moments` counts closed walks exactly with integer matrix
  products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CardinalityMismatch, NoConvergence
from .graphs import Graph, connection_set
from .rings import ProductRing, additive_coordinates, check_cap

try:
    from numba import njit
except ImportError:  # pragma: no cover - slow but correct without the JIT
    def njit(*args, **kwargs):
        return lambda fn: fn

CHARACTER = "CHARACTER"
JACOBI = "JACOBI"

MAX_SWEEPS = 50


@dataclass(frozen=True)
class NumericSpectrum:
    values: np.ndarray  # ascending
    method: str

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class MatchReport:
    method: str
    max_dev: float
    tol: float
    passed: bool

    def to_json(self) -> dict:
        return {"method": self.method, "max_dev": self.max_dev, "tol": self.tol, "pass": self.passed}


def character_spectrum(ring: ProductRing, cap: int | None = None, *, chunk: int = 1 << 22) -> NumericSpectrum:
    check_cap(ring.order, cap)
    coords = additive_coordinates(ring)
    orders = np.array(coords.orders, dtype=np.int64)
    lcm = math.lcm(*coords.orders)
    # t_j * (L / d_j) so that each phase is an integer numerator over L
    t = coords.encode(connection_set(ring)) * (lcm // orders)
    chars = coords.encode(ring.elements())
    rows_per_chunk = max(1, chunk // max(1, len(t)))
    out = np.empty(ring.order)
    for start in range(0, ring.order, rows_per_chunk):
        a = chars[start:start + rows_per_chunk]
        num = (a @ t.T) % lcm
        angle = (2.0 * np.pi / lcm) * num
        re = np.cos(angle).sum(axis=1)
        im = np.sin(angle).sum(axis=1)
        if np.abs(im).max(initial=0.0) >= 1e-9:
            raise ArithmeticError("character sum has a non-negligible imaginary part")
        out[start:start + rows_per_chunk] = re
    return NumericSpectrum(np.sort(out), CHARACTER)


@njit(cache=True)
def _jacobi_sweep(a, skip):
    """One row-cyclic sweep of Jacobi rotations over the upper triangle.

    Rotations whose pivot is at most ``skip`` in magnitude are skipped.
    Only rows ``p`` and ``q`` are rotated; columns are restored by symmetry.
    """
    n = a.shape[0]
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            if abs(apq) <= skip:
                continue
            app = a[p, p]
            aqq = a[q, q]
            theta = (aqq - app) / (2.0 * apq)
            if abs(theta) > 1e150:
                t = 0.5 / theta
            else:
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            for k in range(n):
                akp = a[p, k]
                akq = a[q, k]
                a[p, k] = c * akp - s * akq
                a[q, k] = s * akp + c * akq
            for k in range(n):
                a[k, p] = a[p, k]
                a[k, q] = a[q, k]
            a[p, p] = app - t * apq
            a[q, q] = aqq + t * apq
            a[p, q] = 0.0
            a[q, p] = 0.0


def jacobi_eigenvalues(a: np.ndarray, tol: float | None = None, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps repeat until the off-diagonal Frobenius norm is below ``tol``
    (default ``1e-10 * n``).  Pivots below ``tol / (2n)`` are skipped; once
    every pivot is that small the norm test is already met.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if not np.array_equal(a, a.T):
        raise ValueError("Jacobi needs a symmetric matrix")
    if tol is None:
        tol = 1e-10 * max(n, 1)
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        if math.sqrt(float((a[off_mask] ** 2).sum())) < tol:
            return np.sort(a.diagonal().copy())
        _jacobi_sweep(a, tol / (2 * n))
    if math.sqrt(float((a[off_mask] ** 2).sum())) < tol:
        return np.sort(a.diagonal().copy())
    raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")


def jacobi_spectrum(g: Graph, cap: int | None = None) -> NumericSpectrum:
    check_cap(g.n, cap)
    return NumericSpectrum(jacobi_eigenvalues(g.adjacency(dtype=float)), JACOBI)


def walk_moments(g: Graph, k_max: int) -> list[int]:
    """``[s_0, ..., s_k_max]`` with ``s_k = trace(A^k)`` as exact integers."""
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    deg = max(g.degrees, default=0)
    # every entry of A^k is at most deg^(k-1); int64 suffices below 2^62
    if g.n * max(deg, 1) ** max(k_max, 1) < 2**62:
        a = g.adjacency(dtype=np.int64)
    else:
        a = g.adjacency(dtype=np.int64).astype(object)
    moments = [g.n]
    power = None
    for _ in range(k_max):
        power = a.copy() if power is None else power @ a
        moments.append(int(np.trace(power)))
    return moments


def match_spectra(closed, numeric: NumericSpectrum, tol: float) -> MatchReport:
    """Pair the sorted closed-form and numeric eigenvalues positionally."""
    expected = np.array(closed.approx_values())
    if len(expected) != len(numeric.values):
        raise CardinalityMismatch(
            f"closed spectrum has {len(expected)} eigenvalues, numeric has {len(numeric.values)}"
        )
    dev = float(np.abs(expected - np.sort(numeric.values)).max(initial=0.0))
    return MatchReport(numeric.method, dev, tol, dev < tol)
