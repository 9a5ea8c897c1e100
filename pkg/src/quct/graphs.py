"""Quadratic unitary Cayley graphs, tensor products and combinatorial oracles.

Adjacency rows are Python ints used as bitsets: bit ``j`` of ``rows[i]`` is
set iff ``i ~ j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import EvenCharacteristicUnsupported, LoopsPresent
from .rings import LocalRing, ProductRing, check_cap, units

INFINITE = math.inf


def _iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _rows_from_bool(mat: np.ndarray) -> list[int]:
    packed = np.packbits(mat.astype(bool), axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...]
    has_loops: bool = False

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError("row count does not match vertex count")

    @classmethod
    def from_adjacency(cls, mat) -> Graph:
        mat = np.asarray(mat, dtype=bool)
        if mat.shape[0] != mat.shape[1] or not np.array_equal(mat, mat.T):
            raise ValueError("adjacency matrix must be square and symmetric")
        return cls(mat.shape[0], tuple(_rows_from_bool(mat)), bool(mat.diagonal().any()))

    @property
    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    @property
    def degree(self) -> int | None:
        """Common degree if the graph is regular (a loop counts once)."""
        degs = set(self.degrees)
        return degs.pop() if len(degs) == 1 else None

    def neighbors(self, v: int) -> list[int]:
        return list(_iter_bits(self.rows[v]))

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def adjacency(self, dtype=np.int64) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        nbytes = (self.n + 7) // 8
        for i, r in enumerate(self.rows):
            bits = np.unpackbits(
                np.frombuffer(r.to_bytes(nbytes, "little"), dtype=np.uint8), bitorder="little"
            )
            a[i] = bits[: self.n]
        return a

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _iter_bits(self.rows[u] >> u << u)]

    def edge_list(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges())

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        lines += [f"  {v};" for v in range(self.n)]
        lines += [f"  {u} -- {v};" for u, v in self.edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def quadratic_unit_squares(ring: ProductRing) -> np.ndarray:
    """Q_R: the squares of the units, as sorted element indices."""
    u = units(ring)
    return np.unique(ring.mul(u, u))


def connection_set(ring: ProductRing) -> np.ndarray:
    """T_R = Q_R | -Q_R, as sorted element indices."""
    q = quadratic_unit_squares(ring)
    return np.union1d(q, ring.neg(q))


def cayley_graph(ring: ProductRing, cap: int | None = None, *, chunk: int = 2048) -> Graph:
    check_cap(ring.order, cap)
    t = connection_set(ring)
    n = ring.order
    rows: list[int] = []
    for start in range(0, n, chunk):
        x = np.arange(start, min(start + chunk, n), dtype=np.int64)
        nbrs = ring.add(x[:, None], t[None, :])
        block = np.zeros((len(x), n), dtype=bool)
        block[np.arange(len(x))[:, None], nbrs] = True
        rows.extend(_rows_from_bool(block))
    return Graph(n, tuple(rows), False)


def minus_one_is_square(local: LocalRing) -> bool:
    if local.q % 2 == 0:
        raise EvenCharacteristicUnsupported(f"{local.spec.text} has even residue order")
    return local.q % 4 == 1


def tensor_product(g: Graph, h: Graph, cap: int | None = None) -> Graph:
    """G (x) H with vertex (u, v) at index ``u * h.n + v``."""
    n = g.n * h.n
    check_cap(n, cap)
    rows = []
    for u in range(g.n):
        nbrs_u = list(_iter_bits(g.rows[u]))
        for v in range(h.n):
            hv = h.rows[v]
            rows.append(sum(hv << (x * h.n) for x in nbrs_u))
    return Graph(n, tuple(rows), g.has_loops and h.has_loops)


def complete_pseudograph(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete pseudograph needs n >= 1")
    full = (1 << n) - 1
    return Graph(n, (full,) * n, True)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full ^ (1 << i) for i in range(n)), False)


def tensor_decomposes(ring: ProductRing) -> bool:
    """At most one local factor lacks a square root of -1."""
    return sum(not minus_one_is_square(f) for f in ring.factors) <= 1


def factor_tensor_graph(ring: ProductRing, cap: int | None = None) -> Graph:
    """Iterated tensor product of the factor Cayley graphs, in factor order."""
    check_cap(ring.order, cap)
    graphs = [cayley_graph(ProductRing([f]), cap) for f in ring.factors]
    return reduce(lambda a, b: tensor_product(a, b, cap), graphs)


def local_tensor_model(local: LocalRing, cap: int | None = None) -> Graph:
    """G_{R/M} (x) K-ring_m for a local ring R with maximal ideal of order m."""
    residue = ProductRing([local.spec.residue_field()])
    return tensor_product(cayley_graph(residue, cap), complete_pseudograph(local.m), cap)


def triangle_count_oracle(g: Graph) -> int:
    if g.has_loops:
        raise LoopsPresent("triangle counting needs a loopless graph")
    rows = g.rows
    total = 0
    for u in range(g.n):
        ru = rows[u]
        for v in _iter_bits(ru >> (u + 1) << (u + 1)):
            total += (ru & rows[v]).bit_count()
    assert total % 3 == 0
    return total // 3


def diameter_bfs(g: Graph, sources=None) -> int | float:
    """Exact diameter by breadth-first search from every source.

    ``sources`` may restrict the search (e.g. to one vertex of a
    vertex-transitive graph); the default is every vertex.
    """
    if g.n == 0:
        return 0
    full = (1 << g.n) - 1
    best = 0
    for s in range(g.n) if sources is None else sources:
        seen = frontier = 1 << s
        depth = 0
        while seen != full:
            nxt = 0
            for v in _iter_bits(frontier):
                nxt |= g.rows[v]
            frontier = nxt & ~seen
            if not frontier:
                return INFINITE
            seen |= frontier
            depth += 1
        best = max(best, depth)
    return best
