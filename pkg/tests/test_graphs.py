import math

import numpy as np
import pytest

from quct.errors import EvenCharacteristicUnsupported, LoopsPresent
from quct.graphs import (
    INFINITE,
    Graph,
    cayley_graph,
    complete_graph,
    complete_pseudograph,
    connection_set,
    diameter_bfs,
    factor_tensor_graph,
    local_tensor_model,
    minus_one_is_square,
    quadratic_unit_squares,
    tensor_decomposes,
    tensor_product,
    triangle_count_oracle,
)
from quct.rings import enumerate_rings, ring, units


def cycle(n):
    a = np.zeros((n, n), dtype=int)
    for i in range(n):
        a[i, (i + 1) % n] = a[(i + 1) % n, i] = 1
    return Graph.from_adjacency(a)


def test_pinned_connection_sets():
    assert quadratic_unit_squares(ring("Z5")).tolist() == [1, 4]
    assert quadratic_unit_squares(ring("Z9")).tolist() == [1, 4, 7]
    assert len(quadratic_unit_squares(ring("F13"))) == 6
    assert connection_set(ring("Z5")).tolist() == [1, 4]
    assert connection_set(ring("Z3")).tolist() == [1, 2]
    assert len(connection_set(ring("F3*F5"))) == 4


def test_squaring_is_two_to_one_on_units():
    for r in enumerate_rings(200):
        u = units(r)
        sq = r.mul(u, u)
        _, counts = np.unique(sq, return_counts=True)
        # each square of a unit has the same number of roots; for odd q that is 2^(number of factors)
        assert len(set(counts.tolist())) == 1
        assert counts[0] == 2 ** len(r.factors)


def test_minus_one_is_square_matches_exhaustive_search():
    for r in enumerate_rings(300):
        if len(r.factors) != 1:
            continue
        local = r.factors[0]
        q = set(quadratic_unit_squares(r).tolist())
        assert minus_one_is_square(local) == (int(r.neg(r.one)) in q)
    with pytest.raises(EvenCharacteristicUnsupported):
        minus_one_is_square(ring("F4").factors[0])


def test_small_graphs():
    g = cayley_graph(ring("Z5"))
    assert g.rows == cycle(5).rows
    z9 = cayley_graph(ring("Z9"))
    assert z9.degree == 6
    # K_{3,3,3}: adjacent iff the residues mod 3 differ
    assert all(z9.adjacent(u, v) == (u % 3 != v % 3) for u in range(9) for v in range(9))
    assert cayley_graph(ring("F3*F5")).degree == 4


def test_paley_graphs_are_strongly_regular():
    for q in [5, 9, 13, 17, 25, 29, 37, 41, 49]:
        g = cayley_graph(ring(f"F{q}"))
        a = g.adjacency()
        k, lam, mu = (q - 1) // 2, (q - 5) // 4, (q - 1) // 4
        a2 = a @ a
        off = ~np.eye(q, dtype=bool)
        assert g.degree == k
        assert np.all(a2[(a == 1) & off] == lam)
        assert np.all(a2[(a == 0) & off] == mu)


def test_pseudograph_and_complete():
    assert complete_pseudograph(1).rows == (1,) and complete_pseudograph(1).has_loops
    assert np.array_equal(complete_pseudograph(2).adjacency(), np.ones((2, 2), dtype=int))
    assert sorted(np.linalg.eigvalsh(complete_pseudograph(3).adjacency(float)).round(9)) == [0, 0, 3]
    with pytest.raises(ValueError):
        complete_pseudograph(0)


def test_tensor_product_matches_kronecker():
    g, h = cycle(5), complete_graph(3)
    t = tensor_product(h, g)
    assert np.array_equal(t.adjacency(), np.kron(h.adjacency(), g.adjacency()))
    assert tensor_product(g, complete_pseudograph(1)).rows == g.rows


def test_local_model_for_z9():
    model = local_tensor_model(ring("Z9").factors[0])
    ev = np.linalg.eigvalsh(model.adjacency(float))
    ref = np.linalg.eigvalsh(cayley_graph(ring("Z9")).adjacency(float))
    assert np.allclose(ev, ref)


def test_tensor_criterion_pins():
    f3f5 = ring("F3*F5")
    assert tensor_decomposes(ring("F5*F13")) and tensor_decomposes(f3f5)
    assert factor_tensor_graph(f3f5).rows == cayley_graph(f3f5).rows
    f3f7 = ring("F3*F7")
    assert not tensor_decomposes(f3f7)
    assert factor_tensor_graph(f3f7).rows != cayley_graph(f3f7).rows


def test_triangles_and_diameter():
    assert triangle_count_oracle(cayley_graph(ring("Z3"))) == 1
    assert triangle_count_oracle(cayley_graph(ring("Z5"))) == 0
    assert triangle_count_oracle(cayley_graph(ring("Z9"))) == 27
    with pytest.raises(LoopsPresent):
        triangle_count_oracle(complete_pseudograph(3))
    assert diameter_bfs(complete_graph(3)) == 1
    assert diameter_bfs(cycle(5)) == 2
    assert diameter_bfs(cayley_graph(ring("Z9"))) == 2
    two = Graph.from_adjacency(np.zeros((2, 2), dtype=int))
    assert diameter_bfs(two) == INFINITE


def test_triangles_against_trace():
    for r in enumerate_rings(120):
        g = cayley_graph(r)
        a = g.adjacency()
        assert triangle_count_oracle(g) == int(np.trace(a @ a @ a)) // 6


def test_edge_list_and_dot():
    g = cycle(3)
    assert g.edge_list() == "0 1\n0 2\n1 2\n"
    assert "0 -- 1;" in g.to_dot()
    assert math.isinf(INFINITE)
