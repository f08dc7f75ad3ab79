import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from catalog import SEED, random_graphs
from kyform import graphs
from kyform.algebra import ValidationError, center, derived, is_two_step
from kyform.graphs import (
    SimpleGraph,
    build_complex,
    build_real,
    canonical_ky,
    connected_components,
    heisenberg_complex,
    satisfies_graph_property,
)
from kyform.ky import commuting_skew_space, is_ky, ky_space_2step
from kyform.scalars import APPROX


@pytest.mark.parametrize(
    "n, edges",
    [(3, [(1, 1)]), (3, [(1, 4)]), (3, [(1, 2), (2, 1)]), (0, [])],
)
def test_invalid_graphs(n, edges):
    with pytest.raises(ValidationError):
        SimpleGraph(n, edges)


def test_edges_sorted_lexicographically():
    G = SimpleGraph(4, [(3, 4), (2, 1), (4, 1)])
    assert G.edges == ((1, 2), (1, 4), (3, 4))
    assert G.neighbours(1) == [2, 4]


def test_components_and_isolated():
    G = graphs.disjoint_union(graphs.complete(2), graphs.add_isolated(graphs.path(3)))
    assert connected_components(G) == [[1, 2], [3, 4, 5], [6]]
    assert G.isolated_vertices() == [6]
    assert not G.is_connected()


def test_named_families():
    assert graphs.path(4).m == 3
    assert graphs.cycle(5).m == 5
    assert graphs.star(3).n_vertices == 4 and graphs.star(3).m == 3
    assert graphs.complete(5).m == 10


def test_real_graph_algebra():
    A = build_real(graphs.path(3))
    L = A.L
    assert L.dim == 5
    assert [L.label(i) for i in range(5)] == ["e1", "e2", "e3", "z1", "z2"]
    e = L.basis_vector
    assert (L.bracket(e(0), e(1)) == e(3)).all()
    assert (L.bracket(e(1), e(2)) == e(4)).all()
    assert all(x == 0 for x in L.bracket(e(0), e(2)))
    assert is_two_step(L)


def test_complex_graph_algebra_table():
    A = build_complex(graphs.complete(2))
    L = A.L
    e1, f1, e2, f2, z, w = (L.basis_vector(i) for i in range(6))
    assert (L.bracket(e1, e2) == z).all()
    assert (L.bracket(e1, f2) == w).all()
    assert (L.bracket(f1, e2) == w).all()
    assert (L.bracket(f1, f2) == -z).all()
    assert list(L.labels) == ["e1", "f1", "e2", "f2", "z1", "w1"]


def test_heisenberg_complex_one_is_k2():
    H = heisenberg_complex(1).L
    K = build_complex(graphs.complete(2)).L
    assert H.brackets.keys() == K.brackets.keys()
    assert all((H.brackets[k] == K.brackets[k]).all() for k in H.brackets)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_heisenberg_complex_structure(n):
    L = heisenberg_complex(n).L
    assert L.dim == 4 * n + 2
    assert center(L).rank == 2 and derived(L).rank == 2


def test_graph_property():
    A = build_complex(graphs.cycle(4))
    assert satisfies_graph_property(A.L, A.vertex_index.values())
    H = heisenberg_complex(2)
    assert not satisfies_graph_property(H.L, H.vertex_index.values())
    assert satisfies_graph_property(heisenberg_complex(1).L, heisenberg_complex(1).vertex_index.values())


def test_edgeless_graph_rejected():
    with pytest.raises(ValidationError):
        build_complex(SimpleGraph(3, []))


def test_canonical_ky_needs_complexification():
    with pytest.raises(ValidationError):
        canonical_ky(build_real(graphs.path(3)))


def test_canonical_ky_with_isolated_vertex():
    A = build_complex(graphs.add_isolated(graphs.star(3), 1))
    T = canonical_ky(A)
    assert is_ky(A.L, None, T)
    idx = A.vertex_index[5]
    assert T[idx + 1, idx] == 1


def test_disconnected_graph_has_more_ky_tensors():
    G = graphs.disjoint_union(graphs.complete(2), graphs.path(3))
    A = build_complex(G)
    assert ky_space_2step(A.L).dim == 2
    assert is_ky(A.L, None, canonical_ky(A))


def test_random_graphs_are_seeded_and_connected():
    a = random_graphs(5)
    b = random_graphs(5)
    assert [G.edges for G in a] == [G.edges for G in b]
    assert all(G.is_connected() for G in a)


@given(st.integers(2, 6), st.integers(0, 10_000))
def test_random_connected_graphs_have_one_ky_tensor(n, seed):
    G = graphs.random_connected(n, random.Random(seed ^ SEED), 0.4)
    A = build_complex(G)
    space = ky_space_2step(A.L)
    assert space.dim == 1
    assert (space.basis[0] == canonical_ky(A)).all()
    assert commuting_skew_space(A.L, 1).dim == 1


def test_approx_graph_algebra():
    A = build_complex(graphs.cycle(3), APPROX)
    assert A.J.dtype == float
    assert ky_space_2step(A.L).dim == 1
