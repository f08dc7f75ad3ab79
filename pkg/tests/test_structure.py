from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catalog import block_diag, weighted_k2
from kyform import algebra, graphs
from kyform.algebra import Subspace, ValidationError, center, zav_split
from kyform.connection import is_parallel, levi_civita
from kyform.ky import is_ky, ky_space_2step
from kyform.scalars import APPROX, Surd, all_zero, identity, zeros
from kyform.structure import (
    canonical_form,
    eigen_blocks,
    extract_complex_structure,
    image,
    is_complex_structure,
    is_ideal,
    is_nearly_kahler,
    projector,
    restrict_endo,
    split_ker_im,
)

NK2 = graphs.build_complex(graphs.complete(2))
GEN = graphs.canonical_ky(NK2)


def _product(T1, T2):
    L = algebra.direct_sum(NK2.L, NK2.L)
    return L, block_diag(T1, T2)


# -- ker / Im -----------------------------------------------------------------

def test_split_zero_tensor():
    s = split_ker_im(NK2.L, zeros((6, 6)))
    assert s.n1.rank == 6 and s.n2.rank == 0


def test_split_invertible():
    s = split_ker_im(NK2.L, GEN)
    assert s.n1.rank == 0 and s.n2.rank == 6
    assert all(s.ideal_certificates.values())


def test_split_with_abelian_factor():
    L = algebra.direct_sum(NK2.L, algebra.abelian(2))
    T = block_diag(GEN, zeros((2, 2)))
    s = split_ker_im(L, T)
    assert s.n1.same_span(Subspace.span([L.basis_vector(6), L.basis_vector(7)], 8))
    assert s.n2.same_span(Subspace.span([L.basis_vector(i) for i in range(6)], 8))
    assert is_ideal(L, s.n1) and is_ideal(L, s.n2)


def test_split_rejects_non_ky():
    with pytest.raises(ValidationError):
        split_ker_im(NK2.L, NK2.J)


def test_non_ideal_witness():
    h3 = algebra.heisenberg(1)
    cert = is_ideal(h3, Subspace.span([h3.basis_vector(0)], 3))
    assert not cert and cert.witness == (0, 1)


# -- eigen-blocks -------------------------------------------------------------

def test_single_block_on_nk2():
    b = eigen_blocks(NK2.L, GEN)
    assert b.squares == (1,)
    assert b.W[0].rank == 4 and b.commutators[0].rank == 2


def test_two_blocks():
    L, T = _product(GEN, 2 * GEN)
    assert is_ky(L, None, T)
    b = eigen_blocks(L, T)
    assert b.squares == (1, 4)
    assert b.values == (1, 2)
    assert [W.rank for W in b.W] == [4, 4]


def test_blocks_reject_singular_and_non_ky():
    L = algebra.direct_sum(NK2.L, algebra.abelian(2))
    with pytest.raises(ValidationError):
        eigen_blocks(L, block_diag(GEN, zeros((2, 2))))
    with pytest.raises(ValidationError):
        # T^2 is not scalar on the block spanned by the vertices
        bad = GEN.copy()
        bad[1, 0], bad[0, 1] = 2, -2
        eigen_blocks(NK2.L, bad)


def test_eigen_pairing_on_graph_algebra():
    # within a block, [e_i,e_j] = -[f_i,f_j] and [e_i,f_j] = [f_i,e_j]
    A = graphs.build_complex(graphs.path(4))
    L = A.L
    for i in range(1, 5):
        for j in range(i + 1, 5):
            e_i, f_i = A.vertex_index[i], A.vertex_index[i] + 1
            e_j, f_j = A.vertex_index[j], A.vertex_index[j] + 1
            b = lambda x, y: L.bracket(L.basis_vector(x), L.basis_vector(y))  # noqa: E731
            assert (b(e_i, e_j) == -b(f_i, f_j)).all()
            assert (b(e_i, f_j) == b(f_i, e_j)).all()
            nonzero = [any(v != 0 for v in b(x, y)) for x, y in ((e_i, e_j), (e_i, f_j), (f_i, e_j), (f_i, f_j))]
            assert len(set(nonzero)) == 1


# -- complex structure ---------------------------------------------------------

def test_complex_structure_on_nk2_is_native():
    J = extract_complex_structure(NK2.L, GEN).J
    assert all_zero(J - NK2.J)


@given(st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=10))
def test_complex_structure_is_scale_invariant(c):
    J1 = extract_complex_structure(NK2.L, GEN).J
    assert all_zero(extract_complex_structure(NK2.L, c * GEN).J - J1)
    assert all_zero(extract_complex_structure(NK2.L, -c * GEN).J + J1)


def test_complex_structure_of_block_sum():
    L, T = _product(GEN, 2 * GEN)
    J = extract_complex_structure(L, T).J
    assert all_zero(J - block_diag(NK2.J, NK2.J))


def test_complex_structure_with_isolated_vertices():
    A = graphs.build_complex(graphs.add_isolated(graphs.path(3), 2))
    T = graphs.canonical_ky(A)
    a, _, _ = zav_split(A.L)
    assert a.rank == 4
    J = extract_complex_structure(A.L, T).J
    assert all_zero(J - A.J)
    # rescaling the free part of the center changes nothing
    T2 = T.copy()
    for v in (4, 5):
        idx = A.vertex_index[v]
        T2[idx + 1, idx], T2[idx, idx + 1] = 7, -7
    assert all_zero(extract_complex_structure(A.L, T2).J - A.J)


def test_irrational_scale_complex_structure():
    L = weighted_k2()
    T = ky_space_2step(L).basis[0]
    cs = extract_complex_structure(L, T)
    assert cs.blocks.squares == (Fraction(1, 2),)
    assert any(isinstance(x, Surd) for x in cs.J.flat)
    assert all_zero(cs.J @ cs.J + identity(6))
    assert is_complex_structure(L, cs.J)


def test_approx_complex_structure():
    L = weighted_k2().with_mode(APPROX)
    T = ky_space_2step(L).basis[0]
    J = extract_complex_structure(L, T).J
    np.testing.assert_allclose(J @ J, -np.eye(6), atol=1e-9)
    exact = extract_complex_structure(weighted_k2(), ky_space_2step(weighted_k2()).basis[0]).J
    np.testing.assert_allclose(np.array([[float(x) for x in r] for r in exact]), J, atol=1e-9)


def test_non_bi_invariant_detected():
    # swapping the sign of J on one vertex breaks bi-invariance
    J = NK2.J.copy()
    J[1, 0], J[0, 1] = -1, 1
    cert = is_complex_structure(NK2.L, J)
    assert not cert and cert.reason == "not bi-invariant"


def test_projector_is_orthogonal_idempotent():
    L = weighted_k2()
    P = projector(L, center(L))
    assert all_zero(P @ P - P)
    assert all_zero(P.T @ L.metric - L.metric @ P)


# -- canonical form -------------------------------------------------------------

@pytest.mark.parametrize("G, p, q", [(graphs.complete(2), 1, 2), (graphs.path(3), 2, 3), (graphs.cycle(4), 4, 4)])
def test_canonical_form_of_graph_generator(G, p, q):
    A = graphs.build_complex(G)
    cf = canonical_form(A.L, graphs.canonical_ky(A))
    assert (cf.p, cf.q, cf.a_squared) == (p, q, 1)
    P = cf.basis_change
    assert all_zero(P.T @ P - identity(A.L.dim))
    assert all_zero(P.T @ graphs.canonical_ky(A) @ P - cf.template)
    assert cf.template[p, 0] == 3 and cf.template[2 * p + q, 2 * p] == 1


def test_canonical_form_irrational():
    L = weighted_k2()
    T = ky_space_2step(L).basis[0]
    cf = canonical_form(L, T)
    assert (cf.p, cf.q, cf.a_squared) == (1, 2, Fraction(1, 2))
    assert cf.template[1, 0] == 3 * Surd.sqrt(Fraction(1, 2))


def test_canonical_form_rejects_multi_block_and_free_center():
    L, T = _product(GEN, 2 * GEN)
    with pytest.raises(ValidationError):
        canonical_form(L, T)
    A = graphs.build_complex(graphs.add_isolated(graphs.complete(2)))
    with pytest.raises(ValidationError):
        canonical_form(A.L, graphs.canonical_ky(A))


# -- nearly Kähler and restriction --------------------------------------------------

def test_nearly_kahler():
    assert not is_nearly_kahler(NK2.L, None, NK2.J)
    J4 = zeros((4, 4))
    J4[1, 0], J4[0, 1], J4[3, 2], J4[2, 3] = 1, -1, 1, -1
    assert is_nearly_kahler(algebra.abelian(4), None, J4)
    with pytest.raises(ValidationError):
        is_nearly_kahler(NK2.L, None, GEN)


def test_parallel_iff_image_central_family():
    L = algebra.direct_sum(NK2.L, algebra.abelian(2))
    C = levi_civita(L)
    J2 = zeros((2, 2))
    J2[1, 0], J2[0, 1] = 1, -1
    for T in (block_diag(GEN, zeros((2, 2))), block_diag(zeros((6, 6)), J2), block_diag(GEN, J2)):
        assert is_parallel(C, T) == center(L).contains_subspace(image(L, T))


def test_restriction_to_image_stays_ky():
    L = algebra.direct_sum(NK2.L, algebra.heisenberg(1))
    T = block_diag(GEN, zeros((3, 3)))
    S = image(L, T)
    sub = algebra.restrict(L, S)
    assert is_ky(sub, None, restrict_endo(L, S, T))
