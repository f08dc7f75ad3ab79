from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from catalog import bracket_table, metric_table, small_two_step, weighted_k2
from oracle import christoffel
from kyform import algebra, graphs
from kyform.algebra import ValidationError
from kyform.connection import (
    covariant_derivative_endo,
    covariant_derivative_form,
    endo_from_form,
    exterior_derivative_2form,
    exterior_derivative_table,
    form_from_endo,
    is_parallel,
    levi_civita,
    metric_compatibility_defect,
    torsion_defect,
)
from kyform.scalars import APPROX, asarray, zeros

half = Fraction(1, 2)


def _algebras():
    out = dict(small_two_step())
    out["nP3"] = graphs.build_complex(graphs.path(3)).L
    out["weighted"] = weighted_k2()
    out["so3"] = algebra.MetricLieAlgebra(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}})
    out["skewed_metric_h3"] = algebra.MetricLieAlgebra(
        3, {(0, 1): {2: 1}}, asarray([[2, 1, 0], [1, 2, 0], [0, 0, 3]])
    )
    return out


def test_h3_christoffel_by_hand():
    h3 = algebra.heisenberg(1)
    C = levi_civita(h3)
    col = lambda i, j: C.nabla[i][:, j].tolist()  # noqa: E731
    assert col(0, 1) == [0, 0, half]
    assert col(1, 0) == [0, 0, -half]
    assert col(0, 2) == [0, -half, 0]
    assert col(2, 0) == [0, -half, 0]
    assert col(1, 2) == [half, 0, 0]
    assert col(0, 0) == [0, 0, 0]
    assert col(2, 2) == [0, 0, 0]


def test_h3_covariant_derivative_of_rotation():
    # J e1 = e2, J e2 = -e1, J e3 = 0
    h3 = algebra.heisenberg(1)
    J = zeros((3, 3))
    J[1, 0], J[0, 1] = 1, -1
    D = covariant_derivative_endo(levi_civita(h3), J, 0)
    # nabla_{e1} e1 = 0 and nabla_{e1} e2 = e3 / 2
    assert D[:, 0].tolist() == [0, 0, half]
    assert not is_parallel(levi_civita(h3), J)


@pytest.mark.parametrize("name", sorted(_algebras()))
def test_connection_matches_dense_oracle(name):
    L = _algebras()[name]
    C = levi_civita(L)
    ref = christoffel(L.dim, bracket_table(L), metric_table(L))
    for i in range(L.dim):
        for j in range(L.dim):
            assert list(C.nabla[i][:, j]) == list(ref[i][j]), (i, j)


@pytest.mark.parametrize("name", sorted(_algebras()))
def test_metric_and_torsion(name):
    C = levi_civita(_algebras()[name])
    assert metric_compatibility_defect(C) is None
    assert torsion_defect(C) is None


def test_approx_connection_matches_exact():
    L = weighted_k2()
    Ce, Ca = levi_civita(L), levi_civita(L.with_mode(APPROX))
    for Ne, Na in zip(Ce.nabla, Ca.nabla):
        np.testing.assert_allclose(np.array(Ne, dtype=float), Na, atol=1e-12)


def test_abelian_connection_is_zero():
    C = levi_civita(algebra.abelian(4))
    assert all(all(x == 0 for x in N.flat) for N in C.nabla)
    J = zeros((4, 4))
    J[1, 0], J[0, 1] = 1, -1
    assert is_parallel(C, J)


def test_form_endo_round_trip():
    L = weighted_k2()
    T = asarray(np.arange(36).reshape(6, 6) % 5)
    assert (endo_from_form(L, form_from_endo(L, T)) == T).all()


def test_exterior_derivative_closed_on_h3():
    h3 = algebra.heisenberg(1)
    W = zeros((3, 3))
    W[0, 1], W[1, 0] = 1, -1
    assert exterior_derivative_2form(h3, W) == {(0, 1, 2): 0}


def test_exterior_derivative_on_h3_plus_line():
    # omega = e3 ^ e4 on h3 + R: d omega(e1, e2, e4) = -omega([e1, e2], e4) = -1
    L = algebra.direct_sum(algebra.heisenberg(1), algebra.abelian(1))
    W = zeros((4, 4))
    W[2, 3], W[3, 2] = 1, -1
    d = exterior_derivative_2form(L, W)
    assert d[(0, 1, 3)] == -1
    assert sum(1 for v in d.values() if v != 0) == 1


def test_exterior_derivative_table_is_alternating():
    L = graphs.build_complex(graphs.path(3)).L
    rng = np.random.default_rng(0)
    A = rng.integers(-3, 4, (L.dim, L.dim))
    W = asarray(A - A.T)
    d = exterior_derivative_table(L, W)
    assert (d == -np.transpose(d, (1, 0, 2))).all()
    assert (d == -np.transpose(d, (0, 2, 1))).all()


def test_exterior_derivative_rejects_non_skew():
    with pytest.raises(ValidationError):
        exterior_derivative_2form(algebra.heisenberg(1), asarray(np.eye(3, dtype=int)))


def test_covariant_derivative_form_against_sympy():
    L = algebra.heisenberg(2)
    ref = christoffel(L.dim, bracket_table(L))
    rng = np.random.default_rng(1)
    A = rng.integers(-3, 4, (L.dim, L.dim))
    W = asarray(A - A.T)
    D = covariant_derivative_form(levi_civita(L), W)
    Ws = sp.Matrix(A - A.T)
    e = [sp.eye(L.dim)[:, k] for k in range(L.dim)]
    for i in range(L.dim):
        for j in range(L.dim):
            for k in range(L.dim):
                expect = -(ref[i][j].T * Ws * e[k])[0, 0] - (e[j].T * Ws * ref[i][k])[0, 0]
                assert D[i, j, k] == expect
