"""Levi-Civita connection of a left-invariant metric and covariant derivatives.

Conventions: an endomorphism ``T`` is a matrix acting on coordinates (column
``j`` is ``T e_j``).  A 2-form is stored as the skew matrix
``Omega[j, k] = omega(e_j, e_k)``, and a skew ``T`` corresponds to the form
``omega(x, y) = g(Tx, y)``, i.e. ``Omega = T^T G``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .algebra import MetricLieAlgebra, ValidationError
from .scalars import EXACT, all_zero, first_nonzero, zeros


@dataclass(frozen=True, eq=False)
class ConnectionTable:
    """All ``n`` matrices ``nabla[i]`` of ``nabla_{e_i}``, built eagerly.

    ``gamma[i][j]`` is the sparse coordinate vector ``{l: value}`` of
    ``nabla_{e_i} e_j``; the solvers use it to assemble sparse equations.
    """

    algebra: MetricLieAlgebra
    nabla: tuple
    gamma: tuple

    def __len__(self):
        return len(self.nabla)


def _half(mode):
    return Fraction(1, 2) if mode == EXACT else 0.5


def levi_civita(L: MetricLieAlgebra) -> ConnectionTable:
    """Koszul formula, solved against the metric.

    ``g(nabla_{e_i} e_j, e_k) = 1/2 (g([e_i,e_j],e_k) - g([e_j,e_k],e_i) + g([e_k,e_i],e_j))``
    """
    n = L.dim
    half = _half(L.mode)
    koszul: dict[tuple[int, int], dict[int, object]] = {}

    def put(i, j, k, c):
        row = koszul.setdefault((i, j), {})
        row[k] = row.get(k, 0) + c

    for (a, b), v in L.brackets.items():
        low = v if L.is_identity_metric else L.metric @ v
        for t, c in enumerate(low):
            if c == 0:
                continue
            h = half * c
            # the three Koszul terms, each for [e_a, e_b] = -[e_b, e_a]
            put(a, b, t, h)
            put(b, a, t, -h)
            put(t, a, b, -h)
            put(t, b, a, h)
            put(b, t, a, h)
            put(a, t, b, -h)
    gamma = []
    nabla = []
    for i in range(n):
        row_i = []
        N = zeros((n, n), L.mode)
        for j in range(n):
            k_ij = {k: c for k, c in koszul.get((i, j), {}).items() if c != 0}
            if k_ij and not L.is_identity_metric:
                vec = zeros(n, L.mode)
                for k, c in k_ij.items():
                    vec = vec + c * L.metric_inverse[:, k]
                k_ij = {l: c for l, c in enumerate(vec) if c != 0}
            for l, c in k_ij.items():
                N[l, j] = c
            row_i.append(k_ij)
        gamma.append(tuple(row_i))
        nabla.append(N)
    return ConnectionTable(L, tuple(nabla), tuple(gamma))


def covariant_derivative_endo(C: ConnectionTable, T: np.ndarray, i: int) -> np.ndarray:
    """``nabla_{e_i} T`` for left-invariant ``T``: the commutator ``[nabla_{e_i}, T]``."""
    gam = C.gamma[i]
    n = len(gam)
    D = zeros((n, n), C.algebra.mode) if T.dtype == object else np.zeros((n, n))
    for j in range(n):
        col = D[:, j]
        # (nabla_i T) e_j = nabla_i (T e_j) - T (nabla_i e_j)
        for l in range(n):
            t = T[l, j]
            if t != 0:
                for m, c in gam[l].items():
                    col[m] = col[m] + t * c
        for l, c in gam[j].items():
            col -= c * T[:, l]
    return D


def is_parallel(C: ConnectionTable, T: np.ndarray) -> bool:
    L = C.algebra
    return all(
        all_zero(covariant_derivative_endo(C, T, i), L.mode, L.eps) for i in range(L.dim)
    )


def form_from_endo(L: MetricLieAlgebra, T: np.ndarray) -> np.ndarray:
    """``Omega[j, k] = g(T e_j, e_k)``."""
    if L.is_identity_metric:
        return np.ascontiguousarray(T.T)
    return T.T @ L.metric


def endo_from_form(L: MetricLieAlgebra, omega: np.ndarray) -> np.ndarray:
    """Inverse of :func:`form_from_endo`: ``T = G^{-1} Omega^T``."""
    if L.is_identity_metric:
        return np.ascontiguousarray(omega.T)
    return L.metric_inverse @ omega.T


def is_skew_form(L: MetricLieAlgebra, omega: np.ndarray) -> bool:
    return all_zero(omega + omega.T, L.mode, L.eps)


def covariant_derivative_form(C: ConnectionTable, omega: np.ndarray) -> np.ndarray:
    """Table ``D[i, j, k] = (nabla_{e_i} omega)(e_j, e_k)``.

    For left-invariant data this is ``-omega(nabla_i e_j, e_k) - omega(e_j, nabla_i e_k)``.
    """
    L = C.algebra
    n = L.dim
    out = zeros((n, n, n), L.mode)
    for i in range(n):
        # A[j, k] = omega(nabla_i e_j, e_k) = sum_l Gamma[i][j][l] omega[l, k]
        A = zeros((n, n), L.mode) if omega.dtype == object else np.zeros((n, n))
        for j in range(n):
            for l, c in C.gamma[i][j].items():
                A[j] = A[j] + c * omega[l]
        out[i] = -A + A.T
    return out


def bracket_form_table(L: MetricLieAlgebra, omega: np.ndarray) -> np.ndarray:
    """``w[i, j, k] = omega([e_i, e_j], e_k)``, assembled from the sparse bracket table."""
    n = L.dim
    w = zeros((n, n, n), L.mode) if omega.dtype == object else np.zeros((n, n, n))
    for (a, b), v in L.brackets.items():
        row = w[a, b]
        for t, c in enumerate(v):
            if c != 0:
                row += c * omega[t]
        w[b, a] = -row
    return w


def exterior_derivative_table(L: MetricLieAlgebra, omega: np.ndarray) -> np.ndarray:
    """``d omega`` on every ordered basis triple, as an ``n x n x n`` array."""
    if not is_skew_form(L, omega):
        raise ValidationError("omega is not skew-symmetric")
    w = bracket_form_table(L, omega)
    # -w[i,j,k] + w[i,k,j] - w[j,k,i]
    return -w + np.transpose(w, (0, 2, 1)) - np.transpose(w, (2, 0, 1))


def exterior_derivative_2form(L: MetricLieAlgebra, omega: np.ndarray) -> dict:
    """``d omega`` on basis triples ``i < j < k``.

    Left-invariant convention (no 1/3 factor):
    ``d omega(X,Y,Z) = -omega([X,Y],Z) + omega([X,Z],Y) - omega([Y,Z],X)``.
    """
    d = exterior_derivative_table(L, omega)
    return {t: d[t] for t in combinations(range(L.dim), 3)}


def metric_compatibility_defect(C: ConnectionTable):
    """First ``(i, y, z)`` with ``g(nabla_i y, z) + g(y, nabla_i z) != 0``, else ``None``."""
    L = C.algebra
    for i, N in enumerate(C.nabla):
        M = N if L.is_identity_metric else L.metric @ N
        S = M + M.T
        hit = first_nonzero(S, L.mode, L.eps)
        if hit is not None:
            return (i,) + hit[0], hit[1]
    return None


def torsion_defect(C: ConnectionTable):
    """First ``(i, j)`` with ``nabla_i e_j - nabla_j e_i != [e_i, e_j]``, else ``None``."""
    L = C.algebra
    for i, j in combinations(range(L.dim), 2):
        r = C.nabla[i][:, j] - C.nabla[j][:, i] - L.structure_tensor[i, j]
        if not all_zero(r, L.mode, L.eps):
            return (i, j), r
    return None

