"""Killing-Yano solvers, membership certificates and related tensor equations.

Every solver assembles one sparse linear system in the independent entries of
an unknown 2-form (skew case, unknowns ``omega[p, q]`` for ``p < q`` in
lexicographic order) or symmetric bilinear form (``beta[p, q]``, ``p <= q``)
and returns a :class:`SolutionSpace` whose basis is the reduced row-echelon
basis of the nullspace in those coordinates.  A one-dimensional space is thus
spanned by the generator whose first nonzero form coordinate is ``+1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations

import numpy as np

from . import linalg
from .algebra import (
    MetricLieAlgebra,
    Subspace,
    ValidationError,
    center,
    orthogonal_complement,
    require_two_step,
)
from .connection import (
    ConnectionTable,
    covariant_derivative_endo,
    covariant_derivative_form,
    endo_from_form,
    is_skew_form,
    form_from_endo,
    levi_civita,
)
from .scalars import EXACT, all_zero, first_nonzero, is_zero, zeros

KY = "KY"
CODAZZI = "Codazzi"
COMMUTING_SKEW = "CommutingSkew"
PARALLEL_SKEW = "ParallelSkew"


@dataclass(frozen=True)
class Certificate:
    """Verdict of a membership test; on failure ``witness`` names the violated equation."""

    verdict: bool
    witness: tuple | None = None
    residual: object = None
    reason: str = ""

    def __bool__(self):
        return self.verdict

    def __post_init__(self):
        if self.verdict == (self.witness is not None):
            raise ValueError("a witness is present exactly when the verdict is false")


@dataclass(frozen=True, eq=False)
class SolutionSpace:
    """Span of the solutions of a homogeneous linear tensor equation."""

    ambient: MetricLieAlgebra
    basis: tuple
    kind: str
    coords: np.ndarray = field(repr=False)
    symmetric: bool = False
    lam: object = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates_of(self, T: np.ndarray) -> np.ndarray:
        """Form coordinates of ``T`` in this space's unknown ordering."""
        return _form_coords(self.ambient, T, self.symmetric)

    def contains(self, T: np.ndarray) -> bool:
        x = self.coordinates_of(T)
        row = Subspace(self.coords.shape[1], self.coords, self.ambient.mode, self.ambient.eps)
        return row.contains(x)

    def same_span(self, other: SolutionSpace) -> bool:
        return (
            self.dim == other.dim
            and all(self.contains(T) for T in other.basis)
            and all(other.contains(T) for T in self.basis)
        )

    def combination(self, coeffs) -> np.ndarray:
        L = self.ambient
        out = zeros((L.dim, L.dim), L.mode)
        for c, T in zip(coeffs, self.basis):
            out = out + c * T
        return out

    def __repr__(self):
        lam = f", lam={self.lam}" if self.lam is not None else ""
        return f"SolutionSpace(kind={self.kind!r}, dim={self.dim}{lam})"


# -- unknown bookkeeping ----------------------------------------------------

def _pairs(n: int, symmetric: bool) -> list[tuple[int, int]]:
    return list(combinations_with_replacement(range(n), 2) if symmetric else combinations(range(n), 2))


def _index(n: int, symmetric: bool) -> dict[tuple[int, int], int]:
    return {pq: u for u, pq in enumerate(_pairs(n, symmetric))}


def _form_coords(L: MetricLieAlgebra, T: np.ndarray, symmetric: bool) -> np.ndarray:
    omega = form_from_endo(L, T)
    return np.array([omega[p, q] for p, q in _pairs(L.dim, symmetric)], dtype=omega.dtype)


def _endo_from_coords(L: MetricLieAlgebra, x, symmetric: bool) -> np.ndarray:
    n = L.dim
    omega = zeros((n, n), L.mode)
    for (p, q), v in zip(_pairs(n, symmetric), x):
        omega[p, q] = v
        omega[q, p] = v if symmetric else -v
    return endo_from_form(L, omega)


def _add(row: dict, u: int, c) -> None:
    v = row.get(u, 0) + c
    if v != 0:
        row[u] = v
    else:
        row.pop(u, None)


class _FormRow:
    """Accumulates a linear equation in the form unknowns."""

    def __init__(self, n: int, symmetric: bool, index: dict):
        self.n, self.symmetric, self.index = n, symmetric, index
        self.row: dict[int, object] = {}

    def add(self, a: int, b: int, c) -> None:
        # coefficient c on form entry (a, b)
        if c == 0:
            return
        if a < b:
            _add(self.row, self.index[(a, b)], c)
        elif a > b:
            _add(self.row, self.index[(b, a)], c if self.symmetric else -c)
        elif self.symmetric:
            _add(self.row, self.index[(a, a)], c)


def _space(L, rows, symmetric, kind, lam=None) -> SolutionSpace:
    n = L.dim
    nunk = len(_pairs(n, symmetric))
    coords = linalg.nullspace(rows, nunk, L.mode, L.eps)
    basis = tuple(_endo_from_coords(L, x, symmetric) for x in coords)
    return SolutionSpace(L, basis, kind, coords, symmetric, lam)


# -- generic Killing-Yano solver -------------------------------------------

def _ky_rows(C: ConnectionTable):
    """Equations ``(nabla_i omega)(e_j,e_k) + (nabla_j omega)(e_i,e_k) = 0`` for ``i <= j``."""
    L = C.algebra
    n = L.dim
    idx = _index(n, False)
    gam = C.gamma
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                r = _FormRow(n, False, idx)
                for a, b in ((i, j), (j, i)):
                    # -(omega(nabla_a e_b, e_k) + omega(e_b, nabla_a e_k))
                    for l, c in gam[a][b].items():
                        r.add(l, k, -c)
                    for l, c in gam[a][k].items():
                        r.add(b, l, -c)
                if r.row:
                    yield r.row


def ky_space_generic(L: MetricLieAlgebra, C: ConnectionTable | None = None) -> SolutionSpace:
    """All Killing-Yano tensors of any metric Lie algebra, from the connection."""
    C = levi_civita(L) if C is None else C
    return _space(L, _ky_rows(C), False, KY)


# -- 2-step solvers ---------------------------------------------------------

def _block_rows(L: MetricLieAlgebra, symmetric: bool):
    """``beta(z, v) = 0`` for z in the center, v in its complement: ``A`` preserves the center."""
    n = L.dim
    idx = _index(n, symmetric)
    z = center(L)
    v = orthogonal_complement(L, z)
    for zb in z.basis:
        for vb in v.basis:
            r = _FormRow(n, symmetric, idx)
            for p in np.nonzero(zb != 0)[0]:
                for q in np.nonzero(vb != 0)[0]:
                    r.add(int(p), int(q), zb[p] * vb[q])
            if r.row:
                yield r.row


def _sparse(v) -> dict[int, object]:
    return {i: c for i, c in enumerate(v) if c != 0}


def _commuting_rows(L: MetricLieAlgebra, lam, symmetric: bool, vectors):
    """Equations ``A[x, y] - lam [A x, y] = 0`` for all ordered pairs from ``vectors``.

    The unknown ``u = {s, t}`` enters ``A w`` as ``sign * w_s * g_t`` (plus
    the mirror term), where ``g_t`` is column ``t`` of ``G^{-1}``; the sign is
    ``+1`` for symmetric unknowns and ``+1``/``-1`` for ``s < t`` / ``s > t``
    for skew ones.
    """
    n = L.dim
    idx = _index(n, symmetric)
    cols = [_sparse(L.metric_inverse[:, t]) for t in range(n)]
    dense_cols = [L.metric_inverse[:, t] for t in range(n)]
    vectors = list(vectors)

    def terms(w):
        for s_, ws in _sparse(w).items():
            for t in range(n):
                if s_ == t and not symmetric:
                    continue
                if symmetric or s_ < t:
                    yield idx[(min(s_, t), max(s_, t))], ws, t
                else:
                    yield idx[(t, s_)], -ws, t

    for y in vectors:
        ad_cols = [_sparse(L.bracket(dense_cols[t], y)) for t in range(n)]
        for x in vectors:
            comps: dict[int, dict[int, object]] = {}
            # A [x, y]
            for u, c, t in terms(L.bracket(x, y)):
                for r, gv in cols[t].items():
                    _add(comps.setdefault(r, {}), u, c * gv)
            # - lam [A x, y]
            for u, c, t in terms(x):
                for r, av in ad_cols[t].items():
                    _add(comps.setdefault(r, {}), u, -lam * c * av)
            for r in sorted(comps):
                if comps[r]:
                    yield comps[r]


def _scalar(L, lam):
    if L.mode == EXACT:
        return Fraction(lam)
    return float(lam)


def commuting_skew_space(L: MetricLieAlgebra, lam) -> SolutionSpace:
    """Skew ``A`` preserving the center with ``A[x,y] = lam [Ax, y]`` on its complement.

    ``lam = 3`` is the Killing-Yano system of a 2-step algebra; ``lam = 1``
    contains every orthogonal bi-invariant complex structure.
    """
    require_two_step(L)
    lam = _scalar(L, lam)
    v = orthogonal_complement(L, center(L))
    rows = list(_block_rows(L, False))
    rows += list(_commuting_rows(L, lam, False, v.basis))
    kind = KY if lam == 3 else COMMUTING_SKEW
    return _space(L, rows, False, kind, lam)


def ky_space_2step(L: MetricLieAlgebra) -> SolutionSpace:
    """Killing-Yano tensors of a 2-step nilpotent algebra via the algebraic criterion.

    Skew ``T`` is Killing-Yano iff it preserves the center and
    ``T[x,y] = 3[Tx,y]`` for all ``x, y`` orthogonal to the center.
    """
    return commuting_skew_space(L, 3)


def codazzi_space(L: MetricLieAlgebra) -> SolutionSpace:
    """Symmetric ``B`` with ``B(center) in center`` and ``B[x,y] = [Bx,y]`` for all ``x, y``."""
    require_two_step(L)
    basis = [L.basis_vector(i) for i in range(L.dim)]
    rows = list(_block_rows(L, True))
    rows += list(_commuting_rows(L, _scalar(L, 1), True, basis))
    return _space(L, rows, True, CODAZZI, _scalar(L, 1))


def parallel_skew_space(L: MetricLieAlgebra, C: ConnectionTable | None = None) -> SolutionSpace:
    """Skew tensors commuting with every ``nabla_{e_i}`` (the parallel 2-forms)."""
    C = levi_civita(L) if C is None else C
    n = L.dim
    idx = _index(n, False)
    rows = []
    for i in range(n):
        for j, k in combinations(range(n), 2):
            r = _FormRow(n, False, idx)
            for l, c in C.gamma[i][j].items():
                r.add(l, k, -c)
            for l, c in C.gamma[i][k].items():
                r.add(j, l, -c)
            if r.row:
                rows.append(r.row)
    return _space(L, rows, False, PARALLEL_SKEW)


# -- certificates -------------------------------------------------------------

def skew_defect(L: MetricLieAlgebra, T: np.ndarray):
    """First ``(j, k)`` where ``g(Te_j, e_k) + g(e_j, Te_k) != 0``."""
    omega = form_from_endo(L, T)
    n = L.dim
    for j in range(n):
        for k in range(j, n):
            s = omega[j, k] + omega[k, j]
            if not is_zero(s, L.mode, L.eps):
                return (j, k), s
    return None


def symmetric_defect(L: MetricLieAlgebra, S: np.ndarray):
    omega = form_from_endo(L, S)
    n = L.dim
    for j, k in combinations(range(n), 2):
        s = omega[j, k] - omega[k, j]
        if not is_zero(s, L.mode, L.eps):
            return (j, k), s
    return None


def is_ky(L: MetricLieAlgebra, C: ConnectionTable | None, T: np.ndarray) -> Certificate:
    """Is ``T`` a Killing-Yano tensor?  Witness: ``(i, j, k)`` with
    ``g((nabla_i T) e_j + (nabla_j T) e_i, e_k) != 0``."""
    C = levi_civita(L) if C is None else C
    bad = skew_defect(L, T)
    if bad is not None:
        return Certificate(False, bad[0], bad[1], "not skew-symmetric")
    n = L.dim
    D = covariant_derivative_form(C, form_from_endo(L, T))
    for i in range(n):
        for j in range(i, n):
            r = D[i, j] + D[j, i]
            for k in range(n):
                if not is_zero(r[k], L.mode, L.eps):
                    return Certificate(False, (i, j, k), r[k], "Killing-Yano equation")
    return Certificate(True)


def is_killing_tensor(L: MetricLieAlgebra, C: ConnectionTable | None, S: np.ndarray) -> Certificate:
    """Full symmetrisation of ``g((nabla_i S) e_j, e_k)`` vanishes on every triple."""
    if symmetric_defect(L, S) is not None:
        raise ValidationError("S is not symmetric with respect to the metric")
    C = levi_civita(L) if C is None else C
    n = L.dim
    # Q[i, j, k] = g((nabla_i S) e_j, e_k)
    Ds = [covariant_derivative_endo(C, S, i) for i in range(n)]
    Q = np.stack([D.T if L.is_identity_metric else (L.metric @ D).T for D in Ds])
    sym = sum(np.transpose(Q, p) for p in permutations(range(3)))
    hit = first_nonzero(sym, L.mode, L.eps)
    if hit is not None:
        return Certificate(False, hit[0], hit[1], "Killing tensor equation")
    return Certificate(True)


def is_codazzi(L: MetricLieAlgebra, C: ConnectionTable | None, B: np.ndarray) -> Certificate:
    """``(nabla_i B) e_j = (nabla_j B) e_i`` on all basis pairs, ``B`` symmetric."""
    bad = symmetric_defect(L, B)
    if bad is not None:
        return Certificate(False, bad[0], bad[1], "not symmetric")
    C = levi_civita(L) if C is None else C
    n = L.dim
    D = [covariant_derivative_endo(C, B, i) for i in range(n)]
    for i, j in combinations(range(n), 2):
        r = D[i][:, j] - D[j][:, i]
        for k in range(n):
            if not is_zero(r[k], L.mode, L.eps):
                return Certificate(False, (i, j, k), r[k], "Codazzi equation")
    return Certificate(True)


def exterior_matches_covariant(
    L: MetricLieAlgebra, C: ConnectionTable | None, omega: np.ndarray
) -> Certificate:
    """Does ``d omega(e_i, e_j, e_k) = 3 (nabla_i omega)(e_j, e_k)`` hold on all index triples?

    Holds exactly for the Killing-Yano forms, since then ``nabla omega`` is
    totally skew.  Only nonzero contributions are accumulated.
    """
    if not is_skew_form(L, omega):
        raise ValidationError("omega is not skew-symmetric")
    C = levi_civita(L) if C is None else C
    n = L.dim
    rows = [[(k, omega[t, k]) for k in range(n) if omega[t, k] != 0] for t in range(n)]
    R: dict = {}

    def add(key, v):
        R[key] = R.get(key, 0) + v

    # d omega[i,j,k] = -w[i,j,k] + w[i,k,j] - w[j,k,i] with w[p,q,k] = omega([e_p,e_q], e_k)
    for (a, b), v in L.brackets.items():
        w: dict = {}
        for t, c in enumerate(v):
            if c != 0:
                for k, x in rows[t]:
                    w[k] = w.get(k, 0) + c * x
        for k, x in w.items():
            for p, q, val in ((a, b, x), (b, a, -x)):
                add((p, q, k), -val)
                add((p, k, q), val)
                add((k, p, q), -val)
    # nabla omega[i,j,k] = -A[j,k] + A[k,j] with A[j,k] = sum_l Gamma[i][j][l] omega[l,k]
    for i in range(n):
        for j in range(n):
            for l, c in C.gamma[i][j].items():
                for k, x in rows[l]:
                    add((i, j, k), 3 * c * x)
                    add((i, k, j), -3 * c * x)
    for key in sorted(R):
        if not is_zero(R[key], L.mode, L.eps):
            return Certificate(False, key, R[key], "d omega != 3 nabla omega")
    return Certificate(True)


def commuting_residual(L: MetricLieAlgebra, A: np.ndarray, lam):
    """First ``(a, b)`` of complement-basis vectors with ``A[x,y] - lam [Ax,y] != 0``."""
    v = orthogonal_complement(L, center(L))
    for a, x in enumerate(v.basis):
        for b, y in enumerate(v.basis):
            r = A @ L.bracket(x, y) - lam * L.bracket(A @ x, y)
            if not all_zero(r, L.mode, L.eps):
                return (a, b), r
    return None
