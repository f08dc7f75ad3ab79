"""What a Killing-Yano tensor forces on a 2-step nilpotent metric Lie algebra.

* :func:`split_ker_im` -- ``ker T`` and ``Im T`` are orthogonal ideals.
* :func:`eigen_blocks` -- for invertible ``T`` the complement ``v`` of the
  center splits into eigenspaces ``W_j`` of ``-T^2`` which bracket trivially
  with each other.
* :func:`extract_complex_structure` -- rescaling ``T`` blockwise gives an
  orthogonal bi-invariant complex structure.
* :func:`canonical_form` -- the block normal form of ``T`` in the irreducible case.

In exact mode the squared eigenvalues ``a^2`` must be rational; the
rescaled tensors may then carry square roots, represented by
:class:`~kyform.scalars.Surd`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from . import linalg
from .algebra import (
    InvariantViolation,
    MetricLieAlgebra,
    Subspace,
    ValidationError,
    center,
    intersection,
    orthogonal_complement,
    require_two_step,
    sum_of,
    zav_split,
)
from .connection import ConnectionTable, levi_civita
from .ky import Certificate, is_ky
from .scalars import (
    APPROX,
    EXACT,
    all_zero,
    first_nonzero,
    identity,
    simplify_array,
    sqrt_scalar,
    zeros,
)


@dataclass(frozen=True, eq=False)
class KerImSplit:
    n1: Subspace
    n2: Subspace
    ideal_certificates: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class EigenBlocks:
    """Eigenspaces ``W_j`` of ``-T^2`` on ``v``, ordered by increasing ``a_j^2``."""

    squares: tuple
    W: tuple
    commutators: tuple
    mode: str = EXACT

    @property
    def values(self) -> tuple:
        """The ``a_j`` themselves (possibly irrational in exact mode)."""
        return tuple(sqrt_scalar(c, self.mode) for c in self.squares)

    def __len__(self):
        return len(self.squares)


@dataclass(frozen=True, eq=False)
class ComplexStructure:
    J: np.ndarray
    blocks: EigenBlocks | None = None


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """``basis_change`` has orthonormal columns, center block first; in that basis ``T`` equals ``template``."""

    p: int
    q: int
    a_squared: object
    basis_change: np.ndarray
    template: np.ndarray


# -- helpers ----------------------------------------------------------------

def _sub(L, vectors) -> Subspace:
    return Subspace.span(vectors, L.dim, L.mode, L.eps)


def kernel(L: MetricLieAlgebra, A: np.ndarray) -> Subspace:
    return Subspace(L.dim, linalg.nullspace(A, L.dim, L.mode, L.eps), L.mode, L.eps)


def image(L: MetricLieAlgebra, A: np.ndarray) -> Subspace:
    return _sub(L, list(A.T))


def projector(L: MetricLieAlgebra, S: Subspace) -> np.ndarray:
    """Orthogonal projection onto ``S`` with respect to the metric."""
    if S.rank == 0:
        return zeros((L.dim, L.dim), L.mode)
    B = S.basis
    BG = B if L.is_identity_metric else B @ L.metric
    return B.T @ linalg.inverse(BG @ B.T, L.mode, L.eps) @ BG


def is_invertible(L: MetricLieAlgebra, A: np.ndarray) -> bool:
    return linalg.rank(A, L.mode, L.eps) == L.dim


def is_ideal(L: MetricLieAlgebra, S: Subspace) -> Certificate:
    for a, v in enumerate(S.basis):
        for k in range(L.dim):
            w = L.bracket(v, L.basis_vector(k))
            if not S.contains(w):
                return Certificate(False, (a, k), w, "bracket leaves the subspace")
    return Certificate(True)


def _orthogonal(L, S1: Subspace, S2: Subspace) -> bool:
    if S1.rank == 0 or S2.rank == 0:
        return True
    return all_zero(S1.basis @ L.metric @ S2.basis.T, L.mode, L.eps)


def restriction_matrix(L: MetricLieAlgebra, S: Subspace, A: np.ndarray) -> np.ndarray:
    """Matrix of ``A|_S`` in the basis ``S.basis``; ``S`` must be ``A``-invariant."""
    cols = []
    for b in S.basis:
        c = S.coordinates(A @ b)
        if c is None:
            raise ValidationError("subspace is not invariant")
        cols.append(c)
    out = zeros((S.rank, S.rank), L.mode)
    for j, c in enumerate(cols):
        out[:, j] = c
    return out


restrict_endo = restriction_matrix


def _require_ky(L, C, T):
    cert = is_ky(L, C, T)
    if not cert:
        raise ValidationError(f"not a Killing-Yano tensor (witness {cert.witness}: {cert.reason})")


# -- ker / Im ---------------------------------------------------------------

def split_ker_im(L: MetricLieAlgebra, T: np.ndarray, C: ConnectionTable | None = None) -> KerImSplit:
    """``n = ker T x Im T``, a product of orthogonal ideals, with all claims certified."""
    require_two_step(L)
    C = levi_civita(L) if C is None else C
    _require_ky(L, C, T)
    n1, n2 = kernel(L, T), image(L, T)
    z = center(L)
    v = orthogonal_complement(L, z)
    certs = {
        "n1_ideal": is_ideal(L, n1),
        "n2_ideal": is_ideal(L, n2),
        "orthogonal": Certificate(True) if _orthogonal(L, n1, n2)
        else Certificate(False, ("n1", "n2"), None, "not orthogonal"),
        "complementary": Certificate(True) if n1.rank + n2.rank == L.dim
        else Certificate(False, (n1.rank, n2.rank), None, "ranks do not add up"),
        "n2_invertible": Certificate(True)
        if _sub(L, [T @ b for b in n2.basis]).rank == n2.rank
        else Certificate(False, ("n2",), None, "T is singular on its image"),
        "ker_splits": Certificate(True)
        if intersection(n1, z).rank + intersection(n1, v).rank == n1.rank
        else Certificate(False, ("ker",), None, "ker T is not (ker T & z) + (ker T & v)"),
        "im_splits": Certificate(True)
        if intersection(n2, z).rank + intersection(n2, v).rank == n2.rank
        else Certificate(False, ("im",), None, "Im T is not (Im T & z) + (Im T & v)"),
    }
    failed = [k for k, c in certs.items() if not c]
    if failed:
        raise InvariantViolation(f"ker/Im decomposition failed: {failed}")
    return KerImSplit(n1, n2, certs)


# -- eigen-blocks -------------------------------------------------------------

def _squared_eigenvalues(L: MetricLieAlgebra, M: np.ndarray) -> list:
    """Distinct eigenvalues of a self-adjoint positive map given in some basis."""
    if M.shape[0] == 0:
        return []
    if L.mode == APPROX:
        vals = np.sort(np.linalg.eigvals(np.array(M, dtype=float)).real)
        tol = max(1e-7, np.sqrt(L.eps)) * max(1.0, float(np.max(np.abs(vals))))
        clusters: list[list[float]] = []
        for x in vals:
            if clusters and abs(x - clusters[-1][-1]) <= tol:
                clusters[-1].append(x)
            else:
                clusters.append([x])
        return [float(np.mean(c)) for c in clusters]
    poly = sympy.Matrix(M.tolist()).charpoly()
    roots = []
    for factor, _ in sympy.factor_list(poly.as_expr())[1]:
        f = sympy.Poly(factor, poly.gen)
        if f.degree() != 1:
            raise ValidationError(
                "-T^2 has an irrational eigenvalue a^2; exact mode needs rational a^2 "
                "(use approx mode)"
            )
        c0, c1 = f.all_coeffs()[1], f.all_coeffs()[0]
        r = -sympy.Rational(c0) / sympy.Rational(c1)
        roots.append(Fraction(int(r.p), int(r.q)))
    return sorted(set(roots))


def _eigenspaces(L: MetricLieAlgebra, M: np.ndarray, S: Subspace) -> list[tuple[object, Subspace]]:
    """Split ``S`` (``M``-invariant) into eigenspaces of ``M``."""
    if S.rank == 0:
        return []
    vals = _squared_eigenvalues(L, restriction_matrix(L, S, M))
    out = []
    I = identity(L.dim, L.mode)
    for c in vals:
        W = intersection(kernel(L, M - c * I), S)
        if W.rank:
            out.append((c, W))
    if sum(W.rank for _, W in out) != S.rank:
        raise ValidationError("could not split the subspace into eigenspaces of -T^2")
    return out


def eigen_blocks(L: MetricLieAlgebra, T: np.ndarray, C: ConnectionTable | None = None) -> EigenBlocks:
    """Eigenspaces of ``-T^2`` on ``v`` for an invertible Killing-Yano ``T``, with certified invariants."""
    require_two_step(L)
    C = levi_civita(L) if C is None else C
    _require_ky(L, C, T)
    if not is_invertible(L, T):
        raise ValidationError("T is not invertible")
    _, nprime, v = zav_split(L)
    M = -(T @ T)
    blocks = _eigenspaces(L, M, v)
    squares = tuple(c for c, _ in blocks)
    W = tuple(S for _, S in blocks)
    comms = tuple(
        _sub(L, [L.bracket(x, y) for i, x in enumerate(S.basis) for y in S.basis[i + 1:]])
        for S in W
    )
    _certify_blocks(L, T, squares, W, comms, nprime)
    return EigenBlocks(squares, W, comms, L.mode)


def _certify_blocks(L, T, squares, W, comms, nprime):
    M = -(T @ T)
    for c, S, D in zip(squares, W, comms):
        if S.rank % 2:
            raise InvariantViolation("odd-dimensional eigen-block")
        for x in S.basis:
            if not all_zero(M @ x - c * x, L.mode, L.eps):
                raise InvariantViolation("T^2 is not scalar on an eigen-block")
        for x in D.basis:
            if not all_zero(M @ x - 9 * c * x, L.mode, L.eps):
                raise InvariantViolation("T^2 is not -9a^2 on a commutator block")
    for j in range(len(W)):
        for k in range(j + 1, len(W)):
            for x in W[j].basis:
                for y in W[k].basis:
                    if not all_zero(L.bracket(x, y), L.mode, L.eps):
                        raise InvariantViolation("distinct eigen-blocks do not commute")
    if comms and not sum_of(*comms).same_span(nprime):
        raise InvariantViolation("commutator blocks do not add up to the commutator ideal")


# -- complex structure ----------------------------------------------------------

def _scaled(T, P, s, mode):
    """``(T @ P) / s``."""
    TP = T @ P
    if mode == APPROX:
        return TP / s
    return TP * (1 / s) if not isinstance(s, Fraction) else TP * (Fraction(1) / s)


def _unit_rotation_part(L: MetricLieAlgebra, T: np.ndarray, S: Subspace) -> np.ndarray:
    """``T|_S`` with every rotation coefficient set to 1 (zero outside ``S``)."""
    M = -(T @ T)
    out = zeros((L.dim, L.dim), L.mode)
    for c, E in _eigenspaces(L, M, S):
        if c == 0 if L.mode == EXACT else abs(c) <= L.eps:
            raise ValidationError("T is singular on the requested subspace")
        out = out + _scaled(T, projector(L, E), sqrt_scalar(c, L.mode), L.mode)
    return out


def extract_complex_structure(
    L: MetricLieAlgebra, T: np.ndarray, C: ConnectionTable | None = None
) -> ComplexStructure:
    """Orthogonal bi-invariant complex structure determined by an invertible KY tensor.

    ``J = T / a_j`` on ``W_j``, ``T / (3 a_j)`` on ``[W_j, W_j]``, and on the
    part ``a`` of the center orthogonal to the commutator ideal ``J`` is the
    orthogonal factor of ``T|_a`` (same rotation planes, unit coefficients).
    """
    blocks = eigen_blocks(L, T, C)
    a_part, _, _ = zav_split(L)
    if a_part.rank % 2:
        raise InvariantViolation("odd-dimensional complement of the commutator ideal in the center")
    J = zeros((L.dim, L.dim), L.mode)
    for a, S, D in zip(blocks.values, blocks.W, blocks.commutators):
        J = J + _scaled(T, projector(L, S), a, L.mode)
        J = J + _scaled(T, projector(L, D), 3 * a, L.mode)
    J = J + _unit_rotation_part(L, T, a_part)
    J = simplify_array(J)
    cert = is_complex_structure(L, J)
    if not cert:
        raise InvariantViolation(f"extracted J fails {cert.reason} at {cert.witness}")
    return ComplexStructure(J, blocks)


def is_complex_structure(L: MetricLieAlgebra, J: np.ndarray) -> Certificate:
    """``J^2 = -Id``, ``g(Jx, Jy) = g(x, y)`` and ``J[x,y] = [Jx,y] = [x,Jy]`` on basis pairs."""
    n = L.dim
    hit = first_nonzero(J @ J + identity(n, L.mode), L.mode, L.eps)
    if hit is not None:
        return Certificate(False, hit[0], hit[1], "J^2 != -Id")
    hit = first_nonzero(J.T @ L.metric @ J - L.metric, L.mode, L.eps)
    if hit is not None:
        return Certificate(False, hit[0], hit[1], "not orthogonal")
    return is_bi_invariant(L, J)


def _sparse_brackets(L: MetricLieAlgebra) -> dict:
    """``{(a, b): {t: c}}`` for both orders of every nonzero basis bracket."""
    out = {}
    for (a, b), v in L.brackets.items():
        d = {t: c for t, c in enumerate(v) if c != 0}
        out[(a, b)] = d
        out[(b, a)] = {t: -c for t, c in d.items()}
    return out


def _accumulate(acc: dict, coeff, vec: dict):
    for t, c in vec.items():
        acc[t] = acc.get(t, 0) + coeff * c


def is_bi_invariant(L: MetricLieAlgebra, J: np.ndarray) -> Certificate:
    """``J[x,y] = [Jx,y] = [x,Jy]`` on all basis pairs, evaluated sparsely."""
    n = L.dim
    sb = _sparse_brackets(L)
    cols = [{l: J[l, i] for l in range(n) if J[l, i] != 0} for i in range(n)]
    for i in range(n):
        for j in range(n):
            lhs: dict = {}
            for t, c in sb.get((i, j), {}).items():
                _accumulate(lhs, c, cols[t])
            left: dict = {}
            right: dict = {}
            for l, c in cols[i].items():
                _accumulate(left, c, sb.get((l, j), {}))
            for l, c in cols[j].items():
                _accumulate(right, c, sb.get((i, l), {}))
            for rhs in (left, right):
                r = zeros(n, L.mode)
                for t, c in lhs.items():
                    r[t] += c
                for t, c in rhs.items():
                    r[t] -= c
                if not all_zero(r, L.mode, L.eps):
                    return Certificate(False, (i, j), r, "not bi-invariant")
    return Certificate(True)


def is_almost_hermitian(L: MetricLieAlgebra, J: np.ndarray) -> bool:
    n = L.dim
    return all_zero(J @ J + identity(n, L.mode), L.mode, L.eps) and all_zero(
        J.T @ L.metric @ J - L.metric, L.mode, L.eps
    )


def is_nearly_kahler(L: MetricLieAlgebra, C: ConnectionTable | None, J: np.ndarray) -> Certificate:
    """Nearly Kähler means the fundamental form of ``(J, g)`` is Killing-Yano."""
    if not is_almost_hermitian(L, J):
        raise ValidationError("J is not an orthogonal almost complex structure")
    return is_ky(L, C, J)


# -- canonical form ---------------------------------------------------------

def _adapted_basis(L: MetricLieAlgebra, T: np.ndarray, S: Subspace, scale_sq):
    """Orthonormal ``u_1..u_k, Tu_1/s, .., Tu_k/s`` of a ``T``-invariant ``S`` with ``T^2 = -s^2``."""
    chosen: list[np.ndarray] = []
    firsts: list[np.ndarray] = []
    for b in S.basis:
        x = b
        for y in chosen:
            x = x - (L.inner(x, y) / L.inner(y, y)) * y
        if all_zero(x, L.mode, L.eps):
            continue
        firsts.append(x)
        chosen += [x, T @ x]
    s = sqrt_scalar(scale_sq, L.mode)
    us, vs = [], []
    for x in firsts:
        norm = sqrt_scalar(L.inner(x, x), L.mode)
        us.append(x * (1 / norm) if L.mode == EXACT else x / norm)
        vs.append((T @ x) * (1 / (s * norm)) if L.mode == EXACT else (T @ x) / (s * norm))
    return us + vs, s


def canonical_form(L: MetricLieAlgebra, T: np.ndarray, C: ConnectionTable | None = None) -> CanonicalForm:
    """Block normal form of an invertible KY tensor on an irreducible algebra.

    Requires a single eigen-block and a center equal to the commutator ideal.
    In the returned orthonormal basis (center first) ``T`` is
    ``[[0, -3a I_p], [3a I_p, 0]] (+) [[0, -a I_q], [a I_q, 0]]``.
    """
    blocks = eigen_blocks(L, T, C)
    a_part, nprime, v = zav_split(L)
    if len(blocks) != 1:
        raise ValidationError(f"expected a single eigen-block, found {len(blocks)}")
    if a_part.rank:
        raise ValidationError("the center is larger than the commutator ideal")
    c = blocks.squares[0]
    zb, s3 = _adapted_basis(L, T, nprime, 9 * c)
    vb, s1 = _adapted_basis(L, T, v, c)
    n = L.dim
    P = np.empty((n, n), dtype=object if L.mode == EXACT else float)
    for j, col in enumerate(zb + vb):
        P[:, j] = col
    P = simplify_array(P)
    p, q = len(zb) // 2, len(vb) // 2
    tmpl = zeros((n, n), L.mode)
    for k in range(p):
        tmpl[p + k, k] = s3
        tmpl[k, p + k] = -s3
    off = 2 * p
    for k in range(q):
        tmpl[off + q + k, off + k] = s1
        tmpl[off + k, off + q + k] = -s1
    tmpl = simplify_array(tmpl)
    if not all_zero(P.T @ L.metric @ P - identity(n, L.mode), L.mode, L.eps):
        raise InvariantViolation("canonical basis is not orthonormal")
    if not all_zero(P.T @ L.metric @ T @ P - tmpl, L.mode, L.eps):
        raise InvariantViolation("T does not take the block normal form")
    return CanonicalForm(p, q, c, P, tmpl)


def parallel_iff_image_central(L: MetricLieAlgebra, T: np.ndarray, C: ConnectionTable | None = None) -> bool:
    """Whether ``T`` is parallel exactly when its image lies in the center."""
    from .connection import is_parallel

    C = levi_civita(L) if C is None else C
    return is_parallel(C, T) == center(L).contains_subspace(image(L, T))


__all__ = [
    "CanonicalForm",
    "ComplexStructure",
    "EigenBlocks",
    "KerImSplit",
    "canonical_form",
    "eigen_blocks",
    "extract_complex_structure",
    "image",
    "is_bi_invariant",
    "is_complex_structure",
    "is_ideal",
    "is_nearly_kahler",
    "kernel",
    "parallel_iff_image_central",
    "projector",
    "restrict_endo",
    "restriction_matrix",
    "split_ker_im",
]
