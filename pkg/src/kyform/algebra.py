"""Metric Lie algebras given by structure constants, and their structural queries.

Indices are 0-based throughout the Python API.  Brackets are stored sparsely
under keys ``(i, j)`` with ``i < j``; the value for ``(j, i)`` is never stored,
it is the negative by construction.

Example
-------
>>> from kyform.algebra import MetricLieAlgebra, center
>>> h3 = MetricLieAlgebra(3, {(0, 1): {2: 1}})
>>> center(h3).rank
1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .scalars import (
    DEFAULT_EPS,
    EXACT,
    all_zero,
    asarray,
    check_mode,
    identity,
    to_scalar,
    unit,
    zeros,
)


class ValidationError(ValueError):
    """Input data violates a precondition (Jacobi, positivity, graph simplicity, ...)."""


class NotTwoStepError(ValidationError):
    """An operation that presupposes a 2-step nilpotent algebra got something else."""


class InvariantViolation(AssertionError):
    """A certified invariant failed on data that passed validation.  Indicates a bug."""


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of coordinate space, kept as a canonical basis.

    ``basis`` is a ``rank x ambient_dim`` array in reduced row-echelon form,
    so two subspaces are equal exactly when their bases are equal.
    """

    ambient_dim: int
    basis: np.ndarray
    mode: str = EXACT
    eps: float = DEFAULT_EPS

    @classmethod
    def span(cls, vectors, ambient_dim: int, mode: str = EXACT, eps: float = DEFAULT_EPS):
        vectors = list(vectors)
        if not vectors:
            return cls.zero(ambient_dim, mode, eps)
        return cls(ambient_dim, linalg.rref_rows(vectors, ambient_dim, mode, eps), mode, eps)

    @classmethod
    def zero(cls, ambient_dim: int, mode: str = EXACT, eps: float = DEFAULT_EPS):
        return cls(ambient_dim, zeros((0, ambient_dim), mode), mode, eps)

    @classmethod
    def full(cls, ambient_dim: int, mode: str = EXACT, eps: float = DEFAULT_EPS):
        return cls(ambient_dim, identity(ambient_dim, mode), mode, eps)

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    @property
    def pivots(self) -> list[int]:
        out = []
        for row in self.basis:
            for c, v in enumerate(row):
                if v != 0:
                    out.append(c)
                    break
        return out

    def coordinates(self, v) -> np.ndarray | None:
        """Coefficients of ``v`` in ``basis``, or ``None`` when ``v`` lies outside."""
        v = np.asarray(v)
        if self.rank == 0:
            return zeros(0, self.mode) if all_zero(v, self.mode, self._tol(v)) else None
        c = np.array([v[p] for p in self.pivots], dtype=v.dtype)
        resid = v - c @ self.basis
        return c if all_zero(resid, self.mode, self._tol(v)) else None

    def _tol(self, v) -> float:
        if self.mode == EXACT:
            return 0.0
        scale = float(np.max(np.abs(np.asarray(v, dtype=float)))) if np.size(v) else 0.0
        return self.eps * max(1.0, scale)

    def contains(self, v) -> bool:
        return self.coordinates(v) is not None

    def contains_subspace(self, other: Subspace) -> bool:
        return all(self.contains(v) for v in other.basis)

    def same_span(self, other: Subspace) -> bool:
        return self.rank == other.rank and self.contains_subspace(other)

    def __repr__(self):
        return f"Subspace(rank={self.rank}, ambient_dim={self.ambient_dim})"


def sum_of(*spaces: Subspace) -> Subspace:
    first = spaces[0]
    vecs = [v for s in spaces for v in s.basis]
    return Subspace.span(vecs, first.ambient_dim, first.mode, first.eps)


def intersection(a: Subspace, b: Subspace) -> Subspace:
    """``a & b`` through the kernel of ``[A^T | -B^T]``."""
    if a.rank == 0 or b.rank == 0:
        return Subspace.zero(a.ambient_dim, a.mode, a.eps)
    n = a.ambient_dim
    rows = []
    for k in range(n):
        row = {}
        for i in range(a.rank):
            if a.basis[i, k] != 0:
                row[i] = a.basis[i, k]
        for j in range(b.rank):
            if b.basis[j, k] != 0:
                row[a.rank + j] = -b.basis[j, k]
        rows.append(row)
    ker = linalg.nullspace(rows, a.rank + b.rank, a.mode, a.eps)
    return Subspace.span([c[: a.rank] @ a.basis for c in ker], n, a.mode, a.eps)


def _vector(v, n: int, mode: str) -> np.ndarray:
    if isinstance(v, Mapping):
        out = zeros(n, mode)
        for k, x in v.items():
            out[k] = to_scalar(x, mode)
        return out
    out = asarray(v, mode)
    if out.shape != (n,):
        raise ValidationError(f"expected a vector of length {n}, got shape {out.shape}")
    return out


@dataclass(frozen=True, eq=False)
class MetricLieAlgebra:
    """A real Lie algebra with inner product, in a fixed basis ``e_0 .. e_{n-1}``.

    Parameters
    ----------
    dim:
        dimension ``n``.
    brackets:
        mapping ``(i, j) -> [e_i, e_j]`` where the value is a length-``n``
        sequence or a sparse ``{k: coefficient}`` mapping.  Either order of
        ``(i, j)`` is accepted; it is normalised to ``i < j``.
    metric:
        Gram matrix of the basis; ``None`` means orthonormal.
    mode:
        ``"exact"`` (rationals) or ``"approx"`` (floats, zero means ``|x| <= eps``).
    validate:
        check the Jacobi identity and positive-definiteness.
    """

    dim: int
    brackets: Mapping[tuple[int, int], np.ndarray]
    metric: np.ndarray | None = None
    mode: str = EXACT
    eps: float = DEFAULT_EPS
    labels: Sequence[str] | None = None
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        n = self.dim
        check_mode(self.mode)
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValidationError(f"dimension must be a positive integer, got {n!r}")
        table: dict[tuple[int, int], np.ndarray] = {}
        for (i, j), value in dict(self.brackets).items():
            if not (0 <= i < n and 0 <= j < n):
                raise ValidationError(f"bracket index ({i}, {j}) out of range for dim {n}")
            vec = _vector(value, n, self.mode)
            if i == j:
                if not all_zero(vec, self.mode, self.eps):
                    raise ValidationError(f"[e_{i}, e_{i}] must vanish")
                continue
            key, vec = ((i, j), vec) if i < j else ((j, i), -vec)
            if key in table and not all_zero(table[key] - vec, self.mode, self.eps):
                raise ValidationError(f"inconsistent values given for bracket {key}")
            table[key] = vec
        table = {k: v for k, v in sorted(table.items()) if not all_zero(v, self.mode, self.eps)}
        object.__setattr__(self, "brackets", table)
        g = identity(n, self.mode) if self.metric is None else asarray(self.metric, self.mode)
        if g.shape != (n, n):
            raise ValidationError(f"metric must be {n}x{n}, got {g.shape}")
        object.__setattr__(self, "metric", g)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != n:
                raise ValidationError("need one label per basis element")
            object.__setattr__(self, "labels", labels)
        if self.validate:
            self._check_metric()
            self._check_jacobi()

    # -- validation -----------------------------------------------------

    def _check_metric(self):
        g = self.metric
        if not all_zero(g - g.T, self.mode, self.eps):
            raise ValidationError("metric is not symmetric")
        if not linalg.leading_minors_positive(g, self.mode, self.eps):
            raise ValidationError("metric is not positive definite")

    def jacobi_violation(self):
        """First basis triple violating the Jacobi identity, with its residual, or ``None``."""
        n = self.dim
        for i, j, k in combinations(range(n), 3):
            ei, ej, ek = (unit(n, t, self.mode) for t in (i, j, k))
            r = (
                self.bracket(self.bracket(ei, ej), ek)
                + self.bracket(self.bracket(ej, ek), ei)
                + self.bracket(self.bracket(ek, ei), ej)
            )
            if not all_zero(r, self.mode, self.eps):
                return (i, j, k), r
        return None

    def _check_jacobi(self):
        bad = self.jacobi_violation()
        if bad is not None:
            raise ValidationError(f"Jacobi identity fails on basis triple {bad[0]}")

    # -- arithmetic -------------------------------------------------------

    @property
    def is_identity_metric(self) -> bool:
        return self._identity_metric

    @cached_property
    def _identity_metric(self) -> bool:
        return all_zero(self.metric - identity(self.dim, self.mode), self.mode, 0.0)

    @cached_property
    def metric_inverse(self) -> np.ndarray:
        if self.is_identity_metric:
            return identity(self.dim, self.mode)
        return linalg.inverse(self.metric, self.mode, self.eps)

    def zero_vector(self) -> np.ndarray:
        return zeros(self.dim, self.mode)

    def basis_vector(self, i: int) -> np.ndarray:
        return unit(self.dim, i, self.mode)

    def inner(self, x, y):
        return x @ self.metric @ y

    def bracket(self, x, y) -> np.ndarray:
        acc = zeros(self.dim, self.mode)
        for (i, j), v in self.brackets.items():
            c = x[i] * y[j] - x[j] * y[i]
            if c != 0:
                acc = acc + c * v
        return acc

    def ad(self, x) -> np.ndarray:
        """Matrix of ``ad_x`` acting on coordinates (column ``k`` is ``[x, e_k]``)."""
        n = self.dim
        out = zeros((n, n), self.mode)
        for (i, j), v in self.brackets.items():
            if x[i] != 0:
                out[:, j] = out[:, j] + x[i] * v
            if x[j] != 0:
                out[:, i] = out[:, i] - x[j] * v
        return out

    @cached_property
    def structure_tensor(self) -> np.ndarray:
        """Dense ``c[i, j, :] = [e_i, e_j]``."""
        n = self.dim
        c = zeros((n, n, n), self.mode)
        for (i, j), v in self.brackets.items():
            c[i, j] = v
            c[j, i] = -v
        return c

    @property
    def is_abelian(self) -> bool:
        return not self.brackets

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"e{i + 1}"

    def with_mode(self, mode: str, eps: float | None = None) -> MetricLieAlgebra:
        """The same algebra converted to another scalar mode."""
        eps = self.eps if eps is None else eps
        conv = (lambda a: asarray(a, mode))
        return MetricLieAlgebra(
            self.dim,
            {k: conv(v) for k, v in self.brackets.items()},
            conv(self.metric),
            mode,
            eps,
            self.labels,
        )

    def __repr__(self):
        return f"MetricLieAlgebra(dim={self.dim}, brackets={len(self.brackets)}, mode={self.mode!r})"


def _sub(L: MetricLieAlgebra, vectors) -> Subspace:
    return Subspace.span(vectors, L.dim, L.mode, L.eps)


def bracket(L: MetricLieAlgebra, x, y) -> np.ndarray:
    """``[x, y]`` by bilinear extension of the structure table."""
    x = _vector(x, L.dim, L.mode)
    y = _vector(y, L.dim, L.mode)
    return L.bracket(x, y)


def center(L: MetricLieAlgebra) -> Subspace:
    """Kernel of the stacked adjoint maps ``ad_{e_i}``."""
    n = L.dim
    # rows indexed by (i, l): sum_k x_k [e_k, e_i]_l = 0
    rows: dict[tuple[int, int], dict[int, object]] = {}
    for (a, b), v in L.brackets.items():
        for l, c in enumerate(v):
            if c == 0:
                continue
            row_b = rows.setdefault((b, l), {})
            row_b[a] = row_b.get(a, 0) + c
            row_a = rows.setdefault((a, l), {})
            row_a[b] = row_a.get(b, 0) - c
    ker = linalg.nullspace(list(rows.values()), n, L.mode, L.eps)
    return Subspace(n, ker, L.mode, L.eps)


def derived(L: MetricLieAlgebra) -> Subspace:
    """The commutator ideal: span of all basis brackets."""
    return _sub(L, list(L.brackets.values()))


def is_two_step(L: MetricLieAlgebra) -> bool:
    """Non-abelian with the commutator ideal inside the center."""
    d = derived(L)
    if d.rank == 0:
        return False
    return center(L).contains_subspace(d)


def require_two_step(L: MetricLieAlgebra) -> None:
    if not is_two_step(L):
        raise NotTwoStepError("this operation requires a 2-step nilpotent Lie algebra")


def orthogonal_complement(L: MetricLieAlgebra, S: Subspace) -> Subspace:
    rows = list(S.basis) if L.is_identity_metric else [s @ L.metric for s in S.basis]
    return Subspace(L.dim, linalg.nullspace(rows, L.dim, L.mode, L.eps), L.mode, L.eps)


def complement_within(L: MetricLieAlgebra, S: Subspace, inside: Subspace) -> Subspace:
    """Orthogonal complement of ``S`` inside ``inside``."""
    return intersection(orthogonal_complement(L, S), inside)


def zav_split(L: MetricLieAlgebra) -> tuple[Subspace, Subspace, Subspace]:
    """Orthogonal pieces ``(a, n', v)`` with ``center = a + n'`` and ``v = center^perp``."""
    require_two_step(L)
    z = center(L)
    nprime = derived(L)
    return complement_within(L, nprime, z), nprime, orthogonal_complement(L, z)


def direct_sum(L1: MetricLieAlgebra, L2: MetricLieAlgebra) -> MetricLieAlgebra:
    """Block-diagonal brackets and metric on the concatenated basis."""
    if L1.mode != L2.mode:
        raise ValidationError("cannot sum algebras in different scalar modes")
    n1, n2 = L1.dim, L2.dim
    n = n1 + n2
    br = {}
    for (i, j), v in L1.brackets.items():
        w = zeros(n, L1.mode)
        w[:n1] = v
        br[(i, j)] = w
    for (i, j), v in L2.brackets.items():
        w = zeros(n, L1.mode)
        w[n1:] = v
        br[(n1 + i, n1 + j)] = w
    g = zeros((n, n), L1.mode)
    g[:n1, :n1] = L1.metric
    g[n1:, n1:] = L2.metric
    labels = None
    if L1.labels or L2.labels:
        labels = [L1.label(i) for i in range(n1)] + [L2.label(i) + "'" for i in range(n2)]
    return MetricLieAlgebra(n, br, g, L1.mode, min(L1.eps, L2.eps), labels, validate=False)


def abelian(n: int, mode: str = EXACT) -> MetricLieAlgebra:
    return MetricLieAlgebra(n, {}, None, mode)


def heisenberg(n: int = 1, mode: str = EXACT) -> MetricLieAlgebra:
    """Real Heisenberg algebra of dimension ``2n+1``: ``[x_i, y_i] = z``, orthonormal basis."""
    dim = 2 * n + 1
    br = {(2 * i, 2 * i + 1): {dim - 1: 1} for i in range(n)}
    return MetricLieAlgebra(dim, br, None, mode)


def free_two_step(generators: int = 3, mode: str = EXACT) -> MetricLieAlgebra:
    """Free 2-step nilpotent algebra: one central basis element per pair of generators."""
    pairs = list(combinations(range(generators), 2))
    dim = generators + len(pairs)
    br = {(i, j): {generators + k: 1} for k, (i, j) in enumerate(pairs)}
    return MetricLieAlgebra(dim, br, None, mode)


def restrict(L: MetricLieAlgebra, S: Subspace) -> MetricLieAlgebra:
    """The subalgebra ``S`` with the restricted inner product, in the basis ``S.basis``."""
    B = S.basis
    r = S.rank
    br = {}
    for a, b in combinations(range(r), 2):
        coords = S.coordinates(L.bracket(B[a], B[b]))
        if coords is None:
            raise ValidationError("subspace is not closed under the bracket")
        br[(a, b)] = coords
    g = B @ L.metric @ B.T
    return MetricLieAlgebra(r, br, g, L.mode, L.eps)


def check_vector_length(L: MetricLieAlgebra, *vs) -> None:
    for v in vs:
        if np.shape(v) != (L.dim,):
            raise ValidationError(f"expected vectors of length {L.dim}")


def trace_ad(L: MetricLieAlgebra, i: int):
    return sum(L.ad(L.basis_vector(i)).diagonal(), Fraction(0) if L.mode == EXACT else 0.0)
