"""Nullspaces, row-reduced bases, inverses and determinants in both scalar modes.

Exact mode never touches floating point.  Linear systems arrive as sparse rows
(``{column: value}``), are scaled to primitive integer rows and reduced
fraction-free into echelon form; only the final back substitution to reduced
row-echelon form uses :class:`~fractions.Fraction`.  Approximate mode runs a
dense elimination with partial pivoting and drops pivots below
``eps * max|entry|``.

All bases returned here are canonical: the rows of a reduced row-echelon
matrix, pivot entries equal to one.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .scalars import APPROX, DEFAULT_EPS, EXACT, zeros

SparseRow = Mapping[int, object]


def _primitive(row: Mapping[int, Fraction]) -> dict[int, int]:
    den = 1
    for v in row.values():
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = {c: int(v * den) for c, v in row.items() if v}
    g = 0
    for v in ints.values():
        g = math.gcd(g, v)
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


def _normalize(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    return {c: v // g for c, v in row.items()}


class _Echelon:
    """Incremental fraction-free echelon form over the integers."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict[int, int]] = {}

    def add(self, row: SparseRow) -> bool:
        r = _primitive({c: Fraction(v) for c, v in row.items()})
        while r:
            lead = min(r)
            prow = self.pivots.get(lead)
            if prow is None:
                self.pivots[lead] = r
                return True
            a, b = prow[lead], r[lead]
            g = math.gcd(a, b)
            ma, mb = a // g, b // g
            new = {c: v * ma for c, v in r.items()}
            for c, v in prow.items():
                nv = new.get(c, 0) - v * mb
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            r = _normalize(new) if new else new
        return False

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def rref(self) -> dict[int, dict[int, Fraction]]:
        reduced: dict[int, dict[int, Fraction]] = {}
        for lead in sorted(self.pivots, reverse=True):
            prow = self.pivots[lead]
            p = prow[lead]
            row = {c: Fraction(v, p) for c, v in prow.items()}
            for c in sorted(c for c in row if c != lead and c in reduced):
                f = row.get(c)
                if not f:
                    continue
                for cc, vv in reduced[c].items():
                    nv = row.get(cc, 0) - f * vv
                    if nv:
                        row[cc] = nv
                    else:
                        row.pop(cc, None)
            reduced[lead] = row
        return dict(sorted(reduced.items()))


def _as_sparse_rows(rows) -> Iterable[dict[int, object]]:
    if isinstance(rows, np.ndarray):
        for r in rows:
            yield {c: v for c, v in enumerate(r) if v != 0}
    else:
        for r in rows:
            if isinstance(r, Mapping):
                yield r
            else:
                yield {c: v for c, v in enumerate(r) if v != 0}


def _dense_rref(a: np.ndarray, eps: float) -> tuple[np.ndarray, list[int]]:
    a = np.array(a, dtype=float)
    if a.size == 0:
        return a.reshape(0, a.shape[1] if a.ndim == 2 else 0), []
    tol = eps * max(1.0, float(np.max(np.abs(a))))
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        k = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[k, c]) <= tol:
            a[r:, c] = 0.0
            continue
        a[[r, k]] = a[[k, r]]
        a[r] /= a[r, c]
        others = np.arange(m) != r
        a[others] -= np.outer(a[others, c], a[r])
        pivots.append(c)
        r += 1
    out = a[:r]
    out[np.abs(out) <= tol] = 0.0
    return out, pivots


def rref_rows(rows, ncols: int, mode: str = EXACT, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Reduced row-echelon basis of the row space, as a ``rank x ncols`` array."""
    if mode == APPROX:
        dense = np.array([_densify(r, ncols) for r in _as_sparse_rows(rows)], dtype=float)
        if dense.size == 0:
            return np.zeros((0, ncols))
        return _dense_rref(dense, eps)[0]
    ech = _Echelon(ncols)
    for r in _as_sparse_rows(rows):
        ech.add(r)
    red = ech.rref()
    out = zeros((len(red), ncols), EXACT)
    for i, row in enumerate(red.values()):
        for c, v in row.items():
            out[i, c] = v
    return out


def _densify(row, ncols: int) -> list:
    if isinstance(row, Mapping):
        out = [0.0] * ncols
        for c, v in row.items():
            out[c] = float(v)
        return out
    return [float(v) for v in row]


def nullspace(rows, ncols: int, mode: str = EXACT, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Canonical basis (rows, reduced row-echelon) of ``{x : row . x = 0 for all rows}``."""
    if mode == APPROX:
        dense = [_densify(r, ncols) for r in _as_sparse_rows(rows)]
        if dense:
            red, pivots = _dense_rref(np.array(dense, dtype=float), eps)
        else:
            red, pivots = np.zeros((0, ncols)), []
        free = [c for c in range(ncols) if c not in set(pivots)]
        basis = np.zeros((len(free), ncols))
        for k, f in enumerate(free):
            basis[k, f] = 1.0
            for i, p in enumerate(pivots):
                basis[k, p] = -red[i, f]
        return _dense_rref(basis, eps)[0] if len(free) else basis
    ech = _Echelon(ncols)
    for r in _as_sparse_rows(rows):
        ech.add(r)
    red = ech.rref()
    free = [c for c in range(ncols) if c not in red]
    vecs = []
    for f in free:
        v = {f: Fraction(1)}
        for p, row in red.items():
            x = row.get(f)
            if x:
                v[p] = -x
        vecs.append(v)
    return rref_rows(vecs, ncols, EXACT)


def rank(a, mode: str = EXACT, eps: float = DEFAULT_EPS) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return rref_rows(a, a.shape[1], mode, eps).shape[0]


def inverse(a: np.ndarray, mode: str = EXACT, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Gauss-Jordan inverse; raises ``ValueError`` for singular input."""
    n = a.shape[0]
    if mode == APPROX:
        aug = np.hstack([np.array(a, dtype=float), np.eye(n)])
        red, piv = _dense_rref(aug, eps)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise ValueError("matrix is singular")
        return red[:, n:]
    aug = zeros((n, 2 * n), EXACT)
    aug[:, :n] = a
    for i in range(n):
        aug[i, n + i] = Fraction(1)
    red = rref_rows(aug, 2 * n, EXACT)
    if red.shape[0] < n or any(red[i, i] != 1 for i in range(n)):
        raise ValueError("matrix is singular")
    return red[:, n:]


def det(a: np.ndarray, mode: str = EXACT):
    """Determinant.  Exact mode uses Bareiss fraction-free elimination."""
    n = a.shape[0]
    if mode == APPROX:
        return float(np.linalg.det(np.array(a, dtype=float))) if n else 1.0
    m = [[Fraction(v) for v in row] for row in a]
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else Fraction(1)


def leading_minors_positive(a: np.ndarray, mode: str = EXACT, eps: float = DEFAULT_EPS) -> bool:
    """Sylvester test for a symmetric matrix, done as one elimination pass.

    The k-th pivot of elimination without pivoting equals the ratio of the
    k-th and (k-1)-th leading principal minors, so all minors are positive
    exactly when all pivots are.
    """
    n = a.shape[0]
    if mode == APPROX:
        sym = np.array(a, dtype=float)
        return bool(np.min(np.linalg.eigvalsh(sym)) > eps) if n else True
    m = [[Fraction(v) for v in row] for row in a]
    for k in range(n):
        if m[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return True
