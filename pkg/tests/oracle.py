"""Independent dense reference for the Killing-Yano equation, written with sympy only.

Builds the Levi-Civita connection from the Koszul formula with dense sympy
matrices, writes the Killing-Yano equation for a symbolic skew form and takes
the sympy nullspace.  Shares no code with the package solvers.
"""

import itertools

import sympy as sp


def dense_structure(dim, brackets):
    """``c[i][j]`` is the sympy column vector of ``[e_i, e_j]``; ``brackets`` maps ``(i, j)`` to ``{k: c}``."""
    zero = sp.zeros(dim, 1)
    c = [[zero for _ in range(dim)] for _ in range(dim)]
    for (i, j), out in brackets.items():
        v = sp.zeros(dim, 1)
        for k, x in out.items():
            v[k] = sp.Rational(x)
        c[i][j] = v
        c[j][i] = -v
    return c


def christoffel(dim, brackets, metric=None):
    """``nab[i][j]`` = column vector of ``nabla_{e_i} e_j``."""
    G = sp.eye(dim) if metric is None else sp.Matrix(metric).applyfunc(sp.Rational)
    Gi = G.inv()
    c = dense_structure(dim, brackets)

    def g(x, y):
        return (x.T * G * y)[0, 0]

    e = [sp.eye(dim)[:, k] for k in range(dim)]
    nab = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            low = sp.Matrix(
                [sp.Rational(1, 2) * (g(c[i][j], e[k]) - g(c[j][k], e[i]) + g(c[k][i], e[j])) for k in range(dim)]
            )
            nab[i][j] = Gi * low
    return nab


def ky_nullspace(dim, brackets, metric=None):
    """Basis of Killing-Yano forms as sympy matrices ``Omega[j, k] = omega(e_j, e_k)``."""
    nab = christoffel(dim, brackets, metric)
    pairs = list(itertools.combinations(range(dim), 2))
    syms = sp.symbols(f"w0:{len(pairs)}")
    W = sp.zeros(dim, dim)
    for s, (p, q) in zip(syms, pairs):
        W[p, q] = s
        W[q, p] = -s

    def omega(x, y):
        return (x.T * W * y)[0, 0]

    e = [sp.eye(dim)[:, k] for k in range(dim)]

    def dw(i, j, k):
        return -omega(nab[i][j], e[k]) - omega(e[j], nab[i][k])

    eqs = []
    for i, j, k in itertools.product(range(dim), repeat=3):
        expr = sp.expand(dw(i, j, k) + dw(j, i, k))
        if expr != 0:
            eqs.append(expr)
    if not eqs:
        return [_form(v, dim, pairs) for v in sp.eye(len(pairs)).columnspace()]
    A, _ = sp.linear_eq_to_matrix(eqs, syms)
    return [_form(v, dim, pairs) for v in A.nullspace()]


def _form(v, dim, pairs):
    W = sp.zeros(dim, dim)
    for x, (p, q) in zip(v, pairs):
        W[p, q] = x
        W[q, p] = -x
    return W
