"""Scalar modes and a small exact arithmetic for real quadratic surds.

Every algebra fixes one of two modes:

``"exact"``
    entries are :class:`fractions.Fraction`, stored in numpy ``object`` arrays;
    zero tests are exact.
``"approx"``
    entries are ``float64``; zero tests use an absolute tolerance.

:class:`Surd` covers the one place where exact data leaves the rationals:
dividing a rational tensor by ``sqrt(a^2)`` for a rational ``a^2`` that is
not a square.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import numpy as np
from sympy import factorint

EXACT = "exact"
APPROX = "approx"
MODES = (EXACT, APPROX)
DEFAULT_EPS = 1e-9


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown scalar mode {mode!r}; expected one of {MODES}")
    return mode


def to_scalar(x, mode: str = EXACT):
    """Coerce ``x`` (int, str ``"p/q"``, Fraction, float) to the mode's scalar type."""
    if mode == APPROX:
        if isinstance(x, str):
            return float(Fraction(x))
        return float(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        # decimal reading, so 0.1 means 1/10 and not the binary expansion
        return Fraction(repr(x))
    if isinstance(x, (int, str, Rational)):
        return Fraction(x)
    if isinstance(x, np.integer):
        return Fraction(int(x))
    if isinstance(x, np.floating):
        return Fraction(repr(float(x)))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


def asarray(data, mode: str = EXACT) -> np.ndarray:
    arr = np.asarray(data, dtype=object)
    if mode == APPROX:
        return np.vectorize(float, otypes=[float])(arr) if arr.size else arr.astype(float)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_scalar(v, EXACT)
    return out


def zeros(shape, mode: str = EXACT) -> np.ndarray:
    if mode == APPROX:
        return np.zeros(shape)
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n: int, mode: str = EXACT) -> np.ndarray:
    out = zeros((n, n), mode)
    for i in range(n):
        out[i, i] = Fraction(1) if mode == EXACT else 1.0
    return out


def unit(n: int, i: int, mode: str = EXACT) -> np.ndarray:
    v = zeros(n, mode)
    v[i] = Fraction(1) if mode == EXACT else 1.0
    return v


def is_zero(x, mode: str = EXACT, eps: float = DEFAULT_EPS) -> bool:
    if mode == APPROX:
        return abs(x) <= eps
    return x == 0


def all_zero(a, mode: str = EXACT, eps: float = DEFAULT_EPS) -> bool:
    a = np.asarray(a)
    if mode == APPROX:
        return a.size == 0 or float(np.max(np.abs(a.astype(float)))) <= eps
    return all(v == 0 for v in a.flat)


def first_nonzero(a, mode: str = EXACT, eps: float = DEFAULT_EPS):
    """Index and value of the first entry of ``a`` that is not zero, or ``None``."""
    a = np.asarray(a)
    for idx, v in np.ndenumerate(a):
        if not is_zero(v, mode, eps):
            return idx, v
    return None


# ---------------------------------------------------------------------------
# quadratic surds

def squarefree_split(n: int) -> tuple[int, int]:
    """Write a positive integer as ``k**2 * d`` with ``d`` squarefree."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    k, d = 1, 1
    for p, e in factorint(n).items():
        k *= p ** (e // 2)
        if e % 2:
            d *= p
    return k, d


class Surd:
    """A finite sum ``sum_d c_d * sqrt(d)`` with rational ``c_d`` and squarefree ``d``.

    Square roots of distinct squarefree integers are linearly independent over
    the rationals, so equality of the coefficient tables is exact equality of
    the real numbers.  Rational values keep ``d = 1`` only and compare (and
    hash) equal to the matching :class:`~fractions.Fraction`.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[int, Fraction] = {}
        for d, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[int(d)] = clean.get(int(d), Fraction(0)) + c
        self.terms = {d: c for d, c in sorted(clean.items()) if c}

    @classmethod
    def sqrt(cls, q) -> Surd:
        """Exact square root of a non-negative rational."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return cls()
        # sqrt(p/r) = sqrt(p*r)/r
        k, d = squarefree_split(q.numerator * q.denominator)
        return cls({d: Fraction(k, q.denominator)})

    @staticmethod
    def _coerce(other):
        if isinstance(other, Surd):
            return other
        if isinstance(other, (int, Fraction, np.integer)):
            return Surd({1: Fraction(int(other)) if isinstance(other, np.integer) else other})
        return None

    def is_rational(self) -> bool:
        return all(d == 1 for d in self.terms)

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is irrational")
        return self.terms.get(1, Fraction(0))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return float(self) + other if isinstance(other, float) else NotImplemented
        out = dict(self.terms)
        for d, c in o.terms.items():
            out[d] = out.get(d, Fraction(0)) + c
        return Surd(out)

    __radd__ = __add__

    def __neg__(self):
        return Surd({d: -c for d, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return float(self) - other if isinstance(other, float) else NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return float(self) * other if isinstance(other, float) else NotImplemented
        out: dict[int, Fraction] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in o.terms.items():
                g = math.gcd(d1, d2)
                d = (d1 // g) * (d2 // g)
                out[d] = out.get(d, Fraction(0)) + c1 * c2 * g
        return Surd(out)

    __rmul__ = __mul__

    def inverse(self) -> Surd:
        if not self.terms:
            raise ZeroDivisionError("division by zero surd")
        if len(self.terms) != 1:
            raise ValueError("only single-term surds can be inverted")
        (d, c), = self.terms.items()
        return Surd({d: 1 / (c * d)})

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return float(self) / other if isinstance(other, float) else NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                return float(self) == other
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational())
        return hash(tuple(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __float__(self):
        return float(sum(float(c) * math.sqrt(d) for d, c in self.terms.items()))

    def __abs__(self):
        return -self if float(self) < 0 else self

    def __repr__(self):
        if not self.terms:
            return "Surd(0)"
        parts = [str(c) if d == 1 else f"{c}*sqrt({d})" for d, c in self.terms.items()]
        return "Surd(" + " + ".join(parts) + ")"

    def __str__(self):
        if not self.terms:
            return "0"
        out = ""
        for d, c in self.terms.items():
            sign = "-" if c < 0 else "+"
            c = abs(c)
            body = str(c) if d == 1 else (f"sqrt({d})" if c == 1 else f"{c}*sqrt({d})")
            out += (f" {sign} " if out else ("-" if sign == "-" else "")) + body
        return out


def sqrt_scalar(q, mode: str = EXACT):
    """Square root in the mode's arithmetic; exact results stay rational when possible."""
    if mode == APPROX:
        return math.sqrt(q)
    s = Surd.sqrt(q)
    return s.rational() if s.is_rational() else s


def simplify(x):
    """Collapse rational surds back to :class:`Fraction`."""
    if isinstance(x, Surd) and x.is_rational():
        return x.rational()
    return x


def simplify_array(a: np.ndarray) -> np.ndarray:
    if a.dtype != object:
        return a
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = simplify(v)
    return out
