"""Reading and writing algebras, tensors and graphs.

JSON algebra documents use 1-based indices::

    {"dim": 3, "mode": "exact",
     "brackets": [{"i": 1, "j": 2, "out": [["3", "1"]]}],
     "metric": "identity", "labels": ["x", "y", "z"]}

``out`` lists ``[k, c]`` pairs meaning ``[e_i, e_j] = sum c e_k``.  Exact
scalars are strings ``"p/q"``; approximate ones are plain JSON numbers.  A
scalar ``r + s sqrt(d)`` is written ``{"r": "p/q", "s": "p/q", "d": d}``.

Edge lists are plain text: a header ``n m`` followed by ``m`` lines ``i j``
(1-based); ``#`` starts a comment.  A graph list file concatenates such
records, and a header may carry a third token naming the graph.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .algebra import MetricLieAlgebra, Subspace, ValidationError
from .graphs import SimpleGraph
from .scalars import APPROX, EXACT, Surd, check_mode, simplify, zeros


# -- scalars ----------------------------------------------------------------

def scalar_to_json(x):
    x = simplify(x)
    if isinstance(x, Surd):
        if len(x.terms) == 1 or (len(x.terms) == 2 and 1 in x.terms):
            d = max(x.terms)
            return {"r": str(x.terms.get(1, Fraction(0))), "s": str(x.terms[d]), "d": d}
        return {"terms": [{"c": str(c), "d": d} for d, c in x.terms.items()]}
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return float(x)


def _fraction(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"cannot parse scalar {s!r}") from exc


def scalar_from_json(obj, mode: str = EXACT):
    if isinstance(obj, dict):
        if "terms" in obj:
            x = Surd({int(t["d"]): _fraction(t["c"]) for t in obj["terms"]})
        else:
            x = Surd({1: _fraction(obj.get("r", "0")), int(obj["d"]): _fraction(obj["s"])})
        x = simplify(x)
        return float(x) if mode == APPROX else x
    if mode == APPROX:
        return float(_fraction(obj)) if isinstance(obj, str) else float(obj)
    if isinstance(obj, float):
        return Fraction(repr(obj))
    return _fraction(obj)


def matrix_to_json(A: np.ndarray) -> list:
    return [[scalar_to_json(x) for x in row] for row in A]


def matrix_from_json(rows, mode: str = EXACT) -> np.ndarray:
    try:
        data = [[scalar_from_json(x, mode) for x in row] for row in rows]
    except TypeError as exc:
        raise ValidationError("a matrix must be a list of rows") from exc
    if not data or any(len(r) != len(data[0]) for r in data):
        raise ValidationError("matrix rows have different lengths")
    return np.array(data, dtype=object if mode == EXACT else float)


def vectors_to_json(S: Subspace | np.ndarray) -> list:
    basis = S.basis if isinstance(S, Subspace) else S
    return [[scalar_to_json(x) for x in v] for v in basis]


# -- algebras ---------------------------------------------------------------

def algebra_to_dict(L: MetricLieAlgebra) -> dict:
    brackets = []
    for (i, j) in sorted(L.brackets):
        v = L.brackets[(i, j)]
        out = [[str(k + 1), scalar_to_json(c)] for k, c in enumerate(v) if c != 0]
        brackets.append({"i": i + 1, "j": j + 1, "out": out})
    doc = {
        "dim": L.dim,
        "mode": L.mode,
        "brackets": brackets,
        "metric": "identity" if L.is_identity_metric else matrix_to_json(L.metric),
    }
    if L.labels:
        doc["labels"] = list(L.labels)
    return doc


def _index(x, dim: int, what: str) -> int:
    try:
        k = int(x)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{what} index {x!r} is not an integer") from exc
    if not 1 <= k <= dim:
        raise ValidationError(f"{what} index {k} outside 1..{dim}")
    return k - 1


def algebra_from_dict(doc: dict, mode: str | None = None, eps: float | None = None) -> MetricLieAlgebra:
    """Parse and validate (Jacobi identity, positive definite metric)."""
    if not isinstance(doc, dict) or "dim" not in doc:
        raise ValidationError("an algebra document needs a 'dim' field")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ValidationError("'dim' must be a positive integer")
    mode = check_mode(mode or doc.get("mode", EXACT))
    br: dict = {}
    for entry in doc.get("brackets", []):
        i = _index(entry.get("i"), dim, "bracket")
        j = _index(entry.get("j"), dim, "bracket")
        if i == j:
            raise ValidationError(f"bracket of e{i + 1} with itself must not be listed")
        v = zeros(dim, mode)
        for k, c in entry.get("out", []):
            v[_index(k, dim, "output")] += scalar_from_json(c, mode)
        key, sign = ((i, j), 1) if i < j else ((j, i), -1)
        if key in br:
            raise ValidationError(f"bracket ({key[0] + 1}, {key[1] + 1}) listed twice")
        br[key] = sign * v
    metric = doc.get("metric", "identity")
    G = None if metric == "identity" else matrix_from_json(metric, mode)
    if G is not None and G.shape != (dim, dim):
        raise ValidationError(f"metric must be {dim} x {dim}")
    kwargs = {} if eps is None else {"eps": eps}
    return MetricLieAlgebra(dim, br, G, mode, labels=doc.get("labels"), **kwargs)


def load_algebra(path, mode: str | None = None, eps: float | None = None) -> MetricLieAlgebra:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg})") from exc
    return algebra_from_dict(doc, mode, eps)


def dump_json(obj) -> str:
    """Pretty, key-sorted JSON with a trailing newline (stable across runs)."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def digest(text: str | bytes) -> str:
    data = text.encode() if isinstance(text, str) else text
    return hashlib.sha256(data).hexdigest()


# -- graphs -----------------------------------------------------------------

def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _read_graph(lines, first) -> SimpleGraph:
    lineno, head = first
    if len(head) not in (2, 3):
        raise ValidationError(f"line {lineno}: expected header 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ValidationError(f"line {lineno}: header must be two integers") from exc
    name = head[2] if len(head) == 3 else ""
    edges = []
    for _ in range(m):
        try:
            lineno, tok = next(lines)
        except StopIteration:
            raise ValidationError(f"expected {m} edges, found {len(edges)}") from None
        if len(tok) != 2:
            raise ValidationError(f"line {lineno}: expected an edge 'i j'")
        try:
            edges.append((int(tok[0]), int(tok[1])))
        except ValueError as exc:
            raise ValidationError(f"line {lineno}: edge endpoints must be integers") from exc
    return SimpleGraph(n, edges, name)


def parse_edge_list(text: str) -> SimpleGraph:
    lines = _content_lines(text)
    try:
        first = next(lines)
    except StopIteration:
        raise ValidationError("empty edge list") from None
    G = _read_graph(lines, first)
    extra = next(lines, None)
    if extra is not None:
        raise ValidationError(f"line {extra[0]}: unexpected content after the last edge")
    return G


def parse_graph_list(text: str) -> list[SimpleGraph]:
    lines = _content_lines(text)
    out = []
    for first in lines:
        out.append(_read_graph(lines, first))
    return out


def format_edge_list(G: SimpleGraph, with_name: bool = False) -> str:
    head = f"{G.n_vertices} {G.m}" + (f" {G.name}" if with_name and G.name else "")
    return "\n".join([head] + [f"{i} {j}" for i, j in G.edges]) + "\n"


def load_graph(path) -> SimpleGraph:
    G = parse_edge_list(Path(path).read_text())
    if not G.name:
        G = SimpleGraph(G.n_vertices, G.edges, Path(path).stem)
    return G


def load_graph_list(path) -> list[SimpleGraph]:
    return parse_graph_list(Path(path).read_text())
