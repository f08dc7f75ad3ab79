"""2-step nilpotent metric Lie algebras built from simple graphs.

Vertices are numbered ``1..n`` as in the usual graph notation; the algebra
indices they map to are 0-based.  Edges are labelled ``z_1..z_m`` in
lexicographic order of ``(min, max)`` vertex.

The real algebra has basis ``e_1..e_n, z_1..z_m`` with ``[e_i, e_j] = z_k``
when ``z_k`` joins ``i < j``.  The complexification, viewed as a real
algebra, interleaves real and imaginary parts,
``e_1, f_1, ..., e_n, f_n, z_1, w_1, ..., z_m, w_m``, carries the complex
structure ``J e_i = f_i``, ``J z_k = w_k`` and has, for every edge ``i < j``,

    [e_i, e_j] = z_k,  [e_i, f_j] = w_k,  [f_i, e_j] = w_k,  [f_i, f_j] = -z_k.

Both come with the metric making the listed basis orthonormal.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .algebra import MetricLieAlgebra, ValidationError
from .scalars import EXACT, zeros


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected graph without loops or multiple edges on vertices ``1..n_vertices``."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    name: str = ""

    def __init__(self, n_vertices: int, edges: Iterable, name: str = ""):
        if n_vertices < 1:
            raise ValidationError("a graph needs at least one vertex")
        clean = set()
        for e in edges:
            i, j = (int(t) for t in e)
            if i == j:
                raise ValidationError(f"loop at vertex {i}")
            if not (1 <= i <= n_vertices and 1 <= j <= n_vertices):
                raise ValidationError(f"edge {{{i}, {j}}} uses a vertex outside 1..{n_vertices}")
            key = (min(i, j), max(i, j))
            if key in clean:
                raise ValidationError(f"duplicate edge {key}")
            clean.add(key)
        object.__setattr__(self, "n_vertices", int(n_vertices))
        object.__setattr__(self, "edges", tuple(sorted(clean)))
        object.__setattr__(self, "name", name)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbours(self, v: int) -> list[int]:
        return sorted({j for i, j in self.edges if i == v} | {i for i, j in self.edges if j == v})

    def isolated_vertices(self) -> list[int]:
        touched = {v for e in self.edges for v in e}
        return [v for v in range(1, self.n_vertices + 1) if v not in touched]

    def is_connected(self) -> bool:
        return len(connected_components(self)) == 1


def connected_components(G: SimpleGraph) -> list[list[int]]:
    """Vertex sets of the connected components, each sorted, ordered by least vertex."""
    adj = {v: [] for v in range(1, G.n_vertices + 1)}
    for i, j in G.edges:
        adj[i].append(j)
        adj[j].append(i)
    seen: set[int] = set()
    comps = []
    for start in adj:
        if start in seen:
            continue
        comp, queue = [], deque([start])
        seen.add(start)
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


@dataclass(frozen=True, eq=False)
class GraphAlgebra:
    """A graph algebra with its bookkeeping.

    ``vertex_index[v]`` and ``edge_index[k]`` give the 0-based index of the
    real part of vertex ``v`` / edge ``k`` (1-based ``k`` in edge order); in
    the complexified case the imaginary part sits at the next index.
    """

    algebra: MetricLieAlgebra
    graph: SimpleGraph | None
    vertex_index: dict
    edge_index: dict
    complexified: bool
    J: np.ndarray | None = None

    @property
    def L(self) -> MetricLieAlgebra:
        return self.algebra


def _require_edges(G: SimpleGraph):
    if G.m < 1:
        raise ValidationError("the graph construction needs at least one edge")


def build_real(G: SimpleGraph, mode: str = EXACT) -> GraphAlgebra:
    _require_edges(G)
    n, m = G.n_vertices, G.m
    dim = n + m
    br = {(i - 1, j - 1): {n + k: 1} for k, (i, j) in enumerate(G.edges)}
    labels = [f"e{i}" for i in range(1, n + 1)] + [f"z{k}" for k in range(1, m + 1)]
    L = MetricLieAlgebra(dim, br, None, mode, labels=labels, validate=False)
    return GraphAlgebra(
        L,
        G,
        {v: v - 1 for v in range(1, n + 1)},
        {k: n + k - 1 for k in range(1, m + 1)},
        False,
    )


def _complex_table(pairs, n_generators: int, n_central: int):
    """Real brackets of the complex brackets ``[X_a, X_b] = Z_c`` for ``(a, b, c)`` in ``pairs``."""
    br = {}
    for a, b, c in pairs:
        e_a, f_a, e_b, f_b = 2 * a, 2 * a + 1, 2 * b, 2 * b + 1
        z, w = 2 * n_generators + 2 * c, 2 * n_generators + 2 * c + 1
        for key, val in (((e_a, e_b), {z: 1}), ((e_a, f_b), {w: 1}),
                         ((f_a, e_b), {w: 1}), ((f_a, f_b), {z: -1})):
            if key in br:
                for k, x in val.items():
                    br[key][k] = br[key].get(k, 0) + x
            else:
                br[key] = dict(val)
    return br


def _native_J(dim: int, mode: str) -> np.ndarray:
    J = zeros((dim, dim), mode)
    for r in range(0, dim, 2):
        J[r + 1, r] = 1
        J[r, r + 1] = -1
    return J if mode == EXACT else J.astype(float)


def build_complex(G: SimpleGraph, mode: str = EXACT) -> GraphAlgebra:
    """The complex graph algebra as a real ``2(n+m)``-dimensional metric Lie algebra."""
    _require_edges(G)
    n, m = G.n_vertices, G.m
    dim = 2 * (n + m)
    br = _complex_table([(i - 1, j - 1, k) for k, (i, j) in enumerate(G.edges)], n, m)
    labels = []
    for i in range(1, n + 1):
        labels += [f"e{i}", f"f{i}"]
    for k in range(1, m + 1):
        labels += [f"z{k}", f"w{k}"]
    L = MetricLieAlgebra(dim, br, None, mode, labels=labels, validate=False)
    return GraphAlgebra(
        L,
        G,
        {v: 2 * (v - 1) for v in range(1, n + 1)},
        {k: 2 * n + 2 * (k - 1) for k in range(1, m + 1)},
        True,
        _native_J(dim, mode),
    )


def canonical_ky(A: GraphAlgebra) -> np.ndarray:
    """The invertible Killing-Yano tensor ``J`` on vertices, ``3J`` on edges.

    Isolated vertices span the part of the center orthogonal to the
    commutator ideal; there the tensor is ``J`` as well.
    """
    if not A.complexified:
        raise ValidationError("canonical_ky needs a complexified graph algebra")
    T = A.J.copy()
    for k, idx in A.edge_index.items():
        T[idx + 1, idx] = 3 * A.J[idx + 1, idx]
        T[idx, idx + 1] = 3 * A.J[idx, idx + 1]
    return T


def heisenberg_complex(n: int, mode: str = EXACT) -> GraphAlgebra:
    """Real form of the complex Heisenberg algebra ``h_{2n+1}(C)``, orthonormal basis.

    Basis ``x_1, ix_1, y_1, iy_1, ..., x_n, ix_n, y_n, iy_n, z, iz`` with
    ``[x_a, y_a] = z``; ``n = 1`` coincides with the complexified single-edge graph.
    """
    if n < 1:
        raise ValidationError("heisenberg_complex needs n >= 1")
    gens = 2 * n
    dim = 2 * gens + 2
    br = _complex_table([(2 * a, 2 * a + 1, 0) for a in range(n)], gens, 1)
    labels = []
    for a in range(1, n + 1):
        labels += [f"x{a}", f"ix{a}", f"y{a}", f"iy{a}"]
    labels += ["z", "iz"]
    L = MetricLieAlgebra(dim, br, None, mode, labels=labels, validate=False)
    return GraphAlgebra(
        L,
        None,
        {v: 2 * (v - 1) for v in range(1, gens + 1)},
        {1: 2 * gens},
        True,
        _native_J(dim, mode),
    )


def satisfies_graph_property(L: MetricLieAlgebra, vertex_indices: Iterable[int]) -> bool:
    """No two distinct unordered pairs of the given basis elements share a nonzero bracket."""
    seen = {}
    for a, b in combinations(sorted(vertex_indices), 2):
        v = L.bracket(L.basis_vector(a), L.basis_vector(b))
        if all(x == 0 for x in v):
            continue
        key = tuple(v.tolist())
        if key in seen:
            return False
        seen[key] = (a, b)
    return True


# -- named families ---------------------------------------------------------

def path(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, i + 1) for i in range(1, n)], f"P{n}")


def cycle(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, i + 1) for i in range(1, n)] + [(1, n)], f"C{n}")


def star(leaves: int) -> SimpleGraph:
    """Star with one hub and ``leaves`` leaves (``S_k`` has ``k+1`` vertices)."""
    return SimpleGraph(leaves + 1, [(1, j) for j in range(2, leaves + 2)], f"S{leaves}")


def complete(n: int) -> SimpleGraph:
    return SimpleGraph(n, combinations(range(1, n + 1), 2), f"K{n}")


def disjoint_union(G: SimpleGraph, H: SimpleGraph) -> SimpleGraph:
    shift = G.n_vertices
    return SimpleGraph(
        G.n_vertices + H.n_vertices,
        list(G.edges) + [(i + shift, j + shift) for i, j in H.edges],
        f"{G.name}+{H.name}",
    )


def add_isolated(G: SimpleGraph, k: int = 1) -> SimpleGraph:
    return SimpleGraph(G.n_vertices + k, G.edges, f"{G.name}+{k}K1")


def random_connected(n: int, rng: random.Random, p: float = 0.3, name: str = "") -> SimpleGraph:
    """Random spanning tree plus independent extra edges with probability ``p``."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    edges = {tuple(sorted((order[k], order[rng.randrange(k)]))) for k in range(1, n)}
    for e in combinations(range(1, n + 1), 2):
        if e not in edges and rng.random() < p:
            edges.add(e)
    return SimpleGraph(n, edges, name)
