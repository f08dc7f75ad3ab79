"""Command-line front end.

Every subcommand reads one input (a JSON algebra document, or an edge list
turned into a graph algebra) and prints a JSON report.  Reports are
deterministic: identical inputs and flags give byte-identical output unless
``--timing`` is requested.

Exit status is 0 on success, 1 on invalid input (with a JSON error document)
and 2 when a certified invariant fails.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import os
import random
import sys
import time
from importlib import resources
from pathlib import Path

import numpy as np

from . import io
from .algebra import (
    InvariantViolation,
    MetricLieAlgebra,
    Subspace,
    ValidationError,
    center,
    derived,
    intersection,
    is_two_step,
    restrict,
    zav_split,
)
from .connection import (
    endo_from_form,
    form_from_endo,
    is_parallel,
    levi_civita,
    metric_compatibility_defect,
    torsion_defect,
)
from .graphs import GraphAlgebra, build_complex, build_real
from .ky import (
    codazzi_space,
    commuting_skew_space,
    exterior_matches_covariant,
    is_killing_tensor,
    is_ky,
    ky_space_2step,
    ky_space_generic,
    parallel_skew_space,
)
from .scalars import DEFAULT_EPS, EXACT, MODES, all_zero, identity, zeros
from .structure import (
    canonical_form,
    eigen_blocks,
    extract_complex_structure,
    image,
    is_complex_structure,
    is_invertible,
    restrict_endo,
    split_ker_im,
)

DEFAULT_SEED = 1729
SEED_ENV = "KYFORM_SEED"
ALGEBRA_COMMANDS = ("info", "ky-solve", "decompose", "complex-structure", "connection", "verify")


def seed_from_env() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def data_path(name: str) -> Path:
    """Path of a file shipped in ``kyform/data``."""
    return Path(str(resources.files("kyform") / "data" / name))


# -- inputs -----------------------------------------------------------------

class Input:
    """A parsed input: the algebra plus, for graph inputs, the graph algebra."""

    def __init__(self, path: str, args):
        self.path = path
        p = Path(path)
        if not p.is_file():
            raise ValidationError(f"input file not found: {path}")
        text = p.read_text()
        self.sha256 = io.digest(text)
        self.graph_algebra: GraphAlgebra | None = None
        if p.suffix == ".json":
            if getattr(args, "complexify", False):
                raise ValidationError("--complexify applies to edge-list inputs only")
            self.kind = "algebra"
            self.L = io.load_algebra(p, args.mode, args.eps)
        else:
            self.kind = "graph"
            G = io.load_graph(p)
            build = build_complex if getattr(args, "complexify", False) else build_real
            self.graph_algebra = build(G, args.mode or EXACT)
            L = self.graph_algebra.algebra
            if args.eps is not None:
                L = L.with_mode(L.mode, args.eps)
                self.graph_algebra = GraphAlgebra(
                    L, G, self.graph_algebra.vertex_index, self.graph_algebra.edge_index,
                    self.graph_algebra.complexified, self.graph_algebra.J,
                )
            self.L = L

    def describe(self) -> dict:
        d = {"source": self.path, "kind": self.kind, "sha256": self.sha256}
        if self.graph_algebra is not None:
            G = self.graph_algebra.graph
            d["graph"] = {"vertices": G.n_vertices, "edges": [list(e) for e in G.edges],
                          "complexified": self.graph_algebra.complexified}
        return d


def _load_tensor(path: str, L: MetricLieAlgebra) -> np.ndarray:
    import json

    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read tensor file {path}: {exc}") from exc
    rows = doc.get("matrix") if isinstance(doc, dict) else doc
    T = io.matrix_from_json(rows, L.mode)
    if T.shape != (L.dim, L.dim):
        raise ValidationError(f"tensor must be {L.dim} x {L.dim}")
    return T


def _select_tensor(inp: Input, args) -> tuple[np.ndarray, str]:
    """The user's tensor, or the requested element of the Killing-Yano basis."""
    L = inp.L
    if args.tensor:
        return _load_tensor(args.tensor, L), args.tensor
    space = ky_space_2step(L) if is_two_step(L) else ky_space_generic(L)
    if space.dim == 0:
        return zeros((L.dim, L.dim), L.mode), "zero (no Killing-Yano tensors)"
    k = args.index
    if not 1 <= k <= space.dim:
        raise ValidationError(f"--index must lie in 1..{space.dim}")
    return space.basis[k - 1], f"Killing-Yano basis element {k}"


# -- commands -----------------------------------------------------------------

def cmd_info(inp: Input, args) -> dict:
    L = inp.L
    out = {
        "dim": L.dim,
        "mode": L.mode,
        "identity_metric": L.is_identity_metric,
        "nonzero_brackets": len(L.brackets),
        "abelian": L.is_abelian,
        "two_step": is_two_step(L),
        "center_rank": center(L).rank,
        "derived_rank": derived(L).rank,
        "labels": [L.label(i) for i in range(L.dim)],
    }
    if out["two_step"]:
        a, nprime, v = zav_split(L)
        out["split_ranks"] = {"a": a.rank, "derived": nprime.rank, "v": v.rank}
    return out


def cmd_ky_solve(inp: Input, args) -> dict:
    L = inp.L
    two = is_two_step(L)
    method = args.method
    if method == "auto":
        method = "2step" if two else "generic"
    space = ky_space_2step(L) if method == "2step" else ky_space_generic(L)
    cross = None
    if two and args.cross_check:
        other = ky_space_generic(L) if method == "2step" else ky_space_2step(L)
        cross = space.same_span(other)
        if not cross:
            raise InvariantViolation("generic and 2-step Killing-Yano solvers disagree")
    return {
        "dim": space.dim,
        "basis": [io.matrix_to_json(T) for T in space.basis],
        "method": method,
        "cross_check": cross,
    }


def _blocks_json(blocks) -> dict:
    return {
        "a_squared": [io.scalar_to_json(c) for c in blocks.squares],
        "W": [io.vectors_to_json(S) for S in blocks.W],
        "commutators": [io.vectors_to_json(S) for S in blocks.commutators],
    }


def cmd_decompose(inp: Input, args) -> dict:
    L = inp.L
    T, origin = _select_tensor(inp, args)
    C = levi_civita(L)
    split = split_ker_im(L, T, C)
    out = {
        "tensor": {"origin": origin, "matrix": io.matrix_to_json(T)},
        "kernel": io.vectors_to_json(split.n1),
        "image": io.vectors_to_json(split.n2),
        "certificates": {k: bool(c) for k, c in sorted(split.ideal_certificates.items())},
        "parallel": is_parallel(C, T),
        "image_in_center": center(L).contains_subspace(split.n2),
        "blocks": None,
        "canonical_form": None,
    }
    if is_invertible(L, T):
        blocks = eigen_blocks(L, T, C)
        out["blocks"] = _blocks_json(blocks)
        if len(blocks) == 1 and zav_split(L)[0].rank == 0:
            cf = canonical_form(L, T, C)
            out["canonical_form"] = {
                "p": cf.p, "q": cf.q, "a_squared": io.scalar_to_json(cf.a_squared),
                "basis_change": io.matrix_to_json(cf.basis_change),
                "template": io.matrix_to_json(cf.template),
            }
    return out


def cmd_complex_structure(inp: Input, args) -> dict:
    L = inp.L
    T, origin = _select_tensor(inp, args)
    cs = extract_complex_structure(L, T)
    J = cs.J
    out = {
        "tensor": {"origin": origin, "matrix": io.matrix_to_json(T)},
        "J": io.matrix_to_json(J),
        "blocks": _blocks_json(cs.blocks),
        "certificates": {
            "square_is_minus_identity": all_zero(J @ J + identity(L.dim, L.mode), L.mode, L.eps),
            "orthogonal": all_zero(J.T @ L.metric @ J - L.metric, L.mode, L.eps),
            "bi_invariant": bool(is_complex_structure(L, J)),
        },
    }
    ga = inp.graph_algebra
    if ga is not None and ga.complexified:
        sign = None
        if all_zero(J - ga.J, L.mode, L.eps):
            sign = "+"
        elif all_zero(J + ga.J, L.mode, L.eps):
            sign = "-"
        out["native_J_sign"] = sign
    return out


def cmd_connection(inp: Input, args) -> dict:
    C = levi_civita(inp.L)
    out = {
        "metric_compatible": metric_compatibility_defect(C) is None,
        "torsion_free": torsion_defect(C) is None,
    }
    if args.dump:
        out["nabla"] = [io.matrix_to_json(N) for N in C.nabla]
    return out


# -- verify -------------------------------------------------------------------

def _check(name, status, detail=None) -> dict:
    if status is None:
        s = "skip"
    else:
        s = "pass" if status else "fail"
    return {"name": name, "status": s, "detail": detail}


def _random_skew(L: MetricLieAlgebra, rng: random.Random) -> np.ndarray:
    n = L.dim
    W = zeros((n, n), L.mode)
    for j in range(n):
        for k in range(j + 1, n):
            c = rng.randint(-5, 5)
            W[j, k] = c
            W[k, j] = -c
    return W if L.mode == EXACT else W.astype(float)


def _spot_elements(space) -> list[np.ndarray]:
    """Basis elements plus one combination with distinct coefficients."""
    if space.dim == 0:
        return []
    els = list(space.basis)
    if space.dim > 1:
        els.append(space.combination(range(1, space.dim + 1)))
    return els


def _is_scalar(L, A) -> bool:
    c = A[0, 0]
    return all_zero(A - c * identity(L.dim, L.mode), L.mode, L.eps)


def verify_battery(L: MetricLieAlgebra, seed: int = DEFAULT_SEED) -> tuple[list[dict], int]:
    """Run every applicable structural check; returns the checks and the KY dimension."""
    checks = []
    C = levi_civita(L)
    checks.append(_check("jacobi_identity", L.jacobi_violation() is None))
    checks.append(_check("metric_compatible_connection", metric_compatibility_defect(C) is None))
    checks.append(_check("torsion_free_connection", torsion_defect(C) is None))

    generic = ky_space_generic(L, C)
    checks.append(_check("ky_generic_members", all(is_ky(L, C, T) for T in generic.basis),
                         {"dim": generic.dim}))
    two = is_two_step(L)
    if L.is_abelian:
        n = L.dim
        checks.append(_check("abelian_count", generic.dim == n * (n - 1) // 2,
                             {"expected": n * (n - 1) // 2}))
    if two:
        fast = ky_space_2step(L)
        checks.append(_check("solver_equivalence", fast.same_span(generic), {"dim": fast.dim}))
    else:
        checks.append(_check("solver_equivalence", None, "not 2-step"))

    ok = all(exterior_matches_covariant(L, C, form_from_endo(L, T)) for T in generic.basis)
    checks.append(_check("exterior_equals_three_covariant", ok))
    rng = random.Random(seed)
    tried = failed = 0
    for _ in range(50):
        if tried == 5:
            break
        W = _random_skew(L, rng)
        if generic.contains(endo_from_form(L, W)):
            continue
        tried += 1
        failed += not exterior_matches_covariant(L, C, W)
    checks.append(_check("non_ky_forms_break_equality", failed == tried if tried else None,
                         {"tried": tried}))

    if not two:
        for name in ("ker_image_split", "parallel_iff_image_central", "no_parallel_ky_when_center_derived",
                     "no_invertible_parallel_skew", "complex_structure_from_invertible_ky",
                     "no_nearly_kahler", "codazzi_parallel", "square_is_killing",
                     "invariant_subalgebra_restriction"):
            checks.append(_check(name, None, "not 2-step"))
        return checks, generic.dim

    z = center(L)
    elements = _spot_elements(generic)
    ok = True
    for T in elements:
        try:
            split_ker_im(L, T, C)
        except InvariantViolation:
            ok = False
    checks.append(_check("ker_image_split", ok, {"tensors": len(elements)}))
    ok = all(is_parallel(C, T) == z.contains_subspace(image(L, T)) for T in elements)
    checks.append(_check("parallel_iff_image_central", ok))

    par = parallel_skew_space(L, C)
    if z.same_span(derived(L)):
        a = Subspace(par.coords.shape[1], par.coords, L.mode, L.eps)
        b = Subspace(generic.coords.shape[1], generic.coords, L.mode, L.eps)
        checks.append(_check("no_parallel_ky_when_center_derived", intersection(a, b).rank == 0))
    else:
        checks.append(_check("no_parallel_ky_when_center_derived", None, "center larger than derived"))
    ok = all(not is_invertible(L, P) for P in _spot_elements(par))
    checks.append(_check("no_invertible_parallel_skew", ok, {"parallel_dim": par.dim}))

    invertible = [T for T in elements if is_invertible(L, T)]
    if invertible:
        cs = extract_complex_structure(L, invertible[0], C)
        checks.append(_check("complex_structure_from_invertible_ky", bool(is_complex_structure(L, cs.J))))
    else:
        checks.append(_check("complex_structure_from_invertible_ky", None, "no invertible element found"))

    # a KY element squaring to a negative multiple of Id would rescale to a nearly Kähler J
    ok = not any(_is_scalar(L, T @ T) for T in elements)
    checks.append(_check("no_nearly_kahler", ok if elements else None))

    cod = codazzi_space(L)
    checks.append(_check("codazzi_parallel", all(is_parallel(C, B) for B in cod.basis), {"dim": cod.dim}))
    ok = all(is_killing_tensor(L, C, -(T @ T)) for T in generic.basis)
    checks.append(_check("square_is_killing", ok if generic.dim else None))

    ok = True
    for T in generic.basis:
        S = image(L, T)
        if S.rank:
            sub = restrict(L, S)
            ok = ok and bool(is_ky(sub, None, restrict_endo(L, S, T)))
    checks.append(_check("invariant_subalgebra_restriction", ok if generic.dim else None))
    return checks, generic.dim


def cmd_verify(inp: Input, args) -> dict:
    checks, dim = verify_battery(inp.L, seed_from_env())
    return {
        "ky_dim": dim,
        "checks": checks,
        "all_passed": all(c["status"] != "fail" for c in checks),
    }


# -- graphs -------------------------------------------------------------------

def cmd_from_graph(inp: Input, args) -> dict:
    if inp.kind != "graph":
        raise ValidationError("from-graph needs an edge-list input")
    if args.then:
        return {"then": args.then, "result": COMMANDS[args.then](inp, args)}
    return {"algebra": io.algebra_to_dict(inp.L)}


def census_rows(graphs, max_vertices: int, mode: str = EXACT) -> list[dict]:
    rows = []
    for G in graphs:
        if G.n_vertices > max_vertices or G.m == 0:
            continue
        Lc = build_complex(G, mode).algebra
        Lr = build_real(G, mode).algebra
        rows.append({
            "name": G.name,
            "vertices": G.n_vertices,
            "edges": G.m,
            "connected": G.is_connected(),
            "ky_dim_real": ky_space_2step(Lr).dim,
            "ky_dim_complex": ky_space_2step(Lc).dim,
            "commuting_dim_complex": commuting_skew_space(Lc, 1).dim,
        })
    return rows


def run_census(args) -> tuple[dict | None, str | None]:
    path = args.graphs or str(data_path("connected_graphs_6.txt"))
    graphs = io.load_graph_list(path)
    rows = census_rows(graphs, args.max_vertices, args.mode or EXACT)
    if args.csv:
        buf = _io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else ["name"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return None, buf.getvalue()
    return {
        "command": "census",
        "input": {"source": path, "sha256": io.digest(Path(path).read_text())},
        "max_vertices": args.max_vertices,
        "rows": rows,
        "summary": {
            "graphs": len(rows),
            "complex_dim_one": sum(r["ky_dim_complex"] == 1 for r in rows if r["connected"]),
        },
    }, None


COMMANDS = {
    "info": cmd_info,
    "ky-solve": cmd_ky_solve,
    "decompose": cmd_decompose,
    "complex-structure": cmd_complex_structure,
    "connection": cmd_connection,
    "verify": cmd_verify,
    "from-graph": cmd_from_graph,
}


# -- argument parsing -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=MODES, default=None, help="scalar arithmetic (default: exact)")
    common.add_argument("--eps", type=float, default=None,
                        help=f"zero tolerance in approx mode (default {DEFAULT_EPS})")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="include wall-clock time in the report")

    def with_input(p):
        p.add_argument("input", help="JSON algebra document or edge-list graph file")
        p.add_argument("--complexify", action="store_true",
                       help="build the complex graph algebra from an edge list")

    def with_tensor(p):
        p.add_argument("--tensor", default=None, help="JSON matrix of the tensor to analyse")
        p.add_argument("--index", type=int, default=1,
                       help="otherwise use this Killing-Yano basis element (1-based)")

    parser = argparse.ArgumentParser(
        prog="kyform", description="Killing-Yano 2-forms on metric Lie algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    with_input(sub.add_parser("info", parents=[common], help="basic structure of the algebra"))
    p = sub.add_parser("ky-solve", parents=[common], help="basis of the Killing-Yano tensors")
    with_input(p)
    p.add_argument("--method", choices=("auto", "generic", "2step"), default="auto")
    p.add_argument("--no-cross-check", dest="cross_check", action="store_false",
                   help="skip solving with the other method")
    for name, hlp in (("decompose", "ker/Im split, eigen-blocks, canonical form"),
                      ("complex-structure", "bi-invariant complex structure from an invertible KY tensor")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        with_input(p)
        with_tensor(p)
    p = sub.add_parser("connection", parents=[common], help="Levi-Civita connection checks")
    with_input(p)
    p.add_argument("--dump", action="store_true", help="include the matrices of nabla_{e_i}")
    with_input(sub.add_parser("verify", parents=[common], help="run the structural check battery"))
    p = sub.add_parser("from-graph", parents=[common], help="build a graph algebra")
    with_input(p)
    p.add_argument("--then", choices=ALGEBRA_COMMANDS, default=None,
                   help="run this command on the built algebra")
    with_tensor(p)
    p.add_argument("--method", choices=("auto", "generic", "2step"), default="auto")
    p.add_argument("--no-cross-check", dest="cross_check", action="store_false")
    p.add_argument("--dump", action="store_true")
    p = sub.add_parser("census", parents=[common], help="KY dimensions over a list of graphs")
    p.add_argument("graphs", nargs="?", default=None,
                   help="graph list file (default: shipped connected graphs up to 6 vertices)")
    p.add_argument("--max-vertices", type=int, default=6)
    p.add_argument("--csv", action="store_true", help="print a CSV table")
    return parser


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _error(kind: str, message: str) -> str:
    return io.dump_json({"error": {"type": kind, "message": message}})


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        if args.command == "census":
            report, text = run_census(args)
        else:
            inp = Input(args.input, args)
            payload = COMMANDS[args.command](inp, args)
            report = {"command": args.command, "input": inp.describe(), "mode": inp.L.mode}
            report.update(payload)
            text = None
        if report is not None:
            if args.timing:
                report["seconds"] = round(time.perf_counter() - start, 3)
            text = io.dump_json(report)
    except InvariantViolation as exc:
        _emit(_error("InvariantViolation", str(exc)), args.out)
        return 2
    except ValidationError as exc:
        _emit(_error(type(exc).__name__, str(exc)), args.out)
        return 1
    _emit(text, args.out)
    if args.command == "verify" and not report["all_passed"]:
        return 2
    if args.command == "from-graph" and args.then == "verify" and not report["result"]["all_passed"]:
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
