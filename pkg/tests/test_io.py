import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catalog import weighted_k2
from kyform import algebra, graphs, io
from kyform.algebra import ValidationError
from kyform.cli import data_path
from kyform.scalars import APPROX, Surd

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@given(fractions)
def test_fraction_round_trip(q):
    assert io.scalar_from_json(io.scalar_to_json(q)) == q


@given(fractions, fractions.filter(bool), st.sampled_from([2, 3, 5, 6, 7]))
def test_surd_round_trip(r, s, d):
    x = r + s * Surd.sqrt(d)
    doc = io.scalar_to_json(x)
    assert doc == {"r": str(r), "s": str(s), "d": d}
    assert io.scalar_from_json(doc) == x


def test_general_surd_round_trip():
    x = Surd.sqrt(2) + Surd.sqrt(3)
    doc = io.scalar_to_json(x)
    assert "terms" in doc
    assert io.scalar_from_json(doc) == x


def test_approx_scalars():
    assert io.scalar_to_json(0.25) == 0.25
    assert io.scalar_from_json("1/4", APPROX) == 0.25
    assert io.scalar_from_json({"r": "0", "s": "1", "d": 2}, APPROX) == pytest.approx(2 ** 0.5)


def test_bad_scalar():
    with pytest.raises(ValidationError):
        io.scalar_from_json("one half")


@pytest.mark.parametrize("L", [algebra.heisenberg(2), weighted_k2(), graphs.build_complex(graphs.path(3)).L])
def test_algebra_round_trip(L):
    doc = io.algebra_to_dict(L)
    text = io.dump_json(doc)
    M = io.algebra_from_dict(json.loads(text))
    assert M.dim == L.dim
    assert M.brackets.keys() == L.brackets.keys()
    assert all((M.brackets[k] == L.brackets[k]).all() for k in L.brackets)
    assert (M.metric == L.metric).all()
    assert io.dump_json(io.algebra_to_dict(M)) == text


def test_shipped_h3_document():
    L = io.load_algebra(data_path("h3.json"))
    assert L.dim == 3 and list(L.brackets) == [(0, 1)]
    assert io.algebra_to_dict(L)["brackets"] == [{"i": 1, "j": 2, "out": [["3", "1"]]}]


def test_reversed_bracket_order_is_negated():
    L = io.algebra_from_dict({"dim": 3, "brackets": [{"i": 2, "j": 1, "out": [["3", "1"]]}]})
    assert L.brackets[(0, 1)].tolist() == [0, 0, -1]


@pytest.mark.parametrize(
    "doc",
    [
        {},
        {"dim": 0},
        {"dim": 3, "brackets": [{"i": 1, "j": 4, "out": []}]},
        {"dim": 3, "brackets": [{"i": 1, "j": 1, "out": []}]},
        {"dim": 3, "brackets": [{"i": 1, "j": 2, "out": [["3", "1"]]}, {"i": 2, "j": 1, "out": []}]},
        {"dim": 2, "metric": [["1", "0"], ["0", "-1"]]},
        {"dim": 2, "metric": [["1", "0"]]},
        {"dim": 2, "mode": "symbolic"},
        # Jacobi fails: [e1,e2] = e3, [e1,e3] = e1
        {"dim": 3, "brackets": [{"i": 1, "j": 2, "out": [["3", "1"]]}, {"i": 1, "j": 3, "out": [["1", "1"]]}]},
    ],
)
def test_invalid_documents(doc):
    with pytest.raises((ValidationError, ValueError)):
        io.algebra_from_dict(doc)


def test_edge_list_parsing():
    G = io.parse_edge_list("# path\n3 2\n1 2  # first\n\n2 3\n")
    assert G.n_vertices == 3 and G.edges == ((1, 2), (2, 3))
    assert io.parse_edge_list(io.format_edge_list(G)).edges == G.edges


@pytest.mark.parametrize(
    "text",
    ["", "3\n", "3 2\n1 2\n", "2 1\n1 1\n", "2 1\n1 3\n", "2 1\n1 2\n1 2\n", "2 1\n1 x\n", "2 1\n1 2 3\n"],
)
def test_bad_edge_lists(text):
    with pytest.raises(ValidationError):
        io.parse_edge_list(text)


def test_graph_list_file():
    graphs_ = io.load_graph_list(data_path("connected_graphs_6.txt"))
    assert len(graphs_) == 142
    by_size = {}
    for G in graphs_:
        assert G.is_connected()
        by_size[G.n_vertices] = by_size.get(G.n_vertices, 0) + 1
    # connected graphs up to isomorphism on 2..6 vertices
    assert by_size == {2: 1, 3: 2, 4: 6, 5: 21, 6: 112}


def test_graph_list_round_trip():
    gs = [graphs.path(3), graphs.cycle(4)]
    text = "".join(io.format_edge_list(G, with_name=True) for G in gs)
    back = io.parse_graph_list(text)
    assert [G.name for G in back] == ["P3", "C4"]
    assert [G.edges for G in back] == [G.edges for G in gs]


def test_matrix_round_trip():
    A = np.array([[Fraction(1, 2), Surd.sqrt(2)], [0, -3]], dtype=object)
    back = io.matrix_from_json(json.loads(json.dumps(io.matrix_to_json(A))))
    assert (back == A).all()
    with pytest.raises(ValidationError):
        io.matrix_from_json([["1"], ["1", "2"]])
