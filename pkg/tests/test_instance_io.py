import pytest
from hypothesis import given

from mapsolver.errors import InvalidInstance, NotTwoEdgeConnected, ParseError, SelfLoop, WeightOutOfRange, ZeroEdgesNotMatching
from mapsolver.graph_core import EdgeSubgraph
from mapsolver.instance_io import (
    parse_instance,
    parse_solution,
    parse_text,
    read_instance,
    serialize_instance,
    serialize_solution,
    write_instance,
)
from oracles import map_graphs

C4 = "c alternating 4-cycle\np map 4 4\ne 1 2 0\ne 2 3 1\ne 3 4 0\ne 1 4 1\n"


def test_round_trip_is_byte_identical():
    inst = parse_instance(C4)
    assert serialize_instance(inst, comments=["alternating 4-cycle"]) == C4
    assert serialize_instance(inst) == C4.split("\n", 1)[1]


@given(map_graphs(3, 9))
def test_round_trip_property(g):
    text = serialize_instance(g)
    again = parse_instance(text)
    assert again.graph.edges == g.edges
    assert serialize_instance(again) == text


def test_file_round_trip(tmp_path):
    p = tmp_path / "c4.map"
    write_instance(p, parse_instance(C4))
    assert read_instance(p).graph.edges == parse_instance(C4).graph.edges


@pytest.mark.parametrize("text, exc, line", [
    ("p map 2 1\ne 1 1 1\n", SelfLoop, 2),
    ("p map 2 1\ne 1 2 2\n", WeightOutOfRange, 2),
    ("p map 2 1\ne 1 3 1\n", ParseError, 2),
    ("e 1 2 1\np map 2 1\n", ParseError, 1),
    ("p map 2 2\ne 1 2 1\n", ParseError, 1),
    ("p map 2 1\np map 2 1\ne 1 2 1\n", ParseError, 2),
    ("p map 2 1\nx 1 2\n", ParseError, 2),
    ("p map 2 1\ne 1 two 1\n", ParseError, 2),
    ("p graph 2 1\n", ParseError, 1),
])
def test_syntax_errors_carry_line_numbers(text, exc, line):
    with pytest.raises(exc) as ei:
        parse_text(text)
    assert ei.value.line == line
    assert f"line {line}" in str(ei.value)


def test_missing_header():
    with pytest.raises(ParseError):
        parse_text("c nothing\n")


def test_semantic_errors_come_from_validation():
    with pytest.raises(ZeroEdgesNotMatching):
        parse_instance("p map 3 3\ne 1 2 0\ne 2 3 0\ne 1 3 1\n")
    with pytest.raises(NotTwoEdgeConnected):
        parse_instance("p map 3 2\ne 1 2 1\ne 2 3 1\n")
    assert parse_instance("p map 3 2\ne 1 2 1\ne 2 3 1\n", validate=False).n == 3


def test_solution_round_trip():
    inst = parse_instance(C4)
    sol = EdgeSubgraph(inst.graph, frozenset(inst.graph.edges))
    text = serialize_solution(sol)
    assert text.startswith("p sol 4 4\n")
    assert parse_solution(text, inst).edge_ids == sol.edge_ids


def test_solution_edges_must_exist():
    inst = parse_instance(C4)
    with pytest.raises(InvalidInstance):
        parse_solution("p sol 4 1\ne 1 3 1\n", inst)
    with pytest.raises(ParseError):
        parse_solution(C4, inst)
