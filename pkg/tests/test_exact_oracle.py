from fractions import Fraction

import pytest
from hypothesis import given

from mapsolver.errors import NotTwoEdgeConnected, TooLarge
from mapsolver.exact_oracle import (
    f_value,
    min_2edge_cover_bruteforce,
    min_augmentation,
    opt_at_most,
    opt_exact,
)
from mapsolver.graph_core import Graph
from oracles import brute_2cover, brute_opt, map_graphs, spanning_2ec


def test_f_value():
    assert f_value(2) == 2
    assert f_value(8) == 11
    assert f_value(5) == Fraction(49, 8)
    assert f_value(3) == Fraction(3)


def test_alternating_four_cycle():
    g = Graph.from_edges(range(4), [(0, 1, 0), (1, 2, 1), (2, 3, 0), (0, 3, 1)])
    res = opt_exact(g)
    assert res.weight == 2 and res.complete
    assert spanning_2ec(g, res.witness.edge_ids)


@given(map_graphs(3, 7))
def test_opt_exact_matches_subset_enumeration(g):
    res = opt_exact(g)
    assert res.weight == brute_opt(g)
    assert res.witness.weight == res.weight
    assert spanning_2ec(g, res.witness.edge_ids)


@given(map_graphs(3, 7))
def test_opt_at_most_threshold(g):
    opt = brute_opt(g)
    assert opt_at_most(g, opt) is not None
    if opt > 0:
        assert opt_at_most(g, opt - 1) is None


@given(map_graphs(3, 7))
def test_min_augmentation_from_zero_edges(g):
    best, _, complete = min_augmentation(g, g.zero_edges(), g.unit_edges())
    assert complete
    assert len(best) == brute_opt(g)


@given(map_graphs(3, 7))
def test_two_edge_cover_brute_force(g):
    assert min_2edge_cover_bruteforce(g) == brute_2cover(g)


def test_rejects_bridged_graph():
    g = Graph.from_edges(range(3), [(0, 1, 1), (1, 2, 1)])
    with pytest.raises(NotTwoEdgeConnected):
        opt_exact(g)


def test_size_limit():
    n = 21
    g = Graph.from_edges(range(n), [(i, (i + 1) % n, 1) for i in range(n)])
    with pytest.raises(TooLarge):
        opt_exact(g)
