import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from mapsolver.errors import CapacityExceedsDegree
from mapsolver.graph_core import Graph
from mapsolver.matching import max_degree_constrained_subgraph, max_matching
from oracles import brute_matching, petersen


def _graph(n, pairs):
    return Graph.from_edges(range(n), [(u, v, 1) for u, v in pairs])


def _is_matching(g, ids):
    ends = [x for e in ids for x in g.ends(e)]
    return len(ends) == len(set(ends))


def test_petersen_has_a_perfect_matching():
    g = _graph(10, petersen())
    m = max_matching(g)
    assert len(m) == 5 and _is_matching(g, m)


def test_odd_cycle_needs_a_blossom():
    # a 5-cycle with a pendant path; greedy augmentation through the odd cycle fails
    g = _graph(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (5, 6)])
    assert len(max_matching(g)) == 3


@given(st.integers(1, 12), st.floats(0.05, 0.9), st.integers(0, 10**6))
def test_matching_size_is_maximum(n, p, seed):
    rng = random.Random(seed)
    pairs = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    g = _graph(n, pairs)
    m = max_matching(g)
    assert _is_matching(g, m)
    assert len(m) == brute_matching(pairs)


def _brute_dcs(g, cap):
    ids = sorted(g.edges)
    for k in range(len(ids), -1, -1):
        for pick in combinations(ids, k):
            deg = dict.fromkeys(g.vertices, 0)
            for e in pick:
                for x in g.ends(e):
                    deg[x] += 1
            if all(deg[v] <= cap[v] for v in g.vertices):
                return k
    return 0


@given(st.integers(2, 6), st.integers(0, 10**6))
def test_degree_constrained_subgraph_is_maximum(n, seed):
    rng = random.Random(seed)
    triples = [(u, v, 1) for u, v in combinations(range(n), 2) if rng.random() < 0.6]
    triples += [t for t in triples if rng.random() < 0.2]
    g = Graph.from_edges(range(n), triples)
    cap = {v: rng.randint(0, g.degree(v)) for v in g.vertices}
    f = max_degree_constrained_subgraph(g, cap)
    deg = dict.fromkeys(g.vertices, 0)
    for e in f.edge_ids:
        for x in g.ends(e):
            deg[x] += 1
    assert all(deg[v] <= cap[v] for v in g.vertices)
    assert len(f.edge_ids) == _brute_dcs(g, cap)


def test_capacity_above_degree():
    g = _graph(3, [(0, 1), (1, 2)])
    with pytest.raises(CapacityExceedsDegree):
        max_degree_constrained_subgraph(g, {0: 2, 1: 1, 2: 1})
