import random
from itertools import combinations

import pytest
from hypothesis import given

from mapsolver.config import RunStats, SolverConfig
from mapsolver.forbidden import (
    CONTRACTIBLE,
    CUT_VERTEX,
    PARALLEL,
    S1,
    S34,
    SK,
    SK_PRIME,
    TYPE_ORDER,
    Budget,
    View,
    contractible_witness,
    detect_forbidden,
    find_cut_vertex,
    find_parallel_edge,
    opt_capped,
    scan,
    short_cycles,
)
from mapsolver.graph_core import Graph
from oracles import brute_opt, connected, map_graphs, random_map_graph, spanning_2ec

SIMPLE_ONLY = (CONTRACTIBLE, S1, S34, SK, SK_PRIME)


def _min_inside(g, vs):
    """Fewest unit edges of G[vs] in any spanning 2EC subgraph of G (brute force)."""
    inner = [e for e in g.unit_edges() if set(g.ends(e)) <= vs]
    rest = [e for e in g.edges if e not in inner]
    for k in range(len(inner) + 1):
        for pick in combinations(inner, k):
            if spanning_2ec(g, rest + list(pick)):
                return k
    return None


def test_contractible_witness_matches_brute_force():
    rng = random.Random(8)
    yes = no = 0
    for _ in range(150):
        g = random_map_graph(rng, rng.randint(5, 8), 0.5)
        if g is None:
            continue
        for size in (3, 4):
            vs = frozenset(rng.sample(sorted(g.vertices), size))
            sub = g.induced(vs)
            got = contractible_witness(g, vs)
            if sub.m == 0 or not spanning_2ec(sub, list(sub.edges)):
                assert got is None
                continue
            q = -(-8 * brute_opt(sub) // 13)
            expect = q > 0 and _min_inside(g, vs) >= q
            assert (got is not None) == expect
            if got is not None:
                h, q2 = got
                assert q2 == q
                assert spanning_2ec(sub, list(h))
                yes += 1
            else:
                no += 1
    assert yes and no


def test_pendant_four_cycle_is_contractible():
    # alternating 4-cycle whose vertices 2 and 3 have degree two in G
    g = Graph.from_edges(range(7), [
        (0, 1, 0), (1, 2, 1), (2, 3, 0), (0, 3, 1),
        (0, 4, 1), (1, 5, 1), (4, 5, 0), (4, 6, 1), (5, 6, 1),
    ])
    assert contractible_witness(g, frozenset({0, 1, 2, 3})) is not None


def test_cut_vertex_scanner():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(4, 9)
        g = random_map_graph(rng, n, 0.35)
        if g is None:
            continue
        brute = {v for v in g.vertices
                 if not connected(g.vertices - {v}, [g.ends(e) for e in g.edges if v not in g.ends(e)])}
        cfg = find_cut_vertex(g)
        assert (cfg is None) == (not brute)
        if cfg is not None:
            (v,) = cfg.vertices
            assert v == min(brute)
            a, b = cfg.sides
            assert not (a & b) and a | b == g.vertices - {v}


def test_parallel_edge_drops_the_heaviest_copy():
    g = Graph.from_edges(range(3), [(0, 1, 0), (0, 1, 1), (0, 1, 1), (1, 2, 1), (0, 2, 1)])
    cfg = find_parallel_edge(g)
    assert cfg.edges == (2,)
    assert cfg.meta["kept"] == [0, 1]


def test_opt_capped():
    ring = Graph.from_edges(range(6), [(i, (i + 1) % 6, 1) for i in range(6)])
    assert opt_capped(ring) == 4
    c4 = Graph.from_edges(range(4), [(0, 1, 0), (1, 2, 1), (2, 3, 0), (0, 3, 1)])
    assert opt_capped(c4) == 2


def test_view_split():
    g = Graph.from_edges(range(5), [(0, 1, 1), (1, 2, 1), (2, 0, 1), (2, 3, 1), (3, 4, 1), (4, 2, 1)])
    v = View(g)
    assert v.split({2}) == [frozenset({0, 1}), frozenset({3, 4})]
    assert v.split({0}) is None


def test_short_cycles_costs():
    g = Graph.from_edges(range(4), [(0, 1, 0), (1, 2, 1), (2, 3, 0), (0, 3, 1), (0, 2, 1)])
    cyc = short_cycles(g, 4, 2)
    assert frozenset({0, 1, 2, 3}) in cyc
    order, edges = cyc[frozenset({0, 1, 2, 3})]
    assert sum(g.weight(e) for e in edges) == 2


def _graphs(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = random_map_graph(rng, rng.randint(6, 12), rng.choice((0.25, 0.35, 0.5)))
        if g is None:
            continue
        if rng.random() < 0.25:
            e = rng.choice(sorted(g.edges))
            u, v, _ = g.edges[e]
            g = g.with_edges([(u, v, 1)])[0]
        out.append(g)
    return out


def test_detection_order_matches_independent_scans():
    cfg = SolverConfig(contractible_t=6, contractible_cap=20000)
    seen = set()
    for g in _graphs(80, 17):
        got = detect_forbidden(g, cfg, RunStats(), Budget(cfg.contractible_cap))
        first = None
        for kind in TYPE_ORDER:
            if kind in SIMPLE_ONLY and not g.is_simple():
                continue
            hit = scan(g, kind, cfg, RunStats(), Budget(cfg.contractible_cap))
            if hit is not None:
                first = hit
                break
        assert (got is None) == (first is None)
        if got is not None:
            assert got.kind == first.kind and got.vertices == first.vertices
            seen.add(got.kind)
    assert {CUT_VERTEX, PARALLEL, CONTRACTIBLE} <= seen


@given(map_graphs(4, 8))
def test_found_separators_disconnect(g):
    cfg = detect_forbidden(g, SolverConfig(contractible_t=5, contractible_cap=5000))
    if cfg is None or not cfg.sides or cfg.kind in (CONTRACTIBLE, PARALLEL):
        return
    core = set(cfg.vertices)
    sides = list(cfg.sides)
    assert all(not (s & core) for s in sides)
    for a, b in combinations(sides, 2):
        assert not (a & b)
        assert not any({g.ends(e)[0], g.ends(e)[1]} & a and {g.ends(e)[0], g.ends(e)[1]} & b for e in g.edges)


def test_cap_hit_warns():
    rng = random.Random(1)
    g = random_map_graph(rng, 14, 0.6)
    stats = RunStats()
    budget = Budget(50)
    cfg = SolverConfig(contractible_cap=50)
    assert scan(g, CONTRACTIBLE, cfg, stats, budget) is None
    assert stats.counters["warning.CapHit"] == 1 and budget.hit
    # the budget is shared, so a second scan in the same run is skipped
    scan(g, CONTRACTIBLE, cfg, stats, budget)
    assert stats.counters["contractible.skipped"] == 1
