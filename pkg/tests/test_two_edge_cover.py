import random

from hypothesis import given

from mapsolver.errors import ExchangeNotFound
from mapsolver.generator import generate
from mapsolver.graph_core import Graph
from mapsolver.two_edge_cover import canonical_violations, canonicalize_d2, compute_d2, rho
from oracles import brute_2cover, map_graphs


def _deg_ok(g, ids):
    deg = dict.fromkeys(g.vertices, 0)
    for e in ids:
        for x in g.ends(e):
            deg[x] += 1
    return all(d >= 2 for d in deg.values())


def test_alternating_six_cycle():
    g = Graph.from_edges(range(6), [(i, (i + 1) % 6, i % 2) for i in range(6)])
    h = compute_d2(g)
    assert h.weight == 3 and h.edges == frozenset(g.edges)


@given(map_graphs(3, 8))
def test_d2_is_minimum(g):
    h = compute_d2(g)
    assert _deg_ok(g, h.edges)
    assert set(g.zero_edges()) <= h.edges
    assert h.weight == brute_2cover(g)


def test_canonical_form_on_generated_instances():
    rng = random.Random(5)
    done = stuck = 0
    for seed in range(120):
        n = rng.randint(8, 20)
        inst = generate("random", n, max(0.2, 3 / n), seed)
        d2 = compute_d2(inst)
        trace = []
        try:
            h = canonicalize_d2(inst, d2, trace)
        except ExchangeNotFound:
            # exchanges are only promised on structured graphs
            stuck += 1
            continue
        done += 1
        assert h.weight == d2.weight
        assert _deg_ok(inst.graph, h.edges)
        assert canonical_violations(inst, h) == []
        rhos = [rho(inst, d2)] + [b for _, b, *_ in trace]
        assert all(a > b for a, b in zip(rhos, rhos[1:]))
        assert rho(inst, h) == rhos[-1]
    assert done > stuck


def test_small_pendant_blocks_get_exchanged():
    exchanged = 0
    for seed in range(300):
        inst = generate("random", 12, 0.3, seed)
        d2 = compute_d2(inst)
        if not any(k == "small-pendant-block" for k, _ in canonical_violations(inst, d2)):
            continue
        trace = []
        try:
            h = canonicalize_d2(inst, d2, trace)
        except ExchangeNotFound:
            continue
        assert trace and h.weight == d2.weight
        assert rho(inst, h) < rho(inst, d2)
        exchanged += 1
    assert exchanged >= 3
