import random
from fractions import Fraction

from hypothesis import given, settings

from mapsolver.config import RunStats, SolverConfig
from mapsolver.errors import PipelineError, SizeNotDecreasing, VariantUndecidable
from mapsolver.exact_oracle import ALPHA, opt_exact
from mapsolver.forbidden import Budget, detect_forbidden
from mapsolver.generator import generate
from mapsolver.graph_core import Graph, size_measure
from mapsolver.reduce_solver import combine, divide, reduce
from oracles import map_graphs, random_map_graph, spanning_2ec

# exact solving switched off almost entirely so the recursion is exercised
LOW = SolverConfig(exact_threshold=3, contractible_t=6, contractible_cap=20000)
# contractible scan off, so the separator types are reached
NO_CONTRACT = SolverConfig(exact_threshold=3, contractible_t=2)


def test_alternating_four_cycle():
    g = Graph.from_edges(range(4), [(0, 1, 0), (1, 2, 1), (2, 3, 0), (0, 3, 1)])
    assert reduce(g).weight == 2


@settings(max_examples=80)
@given(map_graphs(3, 9))
def test_reduce_is_feasible_with_low_thresholds(g):
    stats = RunStats()
    out = reduce(g, LOW, stats)
    assert spanning_2ec(g, out.edge_ids)
    assert stats.size_violations == 0


def test_divide_then_combine_on_exact_parts():
    rng = random.Random(77)
    kinds = set()
    checked = 0
    for i in range(500):
        g = random_map_graph(rng, rng.randint(6, 14), rng.choice((0.2, 0.3, 0.45)))
        if g is None:
            continue
        if i % 7 == 0:
            u, v, _ = g.edges[rng.choice(sorted(g.edges))]
            g = g.with_edges([(u, v, 1)])[0]
        conf = LOW if i % 3 == 0 else NO_CONTRACT
        cfg = detect_forbidden(g, conf, RunStats(), Budget(conf.contractible_cap))
        if cfg is None:
            continue
        try:
            div = divide(g, cfg)
        except (SizeNotDecreasing, VariantUndecidable):
            continue
        assert sum(size_measure(p) for p in div.parts) < size_measure(g)
        sols = [opt_exact(p, max_vertices=None).witness for p in div.parts]
        try:
            out = combine(g, div, sols, RunStats())
        except PipelineError:
            continue
        assert spanning_2ec(g, out.edge_ids)
        kinds.add(cfg.label())
        checked += 1
    assert checked >= 100
    assert {"cut_vertex", "parallel_edge", "contractible", "S0", "S1", "S2"} <= kinds


def test_divide_descent_over_a_corpus():
    stats = RunStats()
    for seed in range(40):
        n = 8 + seed % 8
        inst = generate("random", n, max(0.25, 3 / n), seed)
        out = reduce(inst, LOW, stats)
        assert spanning_2ec(inst.graph, out.edge_ids)
    assert stats.divide_sizes
    assert all(after < before for _, after, before in stats.divide_sizes)
    assert stats.size_violations == 0


def test_ratio_with_low_thresholds():
    # the additive -2 needs large opt, so only the ratio is checked here
    worst = Fraction(0)
    for seed in range(40):
        n = 6 + seed % 7
        inst = generate("random", n, max(0.3, 3 / n), seed)
        out = reduce(inst, LOW)
        opt = opt_exact(inst).weight
        worst = max(worst, Fraction(out.weight, opt))
    assert worst <= ALPHA


def test_default_reduce_is_exact_on_small_graphs():
    for seed in range(20):
        inst = generate("random", 10, 0.4, seed)
        assert reduce(inst).weight == opt_exact(inst).weight
