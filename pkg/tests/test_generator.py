import pytest

from mapsolver.config import RunStats, SolverConfig
from mapsolver.errors import GenerationFailed
from mapsolver.generator import generate
from mapsolver.graph_core import validate_map_instance
from mapsolver.instance_io import serialize_instance
from mapsolver.reduce_solver import reduce


def test_deterministic_per_seed():
    a = serialize_instance(generate("random", 8, 0.5, 7))
    b = serialize_instance(generate("random", 8, 0.5, 7))
    assert a == b
    assert a != serialize_instance(generate("random", 8, 0.5, 8))


@pytest.mark.parametrize("model", ["random", "small-heavy"])
def test_instances_validate(model):
    for seed in range(30):
        n = 4 + seed % 20
        inst = generate(model, n, 0.4 if model == "random" else 0.05, seed)
        assert inst.n == n
        validate_map_instance(inst.graph)


def test_small_heavy_shape():
    inst = generate("small-heavy", 24, 0.0, 1)
    assert len(inst.zero_edges) == 12


def test_bad_arguments():
    with pytest.raises(GenerationFailed):
        generate("random", 2, 0.5, 0)
    with pytest.raises(GenerationFailed):
        generate("nope", 8, 0.5, 0)
    with pytest.raises(GenerationFailed):
        generate("random", 30, 0.0, 0, tries=5)


def test_small_heavy_reaches_small_component_glue_at_n24():
    """Share of small-heavy runs at n = 24 whose contract-or-glue step sees small components.

    Target is at least half of 100 seeds. See the decisions ledger for the
    measured value and why the default pipeline stays far below it.
    """
    hits = 0
    for seed in range(100):
        stats = RunStats()
        reduce(generate("small-heavy", 24, 0.05, seed), SolverConfig(), stats)
        hits += bool(stats.counters["cvg.contract"] or stats.counters["cvg.glue"])
    print(f"small-component glue path in {hits}/100 runs")
    assert hits >= 50
