"""Acceptance suite: one PASS/FAIL line per criterion.

Run with pytest (the lines are printed in the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from mapsolver.bridge_cover import cover_all_bridges  # noqa: E402
from mapsolver.config import RunStats, SolverConfig  # noqa: E402
from mapsolver.config_builder import (  # noqa: E402
    build_special_config,
    find_good_cycle,
    find_open_3aug,
    find_small_merge,
)
from mapsolver.errors import CreditDeficit, ExchangeNotFound, SizeNotDecreasing, VariantUndecidable  # noqa: E402
from mapsolver.exact_oracle import ALPHA, f_value, min_2edge_cover_bruteforce, opt_exact  # noqa: E402
from mapsolver.forbidden import Budget, detect_forbidden  # noqa: E402
from mapsolver.generator import generate  # noqa: E402
from mapsolver.graph_core import MEDIUM, Graph, is_spanning_2ec  # noqa: E402
from mapsolver.matching import max_matching  # noqa: E402
from mapsolver.reduce_solver import contract_vs_glue, divide, reduce  # noqa: E402
from mapsolver.two_edge_cover import canonical_violations, canonicalize_d2, compute_d2, rho  # noqa: E402
from mapsolver.verifier import verify  # noqa: E402
from oracles import brute_matching, petersen  # noqa: E402

RESULTS: list[str] = []

# recursion corpus: exact solving nearly off so divide/combine runs on small graphs
LOW = SolverConfig(exact_threshold=3, contractible_t=6, contractible_cap=20000)
# detection budget used to classify generator output as structured
STRUCTURED_BUDGET = 10**5


def report(k: int, ok: bool, detail: str):
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def _density(n, i):
    return max(3 / n, (0.35, 0.5, 0.7)[i % 3])


@lru_cache(maxsize=None)
def small_corpus():
    out = []
    for i in range(540):
        n = 4 + i % 9
        if i % 6 == 5 and n >= 4:
            out.append(generate("small-heavy", n, 0.1, i))
        else:
            out.append(generate("random", n, _density(n, i), i))
    return out


@lru_cache(maxsize=None)
def structured_corpus():
    """Generator instances on which detection finds no forbidden configuration."""
    out = []
    seed = 0
    while len(out) < 210 and seed < 2000:
        seed += 1
        model = ("random", "small-heavy")[seed % 2]
        n = 20 + seed % 13
        d = (0.15, 0.2, 0.25)[seed % 3] if model == "random" else (0.1, 0.15, 0.2)[seed % 3]
        inst = generate(model, n, d, seed)
        if detect_forbidden(inst.graph, SolverConfig(), None, Budget(STRUCTURED_BUDGET)) is None:
            out.append(inst)
    return out


@lru_cache(maxsize=None)
def structured_runs():
    """Run the structured pipeline stage by stage, recording every check."""
    runs = []
    for inst in structured_corpus():
        g = inst.graph
        stats = RunStats()
        d2 = compute_d2(inst)
        trace = []
        try:
            h = canonicalize_d2(inst, d2, trace)
            canon = canonical_violations(inst, h)
        except ExchangeNotFound as exc:
            stats.fail(exc)
            h, canon = d2, ["exchange not found"]
        rhos = [rho(inst, d2)] + [b for _, b, *_ in trace]
        bc = cover_all_bridges(inst, h, stats)
        s = build_special_config(inst, bc.cover, stats, bc.ledger, d2.weight)
        obstructions = [
            name for name, hit in (
                ("bridge", not s.decomposition.bridgeless),
                ("medium", s.decomposition.count(MEDIUM) > 0),
                ("good_cycle", find_good_cycle(g, s) is not None),
                ("small_merge", find_small_merge(g, s) is not None),
                ("open_3aug", find_open_3aug(g, s) is not None),
            ) if hit
        ]
        out = contract_vs_glue(inst, s, SolverConfig(), stats)
        runs.append(dict(inst=inst, stats=stats, d2=d2, cover=bc.cover, bound=bc.bound, canon=canon,
                         rhos=rhos, obstructions=obstructions, out=out))
    return runs


@lru_cache(maxsize=None)
def recursion_runs():
    runs = []
    for i in range(150):
        n = 8 + i % 9
        model = "small-heavy" if i % 4 == 3 else "random"
        inst = generate(model, n, _density(n, i) if model == "random" else 0.1, 1000 + i)
        stats = RunStats()
        out = reduce(inst, LOW, stats)
        runs.append(dict(inst=inst, stats=stats, out=out))
    return runs


@lru_cache(maxsize=None)
def exchange_runs():
    """Canonicalisation on generator output whose D2 has non-canonical pendant blocks."""
    runs = []
    for seed in range(400):
        n = 8 + seed % 9
        inst = generate("random", n, max(3 / n, 0.3), 7000 + seed)
        d2 = compute_d2(inst)
        if not canonical_violations(inst, d2):
            continue
        trace = []
        try:
            h = canonicalize_d2(inst, d2, trace)
        except ExchangeNotFound:
            # exchanges are only promised on structured graphs
            continue
        rhos = [rho(inst, d2)] + [b for _, b, *_ in trace]
        runs.append(dict(rhos=rhos, same_weight=h.weight == d2.weight, canon=canonical_violations(inst, h)))
    return runs


@lru_cache(maxsize=None)
def divide_sweep():
    """divide() on every configuration found with the contractible scan switched off."""
    out = []
    cfg = SolverConfig(exact_threshold=3, contractible_t=2)
    for seed in range(400):
        n = 6 + seed % 11
        inst = generate("random", n, max(3 / n, (0.25, 0.35, 0.5)[seed % 3]), 9000 + seed)
        hit = detect_forbidden(inst.graph, cfg, None, Budget(1))
        if hit is None:
            continue
        stats = RunStats()
        try:
            divide(inst, hit, stats)
        except (SizeNotDecreasing, VariantUndecidable) as exc:
            stats.fail(exc)
        out.append(stats)
    return out


def _all_stats():
    return [r["stats"] for r in structured_runs()] + [r["stats"] for r in recursion_runs()]


# criteria ------------------------------------------------------------------------


def test_criterion_1_approximation_bound():
    t0 = time.perf_counter()
    bad = []
    corpus = small_corpus()
    for k, inst in enumerate(corpus):
        sol = reduce(inst)
        opt = opt_exact(inst).weight
        feasible = is_spanning_2ec(inst.graph, sol) and verify(inst, sol).feasible
        if not feasible or Fraction(sol.weight) > f_value(opt):
            bad.append((k, sol.weight, opt))
    dt = time.perf_counter() - t0
    # informational: the recursion corpus with exact solving switched off
    low = [r for r in recursion_runs() if r["inst"].n <= 12]
    opts = [opt_exact(r["inst"]).weight for r in low]
    in_ratio = sum(r["out"].weight <= ALPHA * o for r, o in zip(low, opts))
    in_f = sum(r["out"].weight <= f_value(o) for r, o in zip(low, opts))
    ok = not bad and len(corpus) >= 500 and dt <= 600
    assert report(1, ok, f"{len(corpus) - len(bad)}/{len(corpus)} instances (n 4..12) within "
                         f"max(13/8 opt - 2, opt), {dt:.1f}s; low-threshold runs (informational): "
                         f"{in_ratio}/{len(low)} within 13/8 opt, {in_f}/{len(low)} within f"), bad[:5]


def test_criterion_2_d2_optimality():
    rng = random.Random(2)
    bad = 0
    total = 0
    for i in range(200):
        n = rng.randint(3, 10)
        inst = generate("random", n, max(3 / n, rng.choice((0.3, 0.5, 0.8))), 5000 + i)
        total += 1
        bad += compute_d2(inst).weight != min_2edge_cover_bruteforce(inst)
    assert report(2, bad == 0, f"{total - bad}/{total} D2 weights equal brute force")


def test_criterion_3_blossom():
    rng = random.Random(3)
    bad = 0
    graphs = [(10, petersen())]
    for _ in range(200):
        n = rng.randint(1, 12)
        p = rng.choice((0.15, 0.3, 0.5, 0.8))
        graphs.append((n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]))
    for n, pairs in graphs:
        g = Graph.from_edges(range(n), [(u, v, 1) for u, v in pairs])
        bad += len(max_matching(g)) != brute_matching(pairs)
    pet = len(max_matching(Graph.from_edges(range(10), [(u, v, 1) for u, v in petersen()])))
    ok = bad == 0 and pet == 5
    assert report(3, ok, f"{len(graphs) - bad}/{len(graphs)} matchings maximum, Petersen = {pet}")


def test_criterion_4_economical_inequality():
    runs = structured_runs()
    bad = [r for r in runs if Fraction(r["cover"].weight) > r["bound"]]
    ok = not bad and len(runs) >= 200
    assert report(4, ok, f"{len(runs) - len(bad)}/{len(runs)} structured instances satisfy "
                         f"||H|| <= 13/8 d2 - 2 n_l - 15/8 n_m - 5/4 n_s")


def test_criterion_5_glue_bound():
    checks = [c for st in _all_stats() for c in st.glue_checks]
    bad = [c for c in checks if Fraction(c[0]) > c[1]]
    note = "" if checks else " (vacuous: no structured run reached glue with two or more components)"
    assert report(5, not bad, f"{len(checks) - len(bad)}/{len(checks)} glue invocations within "
                              f"||S|| + 2 n_l + 4/3 n_s - 2{note}"), bad[:5]


def test_criterion_6_divide_descent():
    stats = _all_stats() + divide_sweep()
    sizes = [d for st in stats for d in st.divide_sizes]
    bad = [d for d in sizes if d[1] >= d[2]]
    viol = sum(st.size_violations for st in stats)
    kinds = sorted({d[0] for d in sizes})
    ok = not bad and viol == 0 and len(sizes) > 0
    assert report(6, ok, f"{len(sizes)} divides ({', '.join(kinds)}), {len(bad) + viol} size violations")


def test_criterion_7_structural_postconditions():
    runs = structured_runs()
    special_bad = [r for r in runs if r["obstructions"]]
    canon_bad = [r for r in runs if r["canon"]]
    ex = exchange_runs()
    rho_bad = [r for r in runs + ex if any(a <= b for a, b in zip(r["rhos"], r["rhos"][1:]))]
    ex_bad = [r for r in ex if r["canon"] or not r["same_weight"]]
    exchanges = sum(len(r["rhos"]) - 1 for r in runs + ex)
    ok = not special_bad and not canon_bad and not rho_bad and not ex_bad and exchanges > 0
    assert report(7, ok, f"special config clean {len(runs) - len(special_bad)}/{len(runs)}, "
                         f"canonical {len(runs) - len(canon_bad)}/{len(runs)}, "
                         f"rho decreasing over {exchanges} exchanges")


def test_criterion_8_credit_ledgers():
    deficits = [f for st in _all_stats() for f in st.failures if f[0] == CreditDeficit.__name__]
    assert report(8, not deficits, f"{len(deficits)} CreditDeficit assertions over "
                                   f"{len(_all_stats())} pipeline runs"), deficits[:5]


def test_criterion_9_scale():
    lines = []
    ok = True
    for model, d, seed in (("random", 0.03, 1), ("small-heavy", 0.01, 1)):
        inst = generate(model, 200, d, seed)
        t0 = time.perf_counter()
        sol = reduce(inst)
        dt = time.perf_counter() - t0
        d2 = compute_d2(inst).weight
        good = is_spanning_2ec(inst.graph, sol) and verify(inst, sol).feasible and dt <= 60
        ok &= good
        lines.append(f"{model} n=200 {dt:.1f}s ratio-to-d2 {sol.weight / d2:.3f}")
    assert report(9, ok, "; ".join(lines))


if __name__ == "__main__":
    fails = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                fails += 1
    sys.exit(1 if fails else 0)
