"""Seeded MAP instance generators."""

from __future__ import annotations

import random

from .errors import GenerationFailed
from .graph_core import Graph, MapInstance, is_two_edge_connected, validate_map_instance

MODELS = ("random", "small-heavy")


def _random_model(rng: random.Random, n: int, density: float, tries: int) -> Graph:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for _ in range(tries):
        edges = [p for p in pairs if rng.random() < density]
        g = Graph.from_edges(range(n), [(u, v, 1) for u, v in edges])
        if not is_two_edge_connected(g):
            continue
        order = list(edges)
        rng.shuffle(order)
        matched = set()
        zero = set()
        for u, v in order:
            if u in matched or v in matched:
                continue
            matched |= {u, v}
            if rng.random() < 0.8:
                zero.add((u, v))
        return Graph.from_edges(range(n), [(u, v, 0 if (u, v) in zero else 1) for u, v in edges])
    raise GenerationFailed(f"no 2-edge-connected G({n}, {density}) sample in {tries} tries",
                           n=n, density=density)


def _small_heavy(rng: random.Random, n: int, density: float) -> Graph:
    """Alternating 4-cycles on a random ring, joined by unit edges.

    Consecutive cycles on the ring are joined by two vertex-disjoint unit
    edges; each further pair of vertices in different cycles gets a unit edge
    with probability ``density``. Leftover vertices extend the last cycle.
    """
    verts = list(range(n))
    rng.shuffle(verts)
    k = max(1, n // 4)
    groups = [verts[4 * i:4 * i + 4] for i in range(k)]
    groups[-1].extend(verts[4 * k:])
    triples = []
    zero_deg = set()
    for grp in groups:
        for i in range(len(grp)):
            a, b = grp[i], grp[(i + 1) % len(grp)]
            w = 0 if i % 2 == 0 and a not in zero_deg and b not in zero_deg and (len(grp) % 2 == 0 or i < len(grp) - 1) else 1
            if w == 0:
                zero_deg |= {a, b}
            triples.append((a, b, w))
    seen = {(min(a, b), max(a, b)) for a, b, _ in triples}

    def add(a, b):
        key = (min(a, b), max(a, b))
        if a != b and key not in seen:
            seen.add(key)
            triples.append((a, b, 1))

    if k > 1:
        for i in range(k):
            g1, g2 = groups[i], groups[(i + 1) % k]
            a1, b1 = rng.sample(g1, 2)
            a2, b2 = rng.sample(g2, 2)
            add(a1, a2)
            add(b1, b2)
    owner = {v: i for i, grp in enumerate(groups) for v in grp}
    for u in range(n):
        for v in range(u + 1, n):
            if owner[u] != owner[v] and rng.random() < density:
                add(u, v)
    return Graph.from_edges(range(n), triples)


def generate(model: str, n: int, density: float, seed: int, tries: int = 2000) -> MapInstance:
    if n < 3:
        raise GenerationFailed(f"n must be at least 3, got {n}", n=n)
    rng = random.Random(f"{model}:{n}:{density}:{seed}")
    if model == "random":
        g = _random_model(rng, n, density, tries)
    elif model == "small-heavy":
        if n < 4:
            raise GenerationFailed("small-heavy needs n >= 4", n=n)
        g = _small_heavy(rng, n, density)
    else:
        raise GenerationFailed(f"unknown model {model!r}", model=model)
    return validate_map_instance(g)
