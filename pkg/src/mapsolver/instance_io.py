"""Text formats for instances and solutions.

Instance::

    c optional comments
    p map <n> <m>
    e <u> <v> <w>        (m lines, 1-indexed vertices, w in {0, 1})

A solution file uses ``p sol <n> <k>`` followed by k edge lines in the same
form. Internally vertices are 0-indexed and the i-th edge line gets id i.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInstance, ParseError, SelfLoop, WeightOutOfRange
from .graph_core import EdgeSubgraph, Graph, MapInstance, validate_map_instance


@dataclass(frozen=True)
class ParsedFile:
    kind: str  # "map" or "sol"
    n: int
    triples: tuple  # (u, v, w), 0-indexed
    comments: tuple


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", line=lineno) from None


def parse_text(text: str) -> ParsedFile:
    header = None
    triples = []
    comments = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        tag, *rest = line.split()
        if tag == "c":
            comments.append(line[1:].strip())
            continue
        if tag == "p":
            if header is not None:
                raise ParseError("duplicate problem line", line=lineno)
            if len(rest) != 3 or rest[0] not in ("map", "sol"):
                raise ParseError("expected 'p map <n> <m>' or 'p sol <n> <k>'", line=lineno)
            n = _int(rest[1], lineno, "vertex count")
            m = _int(rest[2], lineno, "edge count")
            if n < 1 or m < 0:
                raise ParseError(f"bad sizes n={n} m={m}", line=lineno)
            header = (rest[0], n, m, lineno)
            continue
        if tag == "e":
            if header is None:
                raise ParseError("edge line before the problem line", line=lineno)
            if len(rest) != 3:
                raise ParseError("expected 'e <u> <v> <w>'", line=lineno)
            u, v, w = (_int(t, lineno, x) for t, x in zip(rest, ("u", "v", "w")))
            n = header[1]
            for x in (u, v):
                if not 1 <= x <= n:
                    raise ParseError(f"vertex {x} outside 1..{n}", line=lineno)
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}", line=lineno)
            if w not in (0, 1):
                raise WeightOutOfRange(f"weight {w} is not 0 or 1", line=lineno)
            triples.append((u - 1, v - 1, w))
            continue
        raise ParseError(f"unknown line type {tag!r}", line=lineno)
    if header is None:
        raise ParseError("missing problem line")
    kind, n, m, hline = header
    if len(triples) != m:
        raise ParseError(f"header announces {m} edges, found {len(triples)}", line=hline)
    return ParsedFile(kind, n, tuple(triples), tuple(comments))


def parse_instance(text: str, validate: bool = True) -> MapInstance:
    pf = parse_text(text)
    if pf.kind != "map":
        raise ParseError("expected an instance ('p map'), found a solution file")
    g = Graph.from_edges(range(pf.n), pf.triples)
    if validate:
        return validate_map_instance(g)
    return MapInstance(g, frozenset(g.zero_edges()))


def read_instance(path, validate: bool = True) -> MapInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read(), validate)


def _lines(kind: str, n: int, triples, comments) -> str:
    out = [f"c {c}" if c else "c" for c in comments]
    out.append(f"p {kind} {n} {len(triples)}")
    out.extend(f"e {u + 1} {v + 1} {w}" for u, v, w in triples)
    return "\n".join(out) + "\n"


def serialize_instance(inst, comments=()) -> str:
    g = inst.graph if isinstance(inst, MapInstance) else inst
    if sorted(g.vertices) != list(range(g.n)):
        raise ValueError("instances are written with vertices 0..n-1")
    return _lines("map", g.n, [g.edges[e] for e in sorted(g.edges)], comments)


def write_instance(path, inst, comments=()):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(inst, comments))


def serialize_solution(sol: EdgeSubgraph, comments=()) -> str:
    g = sol.parent
    return _lines("sol", g.n, [g.edges[e] for e in sorted(sol.edge_ids)], comments)


def parse_solution(text: str, inst) -> EdgeSubgraph:
    """Edges of a solution file matched against the instance by endpoints and weight."""
    g = inst.graph if isinstance(inst, MapInstance) else inst
    pf = parse_text(text)
    if pf.kind != "sol":
        raise ParseError("expected a solution ('p sol'), found an instance file")
    if pf.n != g.n:
        raise ParseError(f"solution is for {pf.n} vertices, instance has {g.n}")
    pool: dict = {}
    for e in sorted(g.edges):
        pool.setdefault(g.edges[e], []).append(e)
    ids = []
    for u, v, w in pf.triples:
        key = (min(u, v), max(u, v), w)
        if not pool.get(key):
            raise InvalidInstance(f"solution edge {u + 1}-{v + 1} (w={w}) is not an instance edge")
        ids.append(pool[key].pop(0))
    return EdgeSubgraph(g, frozenset(ids))
