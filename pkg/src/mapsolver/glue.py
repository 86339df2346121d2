"""Gluing a special configuration into one 2-edge-connected spanning subgraph.

Credits are reset at entry: 2 per large and 4/3 per small component. Every
merge keeps those floors, so a single final component leaves at least 2
credits and the weight bound follows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .config import RunStats
from .config_builder import (
    _bfs_nodes,
    _graph,
    _merge,
    _merge_any_cycle,
    _quotient,
    find_good_cycle,
    merge_good_cycle,
)
from .errors import CreditDeficit, NoObstruction, PathNotFound
from .graph_core import LARGE, MEDIUM, SMALL, EdgeSubgraph, is_spanning_2ec
from .quotient import Quotient
from .two_edge_cover import TwoEdgeCover

GLUE_FLOOR = {LARGE: Fraction(2), MEDIUM: Fraction(2), SMALL: Fraction(4, 3)}


@dataclass(frozen=True)
class OpenPath2:
    nodes: tuple  # x1, x2, x3 as vertex sets
    edges: tuple  # e1, e2
    path: tuple  # spanning path of x2 with one unit edge


@dataclass(frozen=True)
class ClosedPath2:
    inner: int  # node ids in the quotient the path was found in
    outer: int
    edges: tuple
    path: tuple


@dataclass(frozen=True)
class StackedPath:
    first: ClosedPath2  # x_j x_i x_j
    second: ClosedPath2  # x_k x_j x_k
    nodes: tuple = field(default=())


def glue_bound(s: TwoEdgeCover) -> Fraction:
    dec = s.decomposition
    return s.weight + 2 * dec.count(LARGE) + Fraction(4, 3) * dec.count(SMALL) - 2


def find_open_2aug(g, h: TwoEdgeCover, q: Quotient | None = None) -> OpenPath2 | None:
    gr = _graph(g)
    q = q or _quotient(gr, h)
    for x2 in q.nodes(SMALL):
        for pr in sorted(q.ports(x2), key=sorted):
            a, b = sorted(pr)
            for e1 in q.links_at(x2, a):
                x1 = e1.other(x2)
                for e2 in q.links_at(x2, b, exclude=(x1,)):
                    x3 = e2.other(x2)
                    nodes = tuple(q.comps[x].vertices for x in (x1, x2, x3))
                    return OpenPath2(nodes, (e1.eid, e2.eid), q.ports(x2)[pr])
    return None


def closed_paths(q: Quotient):
    """All closed 2-augmenting paths x_j x_i x_j, one per (inner, outer, port pair)."""
    out = []
    for xi in q.nodes(SMALL):
        for pr in sorted(q.ports(xi), key=sorted):
            a, b = sorted(pr)
            seen = set()
            for e1 in q.links_at(xi, a):
                xj = e1.other(xi)
                if xj in seen:
                    continue
                e2 = next((lk for lk in q.links_at(xi, b) if lk.other(xi) == xj and lk.eid != e1.eid), None)
                if e2 is None:
                    continue
                seen.add(xj)
                out.append(ClosedPath2(xi, xj, (e1.eid, e2.eid), q.ports(xi)[pr]))
    return out


def aux_digraph(q: Quotient) -> dict:
    """Arcs of D^aux: small node -> set of nodes it has a closed 2-augmenting path to."""
    arcs: dict[int, set] = {x: set() for x in q.nodes(SMALL)}
    for cp in closed_paths(q):
        arcs[cp.inner].add(cp.outer)
    return arcs


def find_stacked(g, h: TwoEdgeCover, q: Quotient | None = None) -> StackedPath | None:
    gr = _graph(g)
    q = q or _quotient(gr, h)
    by_inner: dict[int, list] = {}
    for cp in closed_paths(q):
        by_inner.setdefault(cp.inner, []).append(cp)
    for xi in sorted(by_inner):
        for p1 in by_inner[xi]:
            xj = p1.outer
            for p2 in by_inner.get(xj, []):
                if p2.outer != xi:
                    nodes = tuple(q.comps[x].vertices for x in (xi, xj, p2.outer))
                    return StackedPath(p1, p2, nodes)
    return None


def _merge_open(gr, h, credits, op: OpenPath2, stats):
    q = _quotient(gr, h)
    idx = {c.vertices: i for i, c in enumerate(q.comps)}
    x1, x2, x3 = (idx[k] for k in op.nodes)
    back = _bfs_nodes(q, x1, x3, blocked={x2})
    if back is None:
        raise PathNotFound("no path between the ends of an open 2-augmenting path avoiding its middle",
                           nodes=[min(k) for k in op.nodes])
    remove = set(q.comps[x2].edges)
    add = set(op.edges) | set(op.path) | {lk.eid for lk in back}
    return _merge(gr, h, credits, remove, add, stats, "glue.open_2aug", 1, GLUE_FLOOR)


def _merge_stacked(gr, h, credits, sp: StackedPath, stats):
    q = _quotient(gr, h)
    remove = set(q.comps[sp.first.inner].edges) | set(q.comps[sp.second.inner].edges)
    add = set(sp.first.edges) | set(sp.second.edges) | set(sp.first.path) | set(sp.second.path)
    return _merge(gr, h, credits, remove, add, stats, "glue.stacked", 2, GLUE_FLOOR)


def glue(g, s: TwoEdgeCover, stats: RunStats | None = None, trace: list | None = None) -> EdgeSubgraph:
    """Merge the components of a special configuration until one is left."""
    gr = _graph(g)
    h = s
    credits = {c.vertices: GLUE_FLOOR[c.size_class] for c in h.decomposition.components}
    bound = glue_bound(s)
    for _ in range(len(h.decomposition.components) + 1):
        q = _quotient(gr, h)
        if len(q) == 1:
            break
        res = None
        gc = find_good_cycle(gr, h, q)
        if gc is not None:
            res = merge_good_cycle(gr, h, credits, gc, stats, "glue.good_cycle", GLUE_FLOOR)
            step = "good_cycle"
        if res is None:
            op = find_open_2aug(gr, h, q)
            if op is not None:
                try:
                    res = _merge_open(gr, h, credits, op, stats)
                except PathNotFound as exc:
                    if stats is None:
                        raise
                    stats.fail(exc)
                step = "open_2aug"
        if res is None:
            sp = find_stacked(gr, h, q)
            if sp is not None:
                res = _merge_stacked(gr, h, credits, sp, stats)
                step = "stacked"
        if res is None:
            arcs = aux_digraph(q)
            exc = NoObstruction(
                f"no good cycle, open or stacked 2-augmenting path among {len(q)} components",
                daux={min(q.comps[x].vertices): sorted(min(q.comps[y].vertices) for y in ys)
                      for x, ys in arcs.items()})
            if stats is None:
                raise exc
            stats.fail(exc)
            res = _merge_any_cycle(gr, h, credits, q.comps[0].vertices, stats, "glue.fallback_cycle", GLUE_FLOOR)
            step = "fallback"
        h, credits = res
        if trace is not None:
            trace.append(step)
    out = EdgeSubgraph(gr, h.edges)
    if stats is not None:
        stats.bump("glue.calls")
        stats.glue_checks.append((out.weight, bound))
        if out.weight > bound:
            stats.fail(CreditDeficit(f"glue output weight {out.weight} exceeds {bound}"))
    if not is_spanning_2ec(gr, out):
        raise NoObstruction("glue finished without a spanning 2-edge-connected subgraph")
    return out
