"""Multigraphs with stable edge ids, MAP instance validation, bridges, blocks
and contraction.

Vertices are ints. Edges are referenced by id everywhere, since parallel edges
appear after contraction and when pseudo edges are added.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    NotTwoEdgeConnected,
    NotTwoEdgeCover,
    OverlappingParts,
    SelfLoop,
    UnknownEdgeId,
    WeightOutOfRange,
    ZeroEdgesNotMatching,
)

SMALL, MEDIUM, LARGE = "small", "medium", "large"


def size_class(weight: int) -> str:
    if weight <= 2:
        return SMALL
    if weight == 3:
        return MEDIUM
    return LARGE


class Graph:
    """Undirected multigraph with 0/1 edge weights.

    ``edges`` maps edge id to ``(u, v, w)`` with ``u < v``. ``id_floor`` is a
    lower bound for fresh ids; graphs derived from this one inherit it so that
    pseudo edges never reuse an id of an ancestor.
    """

    __slots__ = ("vertices", "edges", "adj", "id_floor", "_partner")

    def __init__(self, vertices: Iterable[int], edges: Mapping[int, tuple], id_floor: int = 0):
        vs = frozenset(vertices)
        adj: dict[int, list[int]] = {v: [] for v in sorted(vs)}
        es: dict[int, tuple[int, int, int]] = {}
        for eid in sorted(edges):
            u, v, w = edges[eid]
            if u == v:
                raise SelfLoop(f"edge {eid} is a self-loop at {u}", edge=eid)
            if w not in (0, 1):
                raise WeightOutOfRange(f"edge {eid} has weight {w}", edge=eid)
            if u not in adj or v not in adj:
                raise ValueError(f"edge {eid} has an endpoint outside the vertex set")
            if u > v:
                u, v = v, u
            es[eid] = (u, v, w)
            adj[u].append(eid)
            adj[v].append(eid)
        self.vertices = vs
        self.edges = es
        self.adj = adj
        self.id_floor = max(id_floor, max(es) + 1 if es else 0)
        self._partner = None

    @classmethod
    def from_edges(cls, vertices: Iterable[int], triples: Iterable[tuple]) -> "Graph":
        return cls(vertices, {i: t for i, t in enumerate(triples)})

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def ends(self, eid: int) -> tuple[int, int]:
        u, v, _ = self.edges[eid]
        return u, v

    def weight(self, eid: int) -> int:
        return self.edges[eid][2]

    def other(self, eid: int, x: int) -> int:
        u, v, _ = self.edges[eid]
        return v if x == u else u

    def edge_ids(self) -> list[int]:
        return list(self.edges)

    def unit_edges(self) -> list[int]:
        return [e for e, t in self.edges.items() if t[2] == 1]

    def zero_edges(self) -> list[int]:
        return [e for e, t in self.edges.items() if t[2] == 0]

    def neighbors(self, v: int) -> list[int]:
        return sorted({self.other(e, v) for e in self.adj[v]})

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges_between(self, a: int, b: int) -> list[int]:
        return [e for e in self.adj[a] if self.other(e, a) == b]

    def zero_partner(self, v: int):
        """The other endpoint of a zero edge at v, or None (first one if several)."""
        if self._partner is None:
            p = {}
            for e, (a, b, w) in self.edges.items():
                if w == 0:
                    p.setdefault(a, b)
                    p.setdefault(b, a)
            self._partner = p
        return self._partner.get(v)

    def weight_of(self, ids: Iterable[int]) -> int:
        es = self.edges
        return sum(es[e][2] for e in ids)

    def is_simple(self) -> bool:
        seen = set()
        for u, v, _ in self.edges.values():
            if (u, v) in seen:
                return False
            seen.add((u, v))
        return True

    # derived graphs ------------------------------------------------------

    def edge_subgraph(self, ids: Iterable[int]) -> "Graph":
        es = self.edges
        return Graph(self.vertices, {e: es[e] for e in ids}, self.id_floor)

    def induced(self, vs: Iterable[int]) -> "Graph":
        vs = frozenset(vs)
        es = {e: t for e, t in self.edges.items() if t[0] in vs and t[1] in vs}
        return Graph(vs, es, self.id_floor)

    def without_edges(self, ids: Iterable[int]) -> "Graph":
        drop = set(ids)
        return Graph(self.vertices, {e: t for e, t in self.edges.items() if e not in drop}, self.id_floor)

    def with_edges(self, triples: Iterable[tuple]) -> tuple["Graph", list[int]]:
        """Add new edges with fresh ids; returns the new graph and the ids."""
        es = dict(self.edges)
        new = []
        nxt = self.id_floor
        for t in triples:
            es[nxt] = t
            new.append(nxt)
            nxt += 1
        return Graph(self.vertices, es, nxt), new


@dataclass(frozen=True)
class MapInstance:
    graph: Graph
    zero_edges: frozenset
    # relaxed instances arise internally after contraction; a vertex may then
    # carry two zero edges
    relaxed: bool = False

    @property
    def n(self):
        return self.graph.n

    @property
    def m(self):
        return self.graph.m


@dataclass(frozen=True)
class EdgeSubgraph:
    parent: Graph
    edge_ids: frozenset

    def __post_init__(self):
        object.__setattr__(self, "edge_ids", frozenset(self.edge_ids))
        missing = [e for e in self.edge_ids if e not in self.parent.edges]
        if missing:
            raise UnknownEdgeId(f"edge ids {sorted(missing)[:5]} not in graph", ids=sorted(missing))

    @property
    def weight(self) -> int:
        return self.parent.weight_of(self.edge_ids)

    def __len__(self):
        return len(self.edge_ids)

    def __iter__(self):
        return iter(sorted(self.edge_ids))


def subgraph_weight(f) -> int:
    if isinstance(f, EdgeSubgraph):
        return f.weight
    raise TypeError("subgraph_weight expects an EdgeSubgraph")


def size_measure(g: Graph) -> int:
    return 10 * g.n * g.n + g.m


# connectivity primitives ------------------------------------------------


def adjacency(g: Graph, ids: Iterable[int] | None = None, vertices=None) -> dict:
    """v -> list of (neighbour, edge id) restricted to ``ids``."""
    vs = g.vertices if vertices is None else vertices
    adj = {v: [] for v in vs}
    es = g.edges
    for e in (sorted(ids) if ids is not None else es):
        u, v, _ = es[e]
        if u in adj and v in adj:
            adj[u].append((v, e))
            adj[v].append((u, e))
    return adj


def lowlink(adj: dict) -> tuple[list[int], set[int]]:
    """Bridges and articulation points of the multigraph ``adj`` (one DFS)."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    bridges: list[int] = []
    cuts: set[int] = set()
    counter = 0
    for root in sorted(adj):
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        root_children = 0
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, pe, it = stack[-1]
            for w, e in it:
                if e == pe:
                    continue
                if w in index:
                    if index[w] < low[v]:
                        low[v] = index[w]
                else:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append((w, e, iter(adj[w])))
                    break
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if low[v] > index[p]:
                        bridges.append(pe)
                    if p == root:
                        root_children += 1
                    elif low[v] >= index[p]:
                        cuts.add(p)
        if root_children >= 2:
            cuts.add(root)
    return sorted(bridges), cuts


def components_of(adj: dict) -> list[frozenset]:
    seen = set()
    out = []
    for s in sorted(adj):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y, _ in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        out.append(frozenset(comp))
    return out


def find_bridges(g: Graph, ids: Iterable[int] | None = None) -> list[int]:
    return lowlink(adjacency(g, ids))[0]


def articulation_points(g: Graph) -> set[int]:
    return lowlink(adjacency(g))[1]


def connected_components(g: Graph, ids: Iterable[int] | None = None) -> list[frozenset]:
    return components_of(adjacency(g, ids))


def is_two_edge_connected(g: Graph, ids: Iterable[int] | None = None) -> bool:
    adj = adjacency(g, ids)
    if len(components_of(adj)) > 1:
        return False
    return not lowlink(adj)[0]


def is_spanning_2ec(g: Graph, f) -> bool:
    ids = f.edge_ids if isinstance(f, EdgeSubgraph) else f
    ids = [e for e in ids if e in g.edges]
    return is_two_edge_connected(g, ids)


def validate_map_instance(g: Graph, relaxed: bool = False) -> MapInstance:
    zero = frozenset(g.zero_edges())
    if not relaxed:
        seen: dict[int, int] = {}
        for e in sorted(zero):
            for x in g.ends(e):
                if x in seen:
                    raise ZeroEdgesNotMatching(
                        f"zero edges {seen[x]} and {e} share vertex {x}", edges=(seen[x], e), vertex=x)
                seen[x] = e
    adj = adjacency(g)
    comps = components_of(adj)
    if len(comps) > 1:
        raise NotTwoEdgeConnected(
            f"graph is disconnected ({len(comps)} components)",
            components=[sorted(c) for c in comps[:2]])
    br = lowlink(adj)[0]
    if br:
        u, v = g.ends(br[0])
        raise NotTwoEdgeConnected(f"edge {br[0]} ({u},{v}) is a bridge", bridge=br[0], bridges=br)
    return MapInstance(g, zero, relaxed)


# decomposition of 2-edge-covers ------------------------------------------


@dataclass(frozen=True)
class Block:
    vertices: frozenset
    edges: frozenset
    weight: int
    size_class: str
    bridges: tuple  # incident bridge ids
    pendant: bool


@dataclass(frozen=True)
class Component:
    vertices: frozenset
    edges: frozenset
    weight: int
    size_class: str
    bridges: frozenset
    blocks: tuple
    black: frozenset

    @property
    def complex(self) -> bool:
        return bool(self.bridges)

    @property
    def key(self) -> int:
        return min(self.vertices)


@dataclass(frozen=True)
class Decomposition:
    components: tuple
    _comp_of: dict = field(repr=False, compare=False, default_factory=dict)
    _block_of: dict = field(repr=False, compare=False, default_factory=dict)

    def component_of(self, v: int) -> Component:
        return self.components[self._comp_of[v]]

    def block_of(self, v: int):
        return self._block_of.get(v)

    def white(self, v: int) -> bool:
        return v in self._block_of

    @property
    def bridgeless(self) -> bool:
        return all(not c.bridges for c in self.components)

    def count(self, cls: str) -> int:
        return sum(1 for c in self.components if c.size_class == cls)


def decompose(g: Graph, f) -> Decomposition:
    ids = sorted(f.edge_ids if isinstance(f, EdgeSubgraph) else f)
    adj = adjacency(g, ids)
    for v in sorted(adj):
        if len(adj[v]) < 2:
            raise NotTwoEdgeCover(f"vertex {v} has degree {len(adj[v])} in the cover", vertex=v)
    bridges = set(lowlink(adj)[0])
    inner = {v: [(w, e) for w, e in adj[v] if e not in bridges] for v in adj}
    pieces = components_of(inner)
    block_of = {}
    comps = components_of(adj)
    comp_of = {}
    out = []
    es = g.edges
    for ci, cv in enumerate(comps):
        for v in cv:
            comp_of[v] = ci
        cedges = frozenset(e for e in ids if es[e][0] in cv)
        cbridges = frozenset(e for e in cedges if e in bridges)
        blocks = []
        black = []
        for p in pieces:
            if next(iter(p)) not in cv:
                continue
            if len(p) == 1:
                black.append(next(iter(p)))
                continue
            bedges = frozenset(e for e in cedges if e not in bridges and es[e][0] in p)
            inc = tuple(sorted(e for e in cbridges if es[e][0] in p or es[e][1] in p))
            w = g.weight_of(bedges)
            blk = Block(p, bedges, w, size_class(w), inc, len(inc) == 1)
            blocks.append(blk)
            for v in p:
                block_of[v] = blk
        blocks.sort(key=lambda b: min(b.vertices))
        w = g.weight_of(cedges)
        out.append(Component(cv, cedges, w, size_class(w), cbridges, tuple(blocks), frozenset(black)))
    return Decomposition(tuple(out), comp_of, block_of)


# contraction -------------------------------------------------------------


@dataclass(frozen=True)
class ContractionMap:
    original: Graph
    vertex_map: dict
    edge_map: dict  # contracted id -> original id
    dropped_loops: frozenset
    parts: tuple

    def members(self, x: int) -> frozenset:
        for p in self.parts:
            if x == min(p):
                return p
        return frozenset([x])


def contract(g: Graph, parts: Iterable[Iterable[int]]) -> tuple[Graph, ContractionMap]:
    """Contract each part to its smallest vertex. Edge ids are kept, so the
    edge map is the identity on surviving edges."""
    parts = tuple(frozenset(p) for p in parts if p)
    vmap = {v: v for v in g.vertices}
    seen: set[int] = set()
    for p in parts:
        if p & seen:
            raise OverlappingParts(f"parts overlap on {sorted(p & seen)}", vertices=sorted(p & seen))
        if not p <= g.vertices:
            raise OverlappingParts(f"part contains unknown vertices {sorted(p - g.vertices)}")
        seen |= p
        r = min(p)
        for v in p:
            vmap[v] = r
    edges = {}
    dropped = []
    for e, (u, v, w) in g.edges.items():
        a, b = vmap[u], vmap[v]
        if a == b:
            dropped.append(e)
        else:
            edges[e] = (a, b, w)
    h = Graph(set(vmap.values()), edges, g.id_floor)
    return h, ContractionMap(g, vmap, {e: e for e in edges}, frozenset(dropped), parts)


def expand_edges(m: ContractionMap, f) -> EdgeSubgraph:
    ids = f.edge_ids if isinstance(f, EdgeSubgraph) else f
    out = []
    for e in ids:
        if e not in m.edge_map:
            raise UnknownEdgeId(f"edge {e} is not an edge of the contracted graph", edge=e)
        out.append(m.edge_map[e])
    return EdgeSubgraph(m.original, frozenset(out))
