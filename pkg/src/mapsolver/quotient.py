"""The contracted graph G/H of a bridgeless 2-edge-cover H.

Nodes are the components of H, numbered in decomposition order. A link is an
edge of G outside H whose endpoints lie in different components; it remembers
the vertex it attaches to on either side, which matters for shortcuts.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import permutations

from .graph_core import LARGE, MEDIUM, SMALL, Graph


@dataclass(frozen=True)
class Link:
    eid: int
    a: int  # node
    b: int  # node
    va: int  # vertex of G in component a
    vb: int

    def other(self, node: int) -> int:
        return self.b if node == self.a else self.a

    def at(self, node: int) -> int:
        return self.va if node == self.a else self.vb


class Quotient:
    def __init__(self, gr: Graph, h_edges: frozenset, components):
        self.gr = gr
        self.h = h_edges
        self.comps = list(components)
        self.node_of = {}
        for i, c in enumerate(self.comps):
            for v in c.vertices:
                self.node_of[v] = i
        self.links: list[Link] = []
        self.adj: list[list[Link]] = [[] for _ in self.comps]
        for e in sorted(gr.edges):
            if e in h_edges:
                continue
            u, v, _ = gr.edges[e]
            a, b = self.node_of[u], self.node_of[v]
            if a == b:
                continue
            lk = Link(e, a, b, u, v)
            self.links.append(lk)
            self.adj[a].append(lk)
            self.adj[b].append(lk)
        self._ports = {}

    def __len__(self):
        return len(self.comps)

    def kind(self, x: int) -> str:
        return self.comps[x].size_class

    def weight(self, x: int) -> int:
        return self.comps[x].weight

    def nodes(self, kind: str | None = None) -> list[int]:
        return [i for i in range(len(self.comps)) if kind is None or self.comps[i].size_class == kind]

    def ports(self, x: int) -> dict:
        """Shortcut port pairs of a small or medium node.

        Maps an unordered pair {p, q} to the edge list of a Hamiltonian p-q path
        of G[V(C)] with exactly one unit edge fewer than C.
        """
        if x in self._ports:
            return self._ports[x]
        out: dict = {}
        comp = self.comps[x]
        if comp.size_class in (SMALL, MEDIUM) and len(comp.vertices) <= 6:
            out = spanning_paths(self.gr, comp.vertices, comp.weight - 1)
        self._ports[x] = out
        return out

    def links_at(self, x: int, vertex: int | None = None, exclude=()) -> list[Link]:
        return [lk for lk in self.adj[x]
                if (vertex is None or lk.at(x) == vertex) and lk.other(x) not in exclude]


def spanning_paths(gr: Graph, vertices, weight: int) -> dict:
    vs = sorted(vertices)
    pair_edge = {}
    for e in sorted(gr.edges):
        u, v, w = gr.edges[e]
        if u in vertices and v in vertices:
            key = (u, v)
            if key not in pair_edge or w < gr.weight(pair_edge[key]):
                pair_edge[key] = e
    out: dict = {}
    for perm in permutations(vs):
        if perm[0] > perm[-1]:
            continue
        edges = []
        for a, b in zip(perm, perm[1:]):
            e = pair_edge.get((min(a, b), max(a, b)))
            if e is None:
                break
            edges.append(e)
        else:
            if gr.weight_of(edges) == weight:
                key = frozenset((perm[0], perm[-1]))
                out.setdefault(key, tuple(edges))
    return out


# biconnectivity -------------------------------------------------------------


def biconnected_blocks(n: int, adj: list[list[tuple[int, int]]]) -> list[set]:
    """Vertex sets of the biconnected blocks of a multigraph on 0..n-1.

    ``adj[x]`` lists (neighbour, edge key). Isolated vertices form no block.
    """
    index = [-1] * n
    low = [0] * n
    blocks = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        estack = []
        stack = [(root, None, iter(adj[root]))]
        while stack:
            v, pe, it = stack[-1]
            for w, k in it:
                if k == pe:
                    continue
                if index[w] == -1:
                    estack.append((v, w))
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append((w, k, iter(adj[w])))
                    break
                if index[w] < index[v]:
                    estack.append((v, w))
                    if index[w] < low[v]:
                        low[v] = index[w]
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if low[v] >= index[p]:
                        blk = set()
                        while estack:
                            a, b = estack.pop()
                            blk.add(a)
                            blk.add(b)
                            if (a, b) == (p, v):
                                break
                        blocks.append(blk)
    return blocks


def nodes_on_paths(n: int, adj, s: int, t: int) -> set:
    """Vertices lying on some simple s-t path (through the block-cut tree)."""
    blocks = biconnected_blocks(n, adj)
    member: dict[int, list[int]] = {}
    for i, b in enumerate(blocks):
        for v in b:
            member.setdefault(v, []).append(i)
    if s not in member or t not in member:
        return set()
    # bipartite tree: block i -> ("b", i), vertex v -> ("v", v)
    start = ("v", s)
    prev = {start: None}
    q = deque([start])
    goal = ("v", t)
    while q:
        x = q.popleft()
        if x == goal:
            break
        if x[0] == "v":
            nxt = [("b", i) for i in member.get(x[1], [])]
        else:
            nxt = [("v", v) for v in sorted(blocks[x[1]])]
        for y in nxt:
            if y not in prev:
                prev[y] = x
                q.append(y)
    if goal not in prev:
        return set()
    out = set()
    x = goal
    while x is not None:
        if x[0] == "b":
            out |= blocks[x[1]]
        x = prev[x]
    return out


# unit capacity flow ---------------------------------------------------------


class Flow:
    """Max flow with unit-ish integer capacities by BFS augmentation."""

    def __init__(self):
        self.cap: dict = {}
        self.adj: dict = {}
        self.meta: dict = {}

    def arc(self, u, v, c=1, meta=None):
        self.cap[(u, v)] = self.cap.get((u, v), 0) + c
        self.cap.setdefault((v, u), 0)
        self.adj.setdefault(u, []).append(v)
        self.adj.setdefault(v, []).append(u)
        if meta is not None:
            self.meta[(u, v)] = meta

    def run(self, s, t, limit: int) -> int:
        self.flow = {}
        total = 0
        while total < limit:
            prev = {s: None}
            q = deque([s])
            while q and t not in prev:
                x = q.popleft()
                for y in self.adj.get(x, ()):
                    if y not in prev and self.cap[(x, y)] - self.flow.get((x, y), 0) > 0:
                        prev[y] = x
                        q.append(y)
            if t not in prev:
                break
            y = t
            while prev[y] is not None:
                x = prev[y]
                self.flow[(x, y)] = self.flow.get((x, y), 0) + 1
                self.flow[(y, x)] = self.flow.get((y, x), 0) - 1
                y = x
            total += 1
        return total

    def paths(self, s, t) -> list[list]:
        """Decompose the current flow into s-t paths (lists of arc metas)."""
        used = {k: v for k, v in self.flow.items() if v > 0}
        out = []
        while True:
            nxt = [y for y in self.adj.get(s, ()) if used.get((s, y), 0) > 0]
            if not nxt:
                break
            path = []
            x = s
            seen = {s}
            while x != t:
                y = next(y for y in self.adj[x] if used.get((x, y), 0) > 0)
                used[(x, y)] -= 1
                if (x, y) in self.meta:
                    path.append(self.meta[(x, y)])
                x = y
                if x in seen and x != t:
                    break
                seen.add(x)
            out.append(path)
        return out


def terminal_cycle(q: Quotient, src, dst, blocked=frozenset()):
    """Two internally node-disjoint paths from terminal ``src`` to ``dst`` in G/H.

    A terminal is ``(node, None)`` (any attachment, two paths) or
    ``(node, (a, b))`` (one path attaches at vertex a, the other at b).
    Returns the two paths as lists of links, or None.
    """
    sn, sp = src
    tn, tp = dst
    f = Flow()
    S, T = ("S",), ("T",)

    def src_port(vertex):
        if sp is None:
            return ("sp",)
        if vertex == sp[0]:
            return ("sa",)
        if vertex == sp[1]:
            return ("sb",)
        return None

    def dst_port(vertex):
        if tp is None:
            return ("tp",)
        if vertex == tp[0]:
            return ("ta",)
        if vertex == tp[1]:
            return ("tb",)
        return None

    if sp is None:
        f.arc(S, ("sp",), 2)
    else:
        f.arc(S, ("sa",), 1)
        f.arc(S, ("sb",), 1)
    if tp is None:
        f.arc(("tp",), T, 2)
    else:
        f.arc(("ta",), T, 1)
        f.arc(("tb",), T, 1)
    for x in range(len(q)):
        if x in (sn, tn) or x in blocked:
            continue
        f.arc(("in", x), ("out", x), 1)
    for lk in q.links:
        ends = []
        for node, vert in ((lk.a, lk.va), (lk.b, lk.vb)):
            if node in blocked:
                break
            if node == sn:
                p = src_port(vert)
                ends.append(("src", p))
            elif node == tn:
                p = dst_port(vert)
                ends.append(("dst", p))
            else:
                ends.append(("mid", node))
        if len(ends) < 2:
            continue
        for (k1, x1), (k2, x2) in (tuple(ends), tuple(reversed(ends))):
            if k1 == "dst" or k2 == "src":
                continue
            if x1 is None or x2 is None:
                continue
            tail = x1 if k1 == "src" else ("out", x1)
            head = x2 if k2 == "dst" else ("in", x2)
            mid = ("link", lk.eid, tail)
            f.arc(tail, mid, 1, meta=lk)
            f.arc(mid, head, 1)
    if f.run(S, T, 2) < 2:
        return None
    paths = f.paths(S, T)
    if len(paths) != 2:
        return None
    return paths
