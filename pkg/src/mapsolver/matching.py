"""Maximum cardinality matching (Edmonds' blossom algorithm) and maximum
degree-constrained subgraphs through the standard gadget reduction."""

from __future__ import annotations

from collections import deque
from typing import Mapping

from .errors import CapacityExceedsDegree, MapError
from .graph_core import EdgeSubgraph, Graph


def _blossom(nv: int, adj: list[list[int]]) -> list[int]:
    """mate[v] for a maximum matching of the simple graph on 0..nv-1."""
    match = [-1] * nv
    for v in range(nv):
        if match[v] == -1:
            for w in adj[v]:
                if match[w] == -1:
                    match[v], match[w] = w, v
                    break

    def lca(a, b, base, parent):
        seen = [False] * nv
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark(v, b, child, base, parent, blossom):
        while base[v] != b:
            blossom[base[v]] = blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    def search(root):
        used = [False] * nv
        parent = [-1] * nv
        base = list(range(nv))
        used[root] = True
        q = deque([root])
        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = lca(v, to, base, parent)
                    blossom = [False] * nv
                    mark(v, cur, to, base, parent, blossom)
                    mark(to, cur, v, base, parent, blossom)
                    for i in range(nv):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return to, parent
                    used[match[to]] = True
                    q.append(match[to])
        return -1, parent

    for root in range(nv):
        if match[root] != -1:
            continue
        v, parent = search(root)
        while v != -1:
            pv = parent[v]
            nxt = match[pv]
            match[v], match[pv] = pv, v
            v = nxt
    return match


def max_matching(g: Graph) -> frozenset:
    """Edge ids of a maximum matching; among parallel edges the lowest id is used."""
    verts = sorted(g.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    pair_edge: dict[tuple[int, int], int] = {}
    for e, (u, v, _) in g.edges.items():
        pair_edge.setdefault((idx[u], idx[v]), e)
    adj: list[list[int]] = [[] for _ in verts]
    for a, b in sorted(pair_edge):
        adj[a].append(b)
        adj[b].append(a)
    mate = _blossom(len(verts), adj)
    out = set()
    for a, b in enumerate(mate):
        if b > a:
            out.add(pair_edge[(a, b)])
    return frozenset(out)


def max_degree_constrained_subgraph(g: Graph, bbar: Mapping[int, int]) -> EdgeSubgraph:
    """Largest edge set F with deg_F(v) <= bbar[v] for every vertex.

    Vertex v becomes bbar[v] copies; edge e = uv becomes a path e_u - e_v whose
    ends see all copies of u and of v respectively. A maximum matching of the
    gadget has size m + |F|.
    """
    for v in g.vertices:
        b = bbar.get(v, 0)
        if b < 0 or b > g.degree(v):
            raise CapacityExceedsDegree(f"capacity {b} at vertex {v} exceeds degree {g.degree(v)}", vertex=v)
    nodes = 0
    copies: dict[int, list[int]] = {}
    for v in sorted(g.vertices):
        copies[v] = list(range(nodes, nodes + bbar.get(v, 0)))
        nodes += bbar.get(v, 0)
    eids = sorted(g.edges)
    ends = {}
    for e in eids:
        ends[e] = (nodes, nodes + 1)
        nodes += 2
    adj: list[list[int]] = [[] for _ in range(nodes)]
    for e in eids:
        u, v, _ = g.edges[e]
        a, b = ends[e]
        adj[a].append(b)
        adj[b].append(a)
        for c in copies[u]:
            adj[a].append(c)
            adj[c].append(a)
        for c in copies[v]:
            adj[b].append(c)
            adj[c].append(b)
    mate = _blossom(nodes, adj)
    size = sum(1 for x in mate if x != -1) // 2
    chosen = set()
    for e in eids:
        a, b = ends[e]
        if mate[a] == -1 and mate[b] == -1:
            raise MapError(f"gadget of edge {e} left unmatched by a maximum matching")
        if mate[a] not in (-1, b) and mate[b] not in (-1, a):
            chosen.add(e)
    if len(chosen) != size - len(eids):
        raise MapError("gadget projection does not match the matching size")
    return EdgeSubgraph(g, frozenset(chosen))
