"""Exact minimum 2-ECSS by branch and bound, bounded-weight queries, and f(opt).

Zero edges are always taken, so the search only decides unit edges. A node of
the search is a pair (included, excluded). We branch on a 2-edge-connected
class of the current graph that is a leaf or an isolated node of its bridge
forest: some further edge must leave it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import BudgetExceeded, NotTwoEdgeConnected, TooLarge, WeightMismatch
from .graph_core import EdgeSubgraph, Graph, MapInstance, adjacency, components_of, lowlink

ALPHA = Fraction(13, 8)


def f_value(opt_weight: int) -> Fraction:
    w = Fraction(opt_weight)
    return max(ALPHA * w - 2, w)


@dataclass(frozen=True)
class ExactResult:
    weight: int
    witness: EdgeSubgraph
    nodes_explored: int
    complete: bool = True


def _graph(g) -> Graph:
    return g.graph if isinstance(g, MapInstance) else g


class _Stop(Exception):
    pass


def _forest(g: Graph, ids) -> tuple[dict, list[tuple[int, int]]]:
    """Label vertices by 2-edge-connected class; return (label, deficient)
    where deficient lists (class label, demand) of forest leaves/isolated classes."""
    adj = adjacency(g, ids)
    bridges, _ = lowlink(adj)
    bset = set(bridges)
    inner = {v: [(w, e) for w, e in adj[v] if e not in bset] for v in adj}
    label = {}
    for i, comp in enumerate(components_of(inner)):
        for v in comp:
            label[v] = i
    k = len(set(label.values()))
    if k == 1:
        return label, []
    deg = [0] * k
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    es = g.edges
    for e in bridges:
        a, b = label[es[e][0]], label[es[e][1]]
        deg[a] += 1
        deg[b] += 1
        parent[find(a)] = find(b)
    trees = len({find(i) for i in range(k)})
    deficient = []
    for i in range(k):
        if deg[i] == 0:
            if trees > 1:
                deficient.append((i, 2))
        elif deg[i] == 1:
            deficient.append((i, 1))
    return label, deficient


def min_augmentation(g: Graph, base: Iterable[int], cands: Iterable[int], upper: int | None = None,
                     budget: int | None = None, must_hit: Iterable[frozenset] = (),
                     incumbent: Iterable[int] | None = None):
    """Smallest set S of candidate edges such that base + S spans g 2-edge-connected
    and meets every set in ``must_hit``.

    Only solutions with |S| < ``upper`` are reported. Returns ``(S, nodes, complete)``;
    S is None when no such set exists. Every candidate counts 1.
    """
    es = g.edges
    base = frozenset(base)
    cands = sorted(set(cands) - base)
    candset = set(cands)
    must_hit = [frozenset(s) for s in must_hit]
    nodes = 0
    best = None
    bound = upper if upper is not None else len(cands) + 1

    def feasible(excluded):
        ids = base.union(e for e in cands if e not in excluded)
        if any(not (s & ids) for s in must_hit):
            return False
        adj = adjacency(g, ids)
        if len(components_of(adj)) > 1:
            return False
        return not lowlink(adj)[0]

    if not feasible(frozenset()):
        return None, 1, True

    if incumbent is not None:
        inc = frozenset(incumbent) - base
        if len(inc) < bound:
            best, bound = inc, len(inc)
    elif upper is None:
        inc = _reverse_delete(g, base, cands, must_hit)
        best, bound = inc, len(inc)

    def rec(included, excluded):
        nonlocal nodes, best, bound
        nodes += 1
        if budget is not None and nodes > budget:
            raise _Stop
        cur = base | included
        label, deficient = _forest(g, cur)
        unsat = [s for s in must_hit if not (s & cur)]
        if not deficient:
            if not unsat:
                if len(included) < bound:
                    best, bound = included, len(included)
                return
            if len(included) + 1 >= bound:
                return
            options = [e for e in sorted(unsat[0]) if e in candset and e not in excluded and e not in cur]
        else:
            demand = sum(d for _, d in deficient)
            if len(included) + (demand + 1) // 2 >= bound:
                return
            defset = {i for i, _ in deficient}
            avail = [e for e in cands if e not in excluded and e not in included]
            cross: dict[int, list[int]] = {i: [] for i in defset}
            for e in avail:
                a, b = label[es[e][0]], label[es[e][1]]
                if a == b:
                    continue
                if a in cross:
                    cross[a].append(e)
                if b in cross:
                    cross[b].append(e)
            x = min(defset, key=lambda i: (len(cross[i]), i))
            options = cross[x]
            # edges that also serve a second deficient class first
            options.sort(key=lambda e: (not (label[es[e][0]] in defset and label[es[e][1]] in defset), e))
        excl = set(excluded)
        for i, e in enumerate(options):
            if i:
                excl.add(options[i - 1])
                if not feasible(excl):
                    break
            rec(included | {e}, frozenset(excl))

    complete = True
    try:
        rec(frozenset(), frozenset())
    except _Stop:
        complete = False
    return best, nodes, complete


def _reverse_delete(g: Graph, base: frozenset, cands: list[int], must_hit=()) -> frozenset:
    """A minimal feasible candidate set; high-degree endpoints are pruned first."""
    es = g.edges
    keep = set(cands)
    deg = {v: len(g.adj[v]) for v in g.vertices}
    order = sorted(cands, key=lambda e: (-(deg[es[e][0]] + deg[es[e][1]]), e))
    for e in order:
        keep.discard(e)
        ids = base | keep
        ok = all(s & ids for s in must_hit)
        if ok:
            adj = adjacency(g, ids)
            ok = len(components_of(adj)) == 1 and not lowlink(adj)[0]
        if not ok:
            keep.add(e)
    return frozenset(keep)


def opt_exact(g, budget: int | None = None, max_vertices: int | None = 20) -> ExactResult:
    gr = _graph(g)
    if max_vertices is not None and gr.n > max_vertices:
        raise TooLarge(f"{gr.n} vertices exceeds the exact threshold {max_vertices}")
    zero = gr.zero_edges()
    best, nodes, complete = min_augmentation(gr, zero, gr.unit_edges(), budget=budget)
    if best is None:
        raise NotTwoEdgeConnected("instance has no 2-edge-connected spanning subgraph")
    wit = EdgeSubgraph(gr, frozenset(zero) | best)
    res = ExactResult(len(best), wit, nodes, complete)
    if not complete:
        raise BudgetExceeded(f"node budget {budget} exhausted", best=res)
    return res


def _touch_sets(gr: Graph, vertices) -> list[frozenset]:
    return [frozenset(gr.adj[v]) for v in sorted(set(vertices))]


def opt_at_most(g, k: int, attach: Iterable[int] | None = None, must_hit: Iterable = ()):
    """A 2-ECSS of weight at most k (all zero edges plus at most k unit edges) or None.

    ``attach`` lists vertices the witness must be incident to; ``must_hit`` lists
    edge-id sets the witness must intersect.
    """
    gr = _graph(g)
    zero = gr.zero_edges()
    # a 2-ECSS on n >= 3 vertices has at least n edges
    if gr.n >= 3 and len(zero) + k < gr.n:
        return None
    sets = list(must_hit) + (_touch_sets(gr, attach) if attach else [])
    best, _, _ = min_augmentation(gr, zero, gr.unit_edges(), upper=k + 1, must_hit=sets)
    if best is None:
        return None
    return EdgeSubgraph(gr, frozenset(zero) | best)


def opt_weight_capped(g, cap: int) -> int:
    """min(opt(g), cap + 1) computed with bounded searches."""
    gr = _graph(g)
    w = opt_at_most(gr, cap)
    if w is None:
        return cap + 1
    return w.weight


def has_opt_with_attachment(g, w: int, must_touch: Iterable[int] = (), must_hit: Iterable = ()) -> bool:
    gr = _graph(g)
    if opt_at_most(gr, w) is None or (w > 0 and opt_at_most(gr, w - 1) is not None):
        raise WeightMismatch(f"opt is not {w}")
    return opt_at_most(gr, w, attach=must_touch, must_hit=must_hit) is not None


def min_2edge_cover_bruteforce(g) -> int:
    """Minimum weight subgraph with every degree at least 2, by exhaustive search."""
    gr = _graph(g)
    if gr.n > 10:
        raise TooLarge("brute-force 2-edge-cover is limited to 10 vertices")
    need = {v: 2 for v in gr.vertices}
    for e in gr.zero_edges():
        for x in gr.ends(e):
            need[x] -= 1
    units = gr.unit_edges()
    inc = {v: [e for e in units if v in gr.ends(e)] for v in gr.vertices}
    best = [len(units) + 1]

    def rec(need, used, banned):
        open_ = [v for v in need if need[v] > 0]
        if not open_:
            best[0] = min(best[0], used)
            return
        if used + (sum(max(0, need[v]) for v in open_) + 1) // 2 >= best[0]:
            return
        v = min(open_, key=lambda x: (len([e for e in inc[x] if e not in banned]), x))
        opts = [e for e in inc[v] if e not in banned]
        ban = set(banned)
        for e in opts:
            a, b = gr.ends(e)
            nn = dict(need)
            nn[a] -= 1
            nn[b] -= 1
            rec(nn, used + 1, frozenset(ban | {e}))
            ban.add(e)

    rec(need, 0, frozenset())
    if best[0] > len(units):
        raise NotTwoEdgeConnected("no 2-edge-cover exists")
    return best[0]
