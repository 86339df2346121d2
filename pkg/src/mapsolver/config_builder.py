"""Turning an economical bridgeless 2-edge-cover into a special configuration.

Each step merges components of H along a structure found in G/H: a good
cycle, a small merge, an open 3-augmenting path, or a medium component.
Component credits live in a plain dict keyed by the component's vertex set.
The credit of a merged component is sum(credit + weight) of the parts minus
its own weight, which is the "credits + savings - bought" identity.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product

from .bridge_cover import ALPHA, COMPONENT_FLOOR
from .config import RunStats
from .errors import CaseExhausted, CreditDeficit, InvariantViolated, PathNotFound
from .graph_core import LARGE, MEDIUM, SMALL, Graph, MapInstance
from .quotient import Quotient, biconnected_blocks, nodes_on_paths, terminal_cycle
from .two_edge_cover import SPECIAL, TwoEdgeCover

TWO_LARGE, TWO_SHORTCUTS, LARGE_SHORTCUT = "two-large", "two-shortcuts", "large-plus-shortcut"


def _graph(g) -> Graph:
    return g.graph if isinstance(g, MapInstance) else g


# cycles through prescribed edges ---------------------------------------------


def _f_segments(gr: Graph, f: list[int]):
    """Split f into vertex-disjoint paths; None if f cannot lie on one cycle."""
    inc: dict[int, list[int]] = {}
    for e in f:
        for x in gr.ends(e):
            inc.setdefault(x, []).append(e)
    if any(len(es) > 2 for es in inc.values()):
        return None, None
    seen = set()
    segs = []
    for start in sorted(inc):
        if start in seen or len(inc[start]) != 1:
            continue
        path = [start]
        edges = []
        seen.add(start)
        x, prev = start, None
        while True:
            nxt = [e for e in inc[x] if e != prev]
            if not nxt:
                break
            e = nxt[0]
            y = gr.other(e, x)
            edges.append(e)
            path.append(y)
            seen.add(y)
            x, prev = y, e
        segs.append((path, edges))
    if len(seen) != len(inc):
        # some f edges close a cycle among themselves
        left = [x for x in inc if x not in seen]
        if len(left) != len(inc):
            return None, None
        cyc = _walk_cycle(gr, f, inc)
        return None, cyc
    return segs, None


def _walk_cycle(gr: Graph, f, inc):
    start = min(inc)
    order = [start]
    edges = []
    x, prev = start, None
    while True:
        e = next(e for e in inc[x] if e != prev)
        edges.append(e)
        x, prev = gr.other(e, x), e
        if x == start:
            break
        order.append(x)
    if len(edges) != len(f):
        return None
    return tuple(edges)


def cycle_through_edges(g, f) -> tuple | None:
    """A simple cycle (edge ids in order) containing every edge of f, or None.

    The edges of f form vertex-disjoint segments; we try every cyclic order and
    orientation of the segments and link consecutive ends by disjoint paths,
    found by DFS with a reachability check before each branch.
    """
    gr = _graph(g)
    f = list(dict.fromkeys(f))
    if not f:
        return None
    segs, closed = _f_segments(gr, f)
    if segs is None:
        return closed
    fset = set(f)
    seg_vertices = set()
    for p, _ in segs:
        seg_vertices.update(p)

    def reach(a, b, used):
        if a == b:
            return True
        seen = {a}
        q = deque([a])
        while q:
            x = q.popleft()
            for e in gr.adj[x]:
                if e in fset:
                    continue
                y = gr.other(e, x)
                if y == b:
                    return True
                if y not in seen and y not in used:
                    seen.add(y)
                    q.append(y)
        return False

    def link(pairs, used, acc):
        if not pairs:
            return acc
        (a, b), rest = pairs[0], pairs[1:]
        for x, y in rest:
            if not reach(x, y, used):
                return None
        stack = [(a, iter(gr.adj[a]), [])]
        on = {a}
        while stack:
            x, it, path = stack[-1]
            for e in it:
                if e in fset:
                    continue
                y = gr.other(e, x)
                if y == b:
                    res = link(rest, used | on, acc + path + [e])
                    if res is not None:
                        return res
                    continue
                if y in on or y in used:
                    continue
                if not reach(y, b, used | on):
                    continue
                on.add(y)
                stack.append((y, iter(gr.adj[y]), path + [e]))
                break
            else:
                stack.pop()
                on.discard(x)
        return None

    first, others = segs[0], segs[1:]
    for order in permutations(range(len(others))):
        for flips in product((False, True), repeat=len(others)):
            chain = [first]
            for i, fl in zip(order, flips):
                p, es = others[i]
                chain.append((p[::-1], es[::-1]) if fl else (p, es))
            pairs = [(chain[i][0][-1], chain[(i + 1) % len(chain)][0][0]) for i in range(len(chain))]
            got = link(pairs, frozenset(seg_vertices), [])
            if got is None:
                continue
            out = []
            k = 0
            for i, (p, es) in enumerate(chain):
                out.extend(es)
                # the connecting path for pair i follows segment i
                a, b = pairs[i]
                seg = []
                x = a
                while x != b:
                    e = got[k]
                    seg.append(e)
                    x = gr.other(e, x)
                    k += 1
                out.extend(seg)
            if len(set(out)) == len(out):
                return tuple(out)
        if not others:
            break
    return None


def simple_cycles_upto(g, limit: int | None = None):
    """Every simple cycle as a frozenset of edge ids (exhaustive)."""
    gr = _graph(g)
    vs = sorted(gr.vertices)
    out = set()
    for s in vs:
        stack = [(s, [], {s})]
        while stack:
            x, path, on = stack.pop()
            for e in gr.adj[x]:
                if path and e == path[-1]:
                    continue
                y = gr.other(e, x)
                if y == s and path:
                    out.add(frozenset(path + [e]))
                    continue
                if y <= s or y in on:
                    continue
                if limit is not None and len(path) + 1 >= limit:
                    continue
                stack.append((y, path + [e], on | {y}))
    return out


# structures ------------------------------------------------------------------


@dataclass(frozen=True)
class GoodCycle:
    nodes: tuple  # component vertex sets in cycle order
    edges: tuple  # link edge ids
    shortcuts: dict = field(hash=False)  # component vertex set -> spanning path edge ids
    flavor: str = TWO_LARGE

    @property
    def savings(self) -> int:
        return len(self.shortcuts)


@dataclass(frozen=True)
class AugPath3:
    nodes: tuple  # x1..x4 as vertex sets
    edges: tuple  # e1, e2, e3
    paths: dict = field(hash=False)  # x2, x3 -> spanning path with one unit edge fewer


@dataclass(frozen=True)
class SmallMerge:
    components: tuple
    cycles: tuple  # edge-id tuples; two of weight 3 or one of weight 6

    @property
    def to_large(self) -> bool:
        return len(self.cycles) == 1


def _quotient(gr: Graph, h: TwoEdgeCover) -> Quotient:
    return Quotient(gr, h.edges, h.decomposition.components)


def _node_adj(q: Quotient):
    return [[(lk.other(x), lk.eid) for lk in q.adj[x]] for x in range(len(q))]


def _cycle_from_paths(q: Quotient, paths, shortcuts, flavor) -> GoodCycle:
    p1, p2 = paths
    edges = tuple(lk.eid for lk in p1) + tuple(lk.eid for lk in reversed(p2))
    seq = []
    for lk in p1:
        for x in (lk.a, lk.b):
            if x not in seq:
                seq.append(x)
    for lk in reversed(p2):
        for x in (lk.a, lk.b):
            if x not in seq:
                seq.append(x)
    nodes = tuple(q.comps[x].vertices for x in seq)
    sc = {q.comps[x].vertices: q.ports(x)[frozenset(pr)] for x, pr in shortcuts}
    return GoodCycle(nodes, edges, sc, flavor)


def find_good_cycle(g, h: TwoEdgeCover, q: Quotient | None = None) -> GoodCycle | None:
    """A cycle of G/H through two large nodes, two shortcut nodes, or one of each.

    Candidate pairs are filtered through the block-cut tree and then realised
    as two disjoint paths by a unit-capacity flow.
    """
    gr = _graph(g)
    q = q or _quotient(gr, h)
    if len(q) < 2:
        return None
    adj = _node_adj(q)
    large = set(q.nodes(LARGE))
    for blk in biconnected_blocks(len(q), adj):
        ls = sorted(blk & large)
        if len(ls) >= 2:
            paths = terminal_cycle(q, (ls[0], None), (ls[1], None))
            if paths is not None:
                return _cycle_from_paths(q, paths, [], TWO_LARGE)
    short = [x for x in range(len(q)) if q.ports(x)]
    for s in short:
        for pr in sorted(q.ports(s), key=sorted):
            a, b = sorted(pr)
            if not q.links_at(s, a) or not q.links_at(s, b):
                continue
            # split s into s (links at a) and an extra node n (links at b)
            n = len(q)
            sadj = [list(r) for r in adj] + [[]]
            sadj[s] = []
            for lk in q.adj[s]:
                y = lk.other(s)
                v = lk.at(s)
                if v == a:
                    sadj[s].append((y, lk.eid))
                elif v == b:
                    sadj[n].append((y, lk.eid))
                    sadj[y] = [(z, k) if k != lk.eid else (n, k) for z, k in sadj[y]]
                    continue
                else:
                    sadj[y] = [(z, k) for z, k in sadj[y] if k != lk.eid]
                    continue
            on = nodes_on_paths(n + 1, sadj, s, n) - {s, n}
            for x in sorted(on & large):
                paths = terminal_cycle(q, (s, (a, b)), (x, None))
                if paths is not None:
                    return _cycle_from_paths(q, paths, [(s, (a, b))], LARGE_SHORTCUT)
            for x in sorted(on):
                if x <= s or x not in short:
                    continue
                for pr2 in sorted(q.ports(x), key=sorted):
                    a2, b2 = sorted(pr2)
                    paths = terminal_cycle(q, (s, (a, b)), (x, (a2, b2)))
                    if paths is not None:
                        return _cycle_from_paths(q, paths, [(s, (a, b)), (x, (a2, b2))], TWO_SHORTCUTS)
    return None


def find_open_3aug(g, h: TwoEdgeCover, q: Quotient | None = None) -> AugPath3 | None:
    gr = _graph(g)
    q = q or _quotient(gr, h)
    for x2 in q.nodes(SMALL):
        for pr2 in sorted(q.ports(x2), key=sorted):
            for p2, q2 in (sorted(pr2), sorted(pr2)[::-1]):
                for e2 in q.links_at(x2, q2):
                    x3 = e2.other(x2)
                    if q.kind(x3) != SMALL:
                        continue
                    p3 = e2.at(x3)
                    for pr3 in sorted(q.ports(x3), key=sorted):
                        if p3 not in pr3:
                            continue
                        (q3,) = pr3 - {p3}
                        for e1 in q.links_at(x2, p2, exclude=(x3,)):
                            x1 = e1.other(x2)
                            for e3 in q.links_at(x3, q3, exclude=(x1, x2)):
                                x4 = e3.other(x3)
                                nodes = tuple(q.comps[x].vertices for x in (x1, x2, x3, x4))
                                paths = {nodes[1]: q.ports(x2)[pr2], nodes[2]: q.ports(x3)[pr3]}
                                return AugPath3(nodes, (e1.eid, e2.eid, e3.eid), paths)
    return None


def _cycles_in(gr: Graph, vs: frozenset, weight: int, span: bool):
    """Simple cycles of G[vs] with the given weight (spanning vs if ``span``)."""
    order = sorted(vs)
    for s in order:
        stack = [(s, (), frozenset([s]), 0)]
        while stack:
            x, path, on, w = stack.pop()
            for e in gr.adj[x]:
                y = gr.other(e, x)
                if y not in vs:
                    continue
                w2 = w + gr.weight(e)
                if w2 > weight:
                    continue
                if y == s and len(path) >= 2:
                    if w2 == weight and (not span or len(on) == len(vs)):
                        yield path + (e,), on
                    continue
                if y <= s or y in on:
                    continue
                stack.append((y, path + (e,), on | {y}, w2))
        if span:
            return


_merge_cache: dict = {}


def _small_merge_for(gr: Graph, union: frozenset):
    key = (id(gr), union)
    if key in _merge_cache:
        return _merge_cache[key]
    found = None
    threes = list(_cycles_in(gr, union, 3, False))
    for i, (c1, v1) in enumerate(threes):
        for c2, v2 in threes[i + 1:]:
            if not (v1 & v2) and (v1 | v2) == union:
                found = (c1, c2)
                break
        if found:
            break
    if found is None:
        for c, _ in _cycles_in(gr, union, 6, True):
            found = (c,)
            break
    if len(_merge_cache) > 100000:
        _merge_cache.clear()
    _merge_cache[key] = found
    return found


def find_small_merge(g, h: TwoEdgeCover, q: Quotient | None = None) -> SmallMerge | None:
    gr = _graph(g)
    q = q or _quotient(gr, h)
    smalls = set(q.nodes(SMALL))
    nbr = {x: sorted({lk.other(x) for lk in q.adj[x]} & smalls) for x in smalls}
    seen = set()
    for a in sorted(smalls):
        for b in nbr[a]:
            for c in sorted(set(nbr[a]) | set(nbr[b])):
                trip = tuple(sorted({a, b, c}))
                if len(trip) != 3 or trip in seen:
                    continue
                seen.add(trip)
                union = frozenset().union(*(q.comps[x].vertices for x in trip))
                cyc = _small_merge_for(gr, union)
                if cyc is not None:
                    return SmallMerge(tuple(q.comps[x].vertices for x in trip), cyc)
    return None


# merging ---------------------------------------------------------------------


def _merge(gr: Graph, h: TwoEdgeCover, credits: dict, remove, add, stats: RunStats | None,
           label: str, savings: int | None = None, floors: dict = COMPONENT_FLOOR):
    """Apply an exchange and re-pool credits; None if the result is not valid."""
    remove = frozenset(remove)
    add = frozenset(add)
    h2 = h.replace(remove=remove - add, add=add)
    try:
        new = h2.decomposition
    except Exception:
        return None
    if not new.bridgeless:
        return None
    old = h.decomposition
    old_keys = {c.vertices for c in old.components}
    fresh = [c for c in new.components if c.vertices not in old_keys]
    if len(new.components) >= len(old.components):
        return None
    if savings is not None:
        delta = h2.weight - h.weight
        bought = gr.weight_of(e for e in add - h.edges if old._comp_of[gr.ends(e)[0]] != old._comp_of[gr.ends(e)[1]])
        if delta != bought - savings:
            raise InvariantViolated(f"{label}: weight change {delta} differs from bought {bought} minus savings {savings}")
    absorbed = [c for c in old.components if c.vertices not in {x.vertices for x in new.components}]
    pool = sum((credits[c.vertices] + c.weight for c in absorbed), Fraction(0))
    pool -= sum(c.weight for c in fresh)
    out = {k: v for k, v in credits.items() if k not in {c.vertices for c in absorbed}}
    share = pool / len(fresh)
    for c in fresh:
        out[c.vertices] = share
        floor = floors[c.size_class]
        if share < floor:
            exc = CreditDeficit(f"{label}: component {sorted(c.vertices)} has credit {share} < {floor}",
                                component=sorted(c.vertices))
            if stats is None:
                raise exc
            stats.fail(exc)
    if stats is not None:
        stats.bump(label)
    return TwoEdgeCover(gr, h2.edges, h.provenance), out


def merge_good_cycle(g, h: TwoEdgeCover, credits: dict, gc: GoodCycle, stats: RunStats | None = None,
                     label: str = "special.good_cycle", floors: dict = COMPONENT_FLOOR):
    gr = _graph(g)
    comp = {c.vertices: c for c in h.decomposition.components}
    remove = set()
    add = set(gc.edges)
    for key, path in gc.shortcuts.items():
        remove |= comp[key].edges
        add |= set(path)
    res = _merge(gr, h, credits, remove, add, stats, label, gc.savings, floors)
    if res is None:
        raise InvariantViolated(f"good cycle {gc.edges} does not merge into a bridgeless component")
    return res


def _bfs_nodes(q: Quotient, src: int, dst, blocked=frozenset(), within=None):
    """Shortest node path src -> dst in G/H as a list of links."""
    goal = {dst} if isinstance(dst, int) else set(dst)
    if src in goal:
        return []
    prev = {src: None}
    dq = deque([src])
    while dq:
        x = dq.popleft()
        for lk in q.adj[x]:
            y = lk.other(x)
            if y in prev or y in blocked or (within is not None and y not in within):
                continue
            prev[y] = (x, lk)
            if y in goal:
                out = []
                while prev[y] is not None:
                    y, l2 = prev[y]
                    out.append(l2)
                return out[::-1]
            dq.append(y)
    return None


def merge_open_3aug(g, h: TwoEdgeCover, credits: dict, aug: AugPath3, stats: RunStats | None = None):
    gr = _graph(g)
    q = _quotient(gr, h)
    idx = {c.vertices: i for i, c in enumerate(q.comps)}
    x1, x2, x3, x4 = (idx[k] for k in aug.nodes)
    p1 = _bfs_nodes(q, x1, x3, blocked={x2, x4})
    if p1 is None:
        raise PathNotFound("no path from x1 to x3 avoiding x2", nodes=[min(k) for k in aug.nodes])
    used = {x for lk in p1 for x in (lk.a, lk.b)}
    p2 = _bfs_nodes(q, x4, x2, blocked=used | {x3, x1})
    if p2 is None:
        raise PathNotFound("no path from x4 to x2 disjoint from the first connector",
                           nodes=[min(k) for k in aug.nodes])
    remove = set(q.comps[x2].edges) | set(q.comps[x3].edges)
    add = set(aug.edges) | {lk.eid for lk in p1} | {lk.eid for lk in p2}
    for path in aug.paths.values():
        add |= set(path)
    res = _merge(gr, h, credits, remove, add, stats, "special.open_3aug", 2)
    if res is None:
        raise PathNotFound("open 3-augmenting path did not merge into a bridgeless component")
    return res


def apply_small_merge(g, h: TwoEdgeCover, credits: dict, sm: SmallMerge, stats: RunStats | None = None):
    gr = _graph(g)
    comp = {c.vertices: c for c in h.decomposition.components}
    remove = set().union(*(comp[k].edges for k in sm.components))
    add = set().union(*(set(c) for c in sm.cycles))
    res = _merge(gr, h, credits, remove, add, stats, "special.small_to_large" if sm.to_large else "special.small_to_medium")
    if res is None:
        raise InvariantViolated("small merge cycles do not form bridgeless components")
    if gr.weight_of(res[0].edges) != h.weight:
        raise InvariantViolated("small merge changed the weight")
    return res


def _unit_edges(gr: Graph, comp):
    return [e for e in sorted(comp.edges) if gr.weight(e) == 1]


def _sides(q: Quotient, c: int) -> list[set]:
    seen = {c}
    out = []
    for s in range(len(q)):
        if s in seen:
            continue
        part = {s}
        seen.add(s)
        dq = deque([s])
        while dq:
            x = dq.popleft()
            for lk in q.adj[x]:
                y = lk.other(x)
                if y not in seen:
                    seen.add(y)
                    part.add(y)
                    dq.append(y)
        out.append(part)
    return out


def _ear_at_unit_edge(gr, h, credits, q, c, stats, within=None):
    """Sell a unit edge uv of C, buy links at u and v plus a connecting path."""
    for e in _unit_edges(gr, q.comps[c]):
        u, v = gr.ends(e)
        for l1 in q.links_at(c, u):
            for l2 in q.links_at(c, v):
                x1, x2 = l1.other(c), l2.other(c)
                if within is not None and not ({x1, x2} <= within):
                    continue
                path = _bfs_nodes(q, x1, x2, blocked={c}, within=within)
                if path is None:
                    continue
                add = {l1.eid, l2.eid} | {lk.eid for lk in path}
                res = _merge(gr, h, credits, {e}, add, stats, "special.medium.ear", 1)
                if res is not None:
                    return res
    return None


def eliminate_medium(g, h: TwoEdgeCover, credits: dict, comp, stats: RunStats | None = None):
    """Merge the medium component ``comp`` into its surroundings."""
    gr = _graph(g)
    q = _quotient(gr, h)
    c = next(i for i, x in enumerate(q.comps) if x.vertices == comp.vertices)
    sides = _sides(q, c)
    if len(sides) <= 1:
        res = _ear_at_unit_edge(gr, h, credits, q, c, stats)
        if res is None:
            raise CaseExhausted("no unit edge of the medium component has two outgoing edges",
                                subcase="non-separator", component=sorted(comp.vertices))
        return res
    for side in sides:
        if len(side) != 1:
            continue
        (x,) = side
        if q.kind(x) == MEDIUM:
            for e in _unit_edges(gr, q.comps[x]):
                u, v = gr.ends(e)
                for f1 in q.links_at(x, u):
                    for f2 in q.links_at(x, v):
                        res = _merge(gr, h, credits, {e}, {f1.eid, f2.eid}, stats, "special.medium.medium_side", 1)
                        if res is not None:
                            return res
        elif q.kind(x) == SMALL:
            for pr, path in sorted(q.ports(x).items(), key=lambda kv: sorted(kv[0])):
                a, b = sorted(pr)
                for f1 in q.links_at(x, a):
                    for f2 in q.links_at(x, b):
                        res = _merge(gr, h, credits, set(q.comps[x].edges), {f1.eid, f2.eid} | set(path),
                                     stats, "special.medium.small_side", 1)
                        if res is not None:
                            return res
    for side in sides:
        res = _ear_at_unit_edge(gr, h, credits, q, c, stats, within=side)
        if res is not None:
            return res
    side_of = {x: i for i, s in enumerate(sides) for x in s}
    units = _unit_edges(gr, q.comps[c])
    for i, ea in enumerate(units):
        for eb in units[i + 1:]:
            ua, va = gr.ends(ea)
            for ub, vb in (gr.ends(eb), gr.ends(eb)[::-1]):
                for fa, fb, ga, gb in product(q.links_at(c, ua), q.links_at(c, ub), q.links_at(c, va), q.links_at(c, vb)):
                    s1 = side_of[fa.other(c)]
                    s2 = side_of[ga.other(c)]
                    if s1 == s2 or side_of[fb.other(c)] != s1 or side_of[gb.other(c)] != s2:
                        continue
                    p1 = _bfs_nodes(q, fa.other(c), fb.other(c), within=sides[s1])
                    p2 = _bfs_nodes(q, ga.other(c), gb.other(c), within=sides[s2])
                    if p1 is None or p2 is None:
                        continue
                    add = {fa.eid, fb.eid, ga.eid, gb.eid} | {lk.eid for lk in p1 + p2}
                    res = _merge(gr, h, credits, {ea, eb}, add, stats, "special.medium.nice_case", 2)
                    if res is not None:
                        return res
    raise CaseExhausted("medium separator with no applicable subcase", subcase="separator",
                        component=sorted(comp.vertices), sides=len(sides))


def _merge_any_cycle(gr: Graph, h: TwoEdgeCover, credits: dict, key, stats: RunStats | None,
                     label: str = "special.fallback_cycle", floors: dict = COMPONENT_FLOOR):
    """Generic repair: buy a cycle of G/H through the given component."""
    q = _quotient(gr, h)
    x = next(i for i, c in enumerate(q.comps) if c.vertices == key)
    for lk in q.adj[x]:
        y = lk.other(x)
        prev = {y: None}
        dq = deque([y])
        while dq and x not in prev:
            z = dq.popleft()
            for l2 in q.adj[z]:
                if l2.eid == lk.eid:
                    continue
                w = l2.other(z)
                if w not in prev:
                    prev[w] = (z, l2)
                    dq.append(w)
        if x not in prev:
            continue
        add = {lk.eid}
        z = x
        while prev[z] is not None:
            z, l2 = prev[z]
            add.add(l2.eid)
        res = _merge(gr, h, credits, (), add, stats, label, 0, floors)
        if res is not None:
            return res
    raise InvariantViolated("no cycle of G/H through the component")


# driver ------------------------------------------------------------------------


@dataclass
class SpecialResult:
    cover: TwoEdgeCover
    credits: dict
    steps: list


def initial_credits(h: TwoEdgeCover, ledger=None) -> dict:
    """Per-component credits taken from a bridge-cover ledger (or the floors)."""
    out = {}
    for c in h.decomposition.components:
        out[c.vertices] = ledger.component_total(c) if ledger is not None else COMPONENT_FLOOR[c.size_class]
    return out


def economical_gap(h: TwoEdgeCover, d2_weight: int) -> Fraction:
    dec = h.decomposition
    bound = (ALPHA * d2_weight - 2 * dec.count(LARGE) - Fraction(15, 8) * dec.count(MEDIUM)
             - Fraction(5, 4) * dec.count(SMALL))
    return bound - h.weight


def special_violations(g, h: TwoEdgeCover) -> list[str]:
    gr = _graph(g)
    q = _quotient(gr, h)
    out = []
    if not h.decomposition.bridgeless:
        out.append("bridge")
    if h.decomposition.count(MEDIUM):
        out.append("medium-component")
    if find_good_cycle(gr, h, q) is not None:
        out.append("good-cycle")
    if find_small_merge(gr, h, q) is not None:
        out.append("small-merge")
    if find_open_3aug(gr, h, q) is not None:
        out.append("open-3-augmenting-path")
    return out


def special_configuration(g, h: TwoEdgeCover, credits: dict | None = None, stats: RunStats | None = None,
                          d2_weight: int | None = None) -> SpecialResult:
    gr = _graph(g)
    credits = dict(credits) if credits is not None else initial_credits(h)
    steps = []
    for _ in range(len(h.decomposition.components) + 1):
        q = _quotient(gr, h)
        if len(q) == 1:
            break
        gc = find_good_cycle(gr, h, q)
        if gc is not None:
            h, credits = merge_good_cycle(gr, h, credits, gc, stats)
            steps.append(("good_cycle", gc.flavor))
            continue
        sm = find_small_merge(gr, h, q)
        if sm is not None:
            h, credits = apply_small_merge(gr, h, credits, sm, stats)
            steps.append(("small_merge", "large" if sm.to_large else "medium"))
            continue
        aug = find_open_3aug(gr, h, q)
        if aug is not None:
            try:
                h, credits = merge_open_3aug(gr, h, credits, aug, stats)
                steps.append(("open_3aug", None))
            except PathNotFound as exc:
                if stats is None:
                    raise
                stats.fail(exc)
                h, credits = _merge_any_cycle(gr, h, credits, aug.nodes[1], stats)
                steps.append(("fallback", "open_3aug"))
            continue
        med = [c for c in h.decomposition.components if c.size_class == MEDIUM]
        if med:
            try:
                h, credits = eliminate_medium(gr, h, credits, med[0], stats)
                steps.append(("medium", None))
            except CaseExhausted as exc:
                if stats is None:
                    raise
                stats.fail(exc)
                h, credits = _merge_any_cycle(gr, h, credits, med[0].vertices, stats)
                steps.append(("fallback", "medium"))
            continue
        break
    else:
        raise InvariantViolated("special configuration loop did not terminate")
    if d2_weight is not None and stats is not None:
        gap = economical_gap(h, d2_weight)
        stats.special_checks.append((h.weight, h.weight + gap))
        if gap < 0:
            stats.fail(CreditDeficit(f"special configuration is not economical (gap {gap})"))
    bad = special_violations(gr, h)
    if bad:
        exc = InvariantViolated(f"output is not a special configuration: {bad}")
        if stats is None:
            raise exc
        stats.fail(exc)
    return SpecialResult(TwoEdgeCover(gr, h.edges, SPECIAL), credits, steps)


def build_special_config(g, h: TwoEdgeCover, stats: RunStats | None = None, ledger=None,
                         d2_weight: int | None = None) -> TwoEdgeCover:
    credits = initial_credits(h, ledger)
    return special_configuration(g, h, credits, stats, d2_weight).cover
