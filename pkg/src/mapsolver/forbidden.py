"""Detection of forbidden configurations.

Scanners are independent so tests can run each type on its own; ``detect_forbidden``
runs them in the fixed type order and returns the first hit. Side conditions of
the form opt(side) >= k are decided exactly with bounded searches on the side
graphs. For a separator X, opt(G[V_i u X]/X) is additive over the components
grouped into V_i (the pieces only share the contracted vertex), so groupings are
chosen from per-component values capped at 4.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product

from .config import RunStats, SolverConfig
from .exact_oracle import ALPHA, min_augmentation, opt_at_most
from .graph_core import Graph, articulation_points, contract, is_two_edge_connected

CUT_VERTEX = "cut_vertex"
PARALLEL = "parallel_edge"
CONTRACTIBLE = "contractible"
S0, S1, S2, S34, SK, SK_PRIME = "S0", "S1", "S2", "S34", "Sk", "Sk'"
TYPE_ORDER = (CUT_VERTEX, PARALLEL, CONTRACTIBLE, S0, S1, S2, S34, SK, SK_PRIME)


@dataclass(frozen=True)
class ForbiddenConfig:
    kind: str
    vertices: tuple  # cut vertex, (u, v), (u, v, w) or the cycle's vertices in order
    edges: tuple = ()  # the parallel edge, (uv,), (uv, vw, g) or the spanning cycle
    sides: tuple = ()  # V1, V2 (, V3) as frozensets
    k: int | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def label(self) -> str:
        return f"{self.kind}{self.k}" if self.kind in (SK, SK_PRIME) else self.kind


class CapHit(Warning):
    pass


class Budget:
    """Candidate-set budget for contractible scans, shared across one run."""

    def __init__(self, total: int):
        self.left = total
        self.hit = False


# helpers -------------------------------------------------------------------------


class View:
    """Neighbour lists of a graph for repeated separator tests."""

    def __init__(self, gr: Graph):
        self.gr = gr
        self.nb = {v: [gr.other(e, v) for e in gr.adj[v]] for v in gr.vertices}

    def split(self, removed) -> list[frozenset] | None:
        """Components of G - removed, or None when it is connected.

        The search stops as soon as every neighbour of ``removed`` has been
        reached, since each component contains one of them."""
        removed = set(removed)
        targets = {w for x in removed for w in self.nb[x] if w not in removed}
        if not targets:
            return None
        start = min(targets)
        seen = {start}
        q = deque([start])
        hit = 1
        while q and hit < len(targets):
            x = q.popleft()
            for y in self.nb[x]:
                if y not in seen and y not in removed:
                    seen.add(y)
                    q.append(y)
                    if y in targets:
                        hit += 1
        if hit == len(targets):
            return None
        comps = []
        rest = sorted(self.gr.vertices - removed)
        done = set()
        for s in rest:
            if s in done:
                continue
            comp = {s}
            q = deque([s])
            while q:
                x = q.popleft()
                for y in self.nb[x]:
                    if y not in comp and y not in removed:
                        comp.add(y)
                        q.append(y)
            done |= comp
            comps.append(frozenset(comp))
        comps.sort(key=lambda c: (len(c), min(c)))
        return comps


def side_graph(gr: Graph, side, core, shrink: bool = True) -> tuple[Graph, int | None]:
    """G[side u core], with core contracted to min(core) when ``shrink``."""
    h = gr.induced(set(side) | set(core))
    if not shrink:
        return h, None
    h2, _ = contract(h, [core])
    return h2, min(core)


def opt_capped(h: Graph, cap: int = 4) -> int:
    """min(opt(h), cap)."""
    for k in range(cap):
        if h.n >= 3 and len(h.zero_edges()) + k < h.n:
            continue
        if opt_at_most(h, k) is not None:
            return k
    return cap


def _piece_values(gr: Graph, comps, core, cap=4) -> list[int]:
    return [opt_capped(side_graph(gr, c, core)[0], cap) for c in comps]


def _partition(values, ngroups: int, ok, fixed: dict | None = None):
    """Assignment of pieces to groups (tuple of group ids) accepted by ``ok``.

    ``ok`` receives the per-group sums and the assignment. Brute force for a
    handful of pieces, greedy largest-first otherwise."""
    r = len(values)
    fixed = fixed or {}
    if ngroups ** r <= 6561:
        for asg in product(range(ngroups), repeat=r):
            if any(asg[i] != g for i, g in fixed.items()):
                continue
            if len(set(asg)) < ngroups:
                continue
            sums = [0] * ngroups
            for i, gi in enumerate(asg):
                sums[gi] += values[i]
            if ok(sums, asg):
                return asg
        return None
    order = sorted(range(r), key=lambda i: -values[i])
    asg = [0] * r
    sums = [0] * ngroups
    for i, g in fixed.items():
        asg[i] = g
        sums[g] += values[i]
    for i in order:
        if i in fixed:
            continue
        g = min(range(ngroups), key=lambda x: (sums[x], x))
        asg[i] = g
        sums[g] += values[i]
    return tuple(asg) if ok(sums, tuple(asg)) else None


def _groups(comps, asg, ngroups) -> tuple:
    out = [set() for _ in range(ngroups)]
    for c, g in zip(comps, asg):
        out[g] |= c
    return tuple(frozenset(s) for s in out)


def _zero_neighbours(gr: Graph, v: int) -> list[int]:
    return [gr.other(e, v) for e in gr.adj[v] if gr.weight(e) == 0]


def touch_sets(gr: Graph, h: Graph, vertices) -> list[frozenset]:
    """For each vertex of G, the edges of h incident to it in G (ids are shared)."""
    return [frozenset(e for e in h.edges if x in gr.ends(e)) for x in vertices]


# cut vertex and parallel edges -----------------------------------------------------


def find_cut_vertex(gr: Graph) -> ForbiddenConfig | None:
    arts = articulation_points(gr)
    if not arts:
        return None
    v = min(arts)
    comps = View(gr).split({v})
    return ForbiddenConfig(CUT_VERTEX, (v,), (), (comps[0], frozenset().union(*comps[1:])))


def find_parallel_edge(gr: Graph) -> ForbiddenConfig | None:
    groups: dict = {}
    for e, (u, v, w) in gr.edges.items():
        groups.setdefault((u, v), []).append(e)
    for pair in sorted(groups):
        es = groups[pair]
        if len(es) > 1:
            # drop the heaviest copy, the newest among equals
            e = max(es, key=lambda x: (gr.weight(x), x))
            return ForbiddenConfig(PARALLEL, pair, (e,), (), meta={"kept": sorted(set(es) - {e})})
    return None


# contractible subgraphs ------------------------------------------------------------


class _Masks:
    def __init__(self, gr: Graph, order):
        self.order = order
        self.idx = {v: i for i, v in enumerate(order)}
        n = len(order)
        self.adj = [0] * n
        self.zero = [0] * n
        for u, v, w in gr.edges.values():
            a, b = self.idx[u], self.idx[v]
            self.adj[a] |= 1 << b
            self.adj[b] |= 1 << a
            if w == 0:
                self.zero[a] |= 1 << b
                self.zero[b] |= 1 << a

    def vertices(self, mask: int) -> list[int]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.order[low.bit_length() - 1])
            mask ^= low
        return out


def _sparse_solutions(gr: Graph, count: int = 2) -> list[frozenset]:
    """A few inclusion-minimal 2-ECSSs built by reverse delete in different orders."""
    zero = frozenset(gr.zero_edges())
    units = sorted(gr.unit_edges())
    deg = {v: len(gr.adj[v]) for v in gr.vertices}
    orders = [sorted(units, key=lambda e: (-(deg[gr.ends(e)[0]] + deg[gr.ends(e)[1]]), e)),
              sorted(units, key=lambda e: (deg[gr.ends(e)[0]] + deg[gr.ends(e)[1]], -e))]
    out = []
    for order in orders[:count]:
        keep = set(units)
        for e in order:
            keep.discard(e)
            if not is_two_edge_connected(gr, zero | keep):
                keep.add(e)
        out.append(frozenset(zero | keep))
    return out


def contractible_witness(gr: Graph, vs: frozenset):
    """(H edges, need threshold) if G[vs] makes a contractible subgraph, else None."""
    sub = gr.induced(vs)
    if not is_two_edge_connected(sub):
        return None
    h = opt_at_most(sub, sub.m)
    if h is None:
        return None
    q = -(-ALPHA.denominator * h.weight // ALPHA.numerator)
    if q <= 0:
        return None
    inner = [e for e in sub.unit_edges()]
    base = frozenset(gr.edges) - frozenset(inner)
    best, _, _ = min_augmentation(gr, base, inner, upper=q)
    if best is not None:
        return None
    return h.edge_ids, q


def detect_contractible(gr: Graph, t: int = 12, cap: int | None = 10**6, stats: RunStats | None = None,
                        budget: Budget | None = None):
    """A vertex set S, 3 <= |S| <= t, and a 2EC subgraph H spanning it such that
    every 2-ECSS of G uses at least ||H||/alpha unit edges of G[S].

    Connected vertex sets are enumerated by size, anchored at low-degree vertices
    first. Returns ``(S, H edges)`` or None. Sets on two vertices need parallel
    edges and are skipped on simple graphs.
    """
    if budget is None:
        budget = Budget(cap if cap is not None else 10**18)
    if t < 3 or gr.n < 3 or budget.left <= 0:
        if budget.left <= 0 and stats is not None:
            stats.bump("contractible.skipped")
        return None
    order = sorted(gr.vertices, key=lambda v: (len(gr.adj[v]), v))
    mk = _Masks(gr, order)
    n = len(order)
    sparse = None
    tmasks: list[list[int]] = []
    found = []

    def inner_count(mask, adjm):
        c = 0
        m = mask
        while m:
            low = m & -m
            c += bin(adjm[low.bit_length() - 1] & mask).count("1")
            m ^= low
        return c // 2

    def check(mask, size) -> bool:
        nonlocal sparse, tmasks
        m = mask
        while m:
            low = m & -m
            if bin(mk.adj[low.bit_length() - 1] & mask).count("1") < 2:
                return False
            m ^= low
        z = inner_count(mask, mk.zero)
        q0 = -(-ALPHA.denominator * (size - z) // ALPHA.numerator)
        if sparse is None:
            sparse = _sparse_solutions(gr)
            for sol in sparse:
                tm = [0] * n
                for e in sol:
                    u, v, w = gr.edges[e]
                    if w:
                        a, b = mk.idx[u], mk.idx[v]
                        tm[a] |= 1 << b
                        tm[b] |= 1 << a
                tmasks.append(tm)
        for tm in tmasks:
            if inner_count(mask, tm) < q0:
                return False
        if stats is not None:
            stats.bump("contractible.full_checks")
        vs = frozenset(mk.vertices(mask))
        wit = contractible_witness(gr, vs)
        if wit is None:
            return False
        found.append((vs, wit[0]))
        return True

    class _Done(Exception):
        pass

    def extend(sub, ext, nbh, v, size, k):
        if size == k:
            budget.left -= 1
            if budget.left < 0:
                budget.hit = True
                raise _Done
            if check(sub, size):
                raise _Done
            return
        while ext:
            low = ext & -ext
            ext ^= low
            w = low.bit_length() - 1
            # exclusive neighbours of w above the anchor
            new = mk.adj[w] & ~nbh & ~((1 << (v + 1)) - 1)
            extend(sub | low, ext | new, nbh | mk.adj[w] | low, v, size + 1, k)

    try:
        for k in range(3, min(t, n) + 1):
            for v in range(n):
                above = mk.adj[v] & ~((1 << (v + 1)) - 1)
                extend(1 << v, above, mk.adj[v] | (1 << v), v, 1, k)
    except _Done:
        pass
    if budget.hit and not found:
        if stats is not None:
            stats.bump("contractible.cap_hit")
            stats.warn(CapHit(f"contractible scan stopped at the candidate cap on a {gr.n}-vertex graph"))
        return None
    return found[0] if found else None


# separator configurations ------------------------------------------------------------


def find_s0(gr: Graph, view: View | None = None) -> ForbiddenConfig | None:
    view = view or View(gr)
    for e in sorted(gr.zero_edges()):
        u, v = gr.ends(e)
        comps = view.split({u, v})
        if comps is None:
            continue
        v1 = comps[0]
        v2 = frozenset().union(*comps[1:])
        return ForbiddenConfig(S0, (u, v), (e,), (v1, v2))
    return None


def find_s1(gr: Graph, view: View | None = None, stats: RunStats | None = None) -> ForbiddenConfig | None:
    view = view or View(gr)
    for e in sorted(gr.unit_edges()):
        a, b = gr.ends(e)
        comps = view.split({a, b})
        if comps is None:
            continue
        values = None
        for u, v in ((a, b), (b, a)):
            zs = [z for z in _zero_neighbours(gr, u) if z != v]
            if not zs:
                if stats is not None:
                    stats.bump("detect.S1.reject.no_zero_edge")
                continue
            if values is None:
                values = _piece_values(gr, comps, (u, v))
            for z in zs:
                zi = next(i for i, c in enumerate(comps) if z in c)
                asg = _partition(values, 2, lambda s, _: s[0] >= 3 and s[1] >= 4, fixed={zi: 1})
                if asg is None:
                    if stats is not None:
                        side1 = _partition(values, 2, lambda s, _: s[0] >= 3, fixed={zi: 1}) is not None
                        side2 = _partition(values, 2, lambda s, _: s[1] >= 4, fixed={zi: 1}) is not None
                        stats.bump("detect.S1.reject." + ("side1_opt" if not side1 else "side2_opt" if not side2 else "joint"))
                    continue
                v1, v2 = _groups(comps, asg, 2)
                g = next(x for x in gr.adj[u] if gr.weight(x) == 0 and gr.other(x, u) == z)
                return ForbiddenConfig(S1, (u, v), (e, g), (v1, v2))
    return None


def find_s2(gr: Graph, view: View | None = None) -> ForbiddenConfig | None:
    view = view or View(gr)
    for zvw in sorted(gr.zero_edges()):
        x, y = gr.ends(zvw)
        for v, w in ((x, y), (y, x)):
            for uv in sorted(gr.adj[v]):
                u = gr.other(uv, v)
                if gr.weight(uv) != 1 or u == w:
                    continue
                zs = [z for z in _zero_neighbours(gr, u) if z not in (v, w)]
                if not zs:
                    continue
                comps = view.split({u, v, w})
                if comps is None:
                    continue
                values = _piece_values(gr, comps, (u, v, w))
                for z in zs:
                    zi = next(i for i, c in enumerate(comps) if z in c)
                    asg = _partition(values, 2, lambda s, _: s[0] >= 3 and s[1] >= 4, fixed={zi: 1})
                    if asg is None:
                        continue
                    v1, v2 = _groups(comps, asg, 2)
                    g = next(x2 for x2 in gr.adj[u] if gr.weight(x2) == 0 and gr.other(x2, u) == z)
                    return ForbiddenConfig(S2, (u, v, w), (uv, zvw, g), (v1, v2))
    return None


def short_cycles(gr: Graph, max_len: int, cost: int) -> dict:
    """Vertex set -> edge tuple of one spanning cycle with exactly ``cost`` unit
    edges, over cycles on 3..max_len vertices. Vertex order follows the cycle."""
    out: dict = {}
    for s in sorted(gr.vertices):
        path = [s]
        edges: list[int] = []

        def dfs(x, c):
            for e in gr.adj[x]:
                y = gr.other(e, x)
                c2 = c + gr.weight(e)
                if c2 > cost:
                    continue
                if y == s:
                    if len(path) >= 3 and c2 == cost and e != edges[0]:
                        key = frozenset(path)
                        if key not in out:
                            out[key] = (tuple(path), tuple(edges + [e]))
                    continue
                if y < s or y in path or len(path) >= max_len:
                    continue
                path.append(y)
                edges.append(e)
                dfs(y, c2)
                path.pop()
                edges.pop()

        dfs(s, 0)
    return out


def _closed_under_zero(gr: Graph, vs) -> bool:
    return all(z in vs for x in vs for z in _zero_neighbours(gr, x))


def find_s34(gr: Graph, view: View | None = None, cycles: dict | None = None) -> ForbiddenConfig | None:
    view = view or View(gr)
    cycles = cycles if cycles is not None else short_cycles(gr, 4, 2)
    for key in sorted(cycles, key=lambda k: (len(k), sorted(k))):
        order, cyc = cycles[key]
        if not _closed_under_zero(gr, key):
            continue
        comps = view.split(key)
        if comps is None:
            continue
        values = _piece_values(gr, comps, key)
        asg = _partition(values, 2, lambda s, _: s[0] >= 4 and s[1] >= 4)
        case = 1
        if asg is None:
            asg = _partition(values, 2, lambda s, _: s[0] >= 4 and s[1] == 3)
            case = 2
        if asg is None:
            continue
        v1, v2 = _groups(comps, asg, 2)
        return ForbiddenConfig(S34, order, cyc, (v1, v2), len(key), meta={"case": case})
    return None


def find_sk(gr: Graph, view: View | None = None, cycles: dict | None = None, prime: bool = False):
    view = view or View(gr)
    cycles = cycles if cycles is not None else short_cycles(gr, 6, 3)
    ngroups = 2 if prime else 3
    for key in sorted(cycles, key=lambda k: (len(k), sorted(k))):
        order, cyc = cycles[key]
        if not _closed_under_zero(gr, key):
            continue
        if prime:
            inner = [x for x in order if all(y in key for y in view.nb[x])]
            if not inner:
                continue
        comps = view.split(key)
        if comps is None or len(comps) < ngroups:
            continue
        values = _piece_values(gr, comps, key)
        asg = _partition(values, ngroups, lambda s, _: all(x >= 4 for x in s))
        if asg is None:
            continue
        meta = {"u1": inner[0]} if prime else {}
        return ForbiddenConfig(SK_PRIME if prime else SK, order, cyc, _groups(comps, asg, ngroups), len(key), meta)
    return None


# driver ------------------------------------------------------------------------


def scan(gr: Graph, kind: str, config: SolverConfig | None = None, stats: RunStats | None = None,
         budget: Budget | None = None, cache: dict | None = None):
    """Run one scanner. ``cache`` shares the view and cycle lists across scanners."""
    config = config or SolverConfig()
    cache = {} if cache is None else cache
    if "view" not in cache:
        cache["view"] = View(gr)
    view = cache["view"]
    if kind == CUT_VERTEX:
        return find_cut_vertex(gr)
    if kind == PARALLEL:
        return find_parallel_edge(gr)
    if kind == CONTRACTIBLE:
        hit = detect_contractible(gr, config.contractible_t, config.contractible_cap, stats, budget)
        if hit is None:
            return None
        vs, h = hit
        return ForbiddenConfig(CONTRACTIBLE, tuple(sorted(vs)), tuple(sorted(h)))
    if kind == S0:
        return find_s0(gr, view)
    if kind == S1:
        return find_s1(gr, view, stats)
    if kind == S2:
        return find_s2(gr, view)
    if kind == S34:
        return find_s34(gr, view, short_cycles(gr, 4, 2))
    if "c3" not in cache:
        cache["c3"] = short_cycles(gr, 6, 3)
    return find_sk(gr, view, cache["c3"], prime=(kind == SK_PRIME))


def detect_forbidden(g, config: SolverConfig | None = None, stats: RunStats | None = None,
                     budget: Budget | None = None) -> ForbiddenConfig | None:
    gr = g.graph if hasattr(g, "graph") else g
    cache: dict = {}
    for kind in TYPE_ORDER:
        if kind in (CONTRACTIBLE, S1, S34, SK, SK_PRIME) and not gr.is_simple():
            continue
        hit = scan(gr, kind, config, stats, budget, cache)
        if hit is not None:
            if stats is not None:
                stats.bump(f"forbidden.{hit.label()}")
            return hit
    return None


__all__ = [
    "ForbiddenConfig", "CapHit", "Budget", "TYPE_ORDER", "detect_forbidden", "detect_contractible",
    "contractible_witness", "find_cut_vertex", "find_parallel_edge", "find_s0", "find_s1", "find_s2",
    "find_s34", "find_sk", "short_cycles", "side_graph", "opt_capped", "scan", "View",
]
