"""Covering the bridges of a canonical D2 by pseudo-ears under the 13/8 credit scheme.

Every unit edge of the D2 carries 13/8: one unit pays for the edge and 5/8 is
split as 5/16 per endpoint. Those vertex credits are then pooled into
component (c), block (b) and black vertex (n) credits. Buying an ear edge
costs one credit.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .config import RunStats
from .errors import CreditDeficit, InvariantViolated, NoPseudoEar
from .graph_core import LARGE, MEDIUM, SMALL, Decomposition, Graph, MapInstance
from .two_edge_cover import BRIDGELESS, TwoEdgeCover

ALPHA = Fraction(13, 8)
VERTEX_SHARE = Fraction(5, 16)
SINGLE_BLOCK_NEED = {SMALL: Fraction(1, 4), MEDIUM: Fraction(7, 8), LARGE: Fraction(1)}
COMPONENT_FLOOR = {SMALL: Fraction(5, 4), MEDIUM: Fraction(15, 8), LARGE: Fraction(2)}


def _graph(g) -> Graph:
    return g.graph if isinstance(g, MapInstance) else g


@dataclass
class CreditLedger:
    c: dict = field(default_factory=dict)  # component vertex set -> credit
    b: dict = field(default_factory=dict)  # block vertex set -> credit
    n: dict = field(default_factory=dict)  # black vertex -> credit

    def total(self) -> Fraction:
        return sum(self.c.values(), Fraction(0)) + sum(self.b.values(), Fraction(0)) + sum(self.n.values(), Fraction(0))

    def component_total(self, comp) -> Fraction:
        t = self.c.get(comp.vertices, Fraction(0))
        t += sum((self.b.get(b.vertices, Fraction(0)) for b in comp.blocks), Fraction(0))
        t += sum((self.n.get(v, Fraction(0)) for v in comp.black), Fraction(0))
        return t

    def copy(self) -> "CreditLedger":
        return CreditLedger(dict(self.c), dict(self.b), dict(self.n))


def _unit_deg(gr: Graph, edges: frozenset) -> dict:
    d = {v: 0 for v in gr.vertices}
    for e in edges:
        u, v, w = gr.edges[e]
        if w:
            d[u] += 1
            d[v] += 1
    return d


def block_need(comp, block) -> Fraction:
    if not comp.complex:
        return SINGLE_BLOCK_NEED[block.size_class]
    return Fraction(1)


def ledger_violations(gr: Graph, h: TwoEdgeCover, ledger: CreditLedger) -> list[str]:
    dec = h.decomposition
    ud = _unit_deg(gr, h.edges)
    out = []
    for comp in dec.components:
        c = ledger.c.get(comp.vertices)
        if c is None or c < 1:
            out.append(f"component {sorted(comp.vertices)} has c-credit {c}")
        for b in comp.blocks:
            have = ledger.b.get(b.vertices)
            if have is None or have < block_need(comp, b):
                out.append(f"block {sorted(b.vertices)} has b-credit {have}")
        for v in comp.black:
            have = ledger.n.get(v)
            if have is None or have < VERTEX_SHARE * ud[v]:
                out.append(f"black vertex {v} has n-credit {have}")
    return out


def init_credits(g, h: TwoEdgeCover) -> CreditLedger:
    gr = _graph(g)
    ud = _unit_deg(gr, h.edges)
    vc = {v: VERTEX_SHARE * ud[v] for v in gr.vertices}
    led = CreditLedger()
    for comp in h.decomposition.components:
        for v in comp.black:
            led.n[v] = vc[v]
        pools = {b.vertices: sum((vc[v] for v in b.vertices), Fraction(0)) for b in comp.blocks}
        if not comp.complex:
            (b,) = comp.blocks
            led.c[comp.vertices] = Fraction(1)
            led.b[b.vertices] = pools[b.vertices] - 1
        else:
            led.b.update(pools)
            large = [b for b in comp.blocks if b.size_class == LARGE]
            if large:
                led.b[large[0].vertices] -= 1
                led.c[comp.vertices] = Fraction(1)
            else:
                pend = [b for b in comp.blocks if b.pendant][:2]
                if len(pend) < 2:
                    raise InvariantViolated(f"complex component {sorted(comp.vertices)} lacks two pendant blocks")
                total = pools[pend[0].vertices] + pools[pend[1].vertices]
                led.c[comp.vertices] = Fraction(1)
                led.b[pend[0].vertices] = Fraction(1)
                led.b[pend[1].vertices] = total - 2
    bad = ledger_violations(gr, h, led)
    if bad:
        raise InvariantViolated(bad[0], violations=bad)
    return led


@dataclass(frozen=True)
class PseudoEar:
    block: frozenset
    component: frozenset
    edges: tuple
    components: tuple
    head: int
    witness: tuple
    bridge: int
    z: frozenset
    condition: str | None


def _bfs_path(adj_fn, start, goal_fn, blocked=frozenset()):
    prev = {start: None}
    q = deque([start])
    while q:
        x = q.popleft()
        if x != start and goal_fn(x):
            path = [x]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for y in adj_fn(x):
            if y not in prev and y not in blocked:
                prev[y] = x
                q.append(y)
    return None


def _h_adj(gr: Graph, edges: frozenset):
    adj = {v: [] for v in gr.vertices}
    for e in sorted(edges):
        u, v, _ = gr.edges[e]
        adj[u].append(v)
        adj[v].append(u)
    for v in adj:
        adj[v].sort()
    return adj


def _edge_between(gr: Graph, edges, a, b):
    for e in gr.adj[a]:
        if e in edges and gr.other(e, a) == b:
            return e
    return None


def _choose_z(gr: Graph, h: TwoEdgeCover, dec: Decomposition, block, r, u) -> tuple[frozenset, tuple]:
    """Exclusion set from the shortest path r, u1 = u, u2, ... to the next white vertex."""
    hadj = _h_adj(gr, h.edges)
    if dec.white(u):
        return frozenset(), (r, u)
    tail = _bfs_path(lambda x: hadj[x], u, lambda x: dec.white(x), blocked=block.vertices)
    if tail is None:
        return frozenset(), (r, u)
    path = [r] + tail
    k = len(path) - 1  # index of the white vertex u_k
    head = path[: min(k, 5) + 1]
    units = sum(gr.weight(_edge_between(gr, h.edges, a, b)) for a, b in zip(head, head[1:]))
    us = path[1:]
    if k == 2:
        return frozenset(us[:1]), tuple(path)
    if k == 3:
        if units == 3:
            return frozenset(us[:1]), tuple(path)
        return frozenset(us[:2]), tuple(path)
    if units <= 2:
        return frozenset(us[:3]), tuple(path)
    if units == 3:
        return frozenset(us[:2]), tuple(path)
    return frozenset(us[:1]), tuple(path)


def _ear_search(gr: Graph, h: TwoEdgeCover, dec: Decomposition, c0, block, z: frozenset):
    comp_index = {}
    for i, c in enumerate(dec.components):
        for v in c.vertices:
            comp_index[v] = i
    c0i = comp_index[min(c0.vertices)]
    targets = c0.vertices - block.vertices - z

    def node(x):
        return ("v", x) if comp_index[x] == c0i else ("c", comp_index[x])

    def members(nd):
        return [nd[1]] if nd[0] == "v" else sorted(dec.components[nd[1]].vertices)

    prev = {}
    q = deque()
    for x in sorted(block.vertices):
        nd = ("v", x)
        prev[nd] = None
        q.append(nd)
    while q:
        nd = q.popleft()
        for x in members(nd):
            for e in gr.adj[x]:
                if e in h.edges:
                    continue
                y = gr.other(e, x)
                if y in z:
                    continue
                ny = node(y)
                if ny == nd or ny in prev:
                    continue
                if ny[0] == "v" and y in block.vertices:
                    continue
                prev[ny] = (nd, e)
                if ny[0] == "v" and y in targets:
                    edges = []
                    comps = []
                    cur = ny
                    while prev[cur] is not None:
                        p, fe = prev[cur]
                        edges.append(fe)
                        if p[0] == "c":
                            comps.append(dec.components[p[1]].vertices)
                        cur = p
                    return tuple(reversed(edges)), tuple(reversed(comps)), y
                if ny[0] == "c":
                    q.append(ny)
    return None


def _witness(gr: Graph, h: TwoEdgeCover, c0, r, head) -> tuple:
    hadj = _h_adj(gr, h.edges)
    p = _bfs_path(lambda x: hadj[x], r, lambda x: x == head)
    return tuple(p) if p else (r,)


def witness_condition(gr: Graph, h: TwoEdgeCover, dec: Decomposition, path: tuple, bridge: int) -> str | None:
    r = path[0]
    whites = [x for x in path if dec.white(x)]
    pe = [_edge_between(gr, h.edges, a, b) for a, b in zip(path, path[1:])]
    units = sum(gr.weight(e) for e in pe)
    if any(x != r for x in whites):
        return "a"
    if units >= 3:
        return "b"
    if units == 2:
        head = path[-1]
        if any(e in h.edges and gr.weight(e) == 1 and e not in pe for e in gr.adj[head]):
            return "c"
        if gr.weight(bridge) == 0:
            return "d"
    return None


def find_pseudo_ear(g, h: TwoEdgeCover, c0, b, stats: RunStats | None = None) -> PseudoEar:
    gr = _graph(g)
    dec = h.decomposition
    (bridge,) = b.bridges
    x, y = gr.ends(bridge)
    r, u = (x, y) if x in b.vertices else (y, x)
    z, _ = _choose_z(gr, h, dec, b, r, u)
    found = _ear_search(gr, h, dec, c0, b, z)
    if found is None and z:
        exc = NoPseudoEar(f"no pseudo-ear from block {sorted(b.vertices)} avoiding {sorted(z)}",
                          block=sorted(b.vertices), z=sorted(z))
        if stats is None:
            raise exc
        stats.fail(exc)
        z = frozenset()
        found = _ear_search(gr, h, dec, c0, b, z)
    if found is None:
        raise NoPseudoEar(f"no pseudo-ear from block {sorted(b.vertices)}", block=sorted(b.vertices))
    edges, comps, head = found
    wit = _witness(gr, h, c0, r, head)
    cond = witness_condition(gr, h, dec, wit, bridge)
    return PseudoEar(b.vertices, c0.vertices, edges, comps, head, wit, bridge, z, cond)


def apply_pseudo_ear(g, h: TwoEdgeCover, ledger: CreditLedger, ear: PseudoEar,
                     stats: RunStats | None = None) -> tuple[TwoEdgeCover, CreditLedger]:
    """Add the ear and re-pool the credits of everything it merged."""
    gr = _graph(g)
    old = h.decomposition
    h2 = h.replace(add=ear.edges)
    new = h2.decomposition
    k = gr.weight_of(ear.edges)
    before = ledger.total()
    led = ledger.copy()
    cnew = new.component_of(ear.head)
    old_blocks = {b.vertices for c in old.components for b in c.blocks}
    new_blocks = {b.vertices for b in cnew.blocks}
    pool = -Fraction(k)
    for c in old.components:
        if not c.vertices <= cnew.vertices:
            continue
        pool += led.c.pop(c.vertices)
        for b in c.blocks:
            if b.vertices not in new_blocks:
                pool += led.b.pop(b.vertices)
        for v in c.black:
            if v not in cnew.black:
                pool += led.n.pop(v)
    for b in cnew.blocks:
        if b.vertices not in old_blocks:
            need = block_need(cnew, b)
            led.b[b.vertices] = need
            pool -= need
    led.c[cnew.vertices] = pool
    after = led.total()
    if after != before - k:
        raise InvariantViolated(f"credit not conserved: {before} - {k} != {after}")
    if pool < 1:
        exc = CreditDeficit(f"component {sorted(cnew.vertices)} left with c-credit {pool}",
                            component=sorted(cnew.vertices), condition=ear.condition)
        if stats is None:
            raise exc
        stats.fail(exc)
    return h2, led


def economical_bound(g, d2_weight: int, h: TwoEdgeCover) -> Fraction:
    dec = h.decomposition
    return (ALPHA * d2_weight - 2 * dec.count(LARGE) - Fraction(15, 8) * dec.count(MEDIUM)
            - Fraction(5, 4) * dec.count(SMALL))


@dataclass
class BridgeCoverResult:
    cover: TwoEdgeCover
    ledger: CreditLedger
    ears: list
    bound: Fraction


def cover_all_bridges(g, h: TwoEdgeCover, stats: RunStats | None = None,
                      ledger: CreditLedger | None = None) -> BridgeCoverResult:
    gr = _graph(g)
    d2w = h.weight
    if ledger is None:
        try:
            ledger = init_credits(gr, h)
        except InvariantViolated as exc:
            if stats is None:
                raise
            stats.fail(exc)
            ledger = _fallback_ledger(gr, h)
    small_before = {c.vertices for c in h.decomposition.components if c.size_class == SMALL and not c.complex}
    ears = []
    nb = sum(len(c.bridges) for c in h.decomposition.components)
    for _ in range(nb + 1):
        dec = h.decomposition
        complex_ = [c for c in dec.components if c.complex]
        if not complex_:
            break
        c0 = complex_[0]
        b = next(bl for bl in c0.blocks if bl.pendant)
        ear = find_pseudo_ear(gr, h, c0, b, stats)
        if stats is not None:
            stats.bump("pseudo_ears")
            stats.bump(f"pseudo_ear.condition.{ear.condition}")
        h, ledger = apply_pseudo_ear(gr, h, ledger, ear, stats)
        ears.append(ear)
    out = TwoEdgeCover(gr, h.edges, BRIDGELESS)
    bound = economical_bound(gr, d2w, out)
    small_after = {c.vertices for c in out.decomposition.components if c.size_class == SMALL}
    if stats is not None:
        stats.economical_checks.append((out.weight, bound))
        if out.weight > bound:
            stats.fail(CreditDeficit(f"economical inequality fails: {out.weight} > {bound}"))
        if not small_after <= small_before:
            stats.fail(InvariantViolated("a small component of the cover is not a small component of the D2"))
    return BridgeCoverResult(out, ledger, ears, bound)


def _fallback_ledger(gr: Graph, h: TwoEdgeCover) -> CreditLedger:
    """Vertex credits pooled per component, used only after a failed initialisation."""
    ud = _unit_deg(gr, h.edges)
    led = CreditLedger()
    for comp in h.decomposition.components:
        pool = sum((VERTEX_SHARE * ud[v] for v in comp.vertices), Fraction(0))
        for v in comp.black:
            led.n[v] = VERTEX_SHARE * ud[v]
            pool -= led.n[v]
        for b in comp.blocks:
            led.b[b.vertices] = Fraction(0)
        led.c[comp.vertices] = pool
    return led
