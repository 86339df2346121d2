"""Minimum 2-edge-covers (D2) and their canonical form."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ExchangeNotFound, InfeasibleDemand
from .graph_core import (
    MEDIUM,
    SMALL,
    Decomposition,
    EdgeSubgraph,
    Graph,
    MapInstance,
    decompose,
)
from .matching import max_degree_constrained_subgraph

RAW, CANONICAL, BRIDGELESS, SPECIAL = "raw", "canonical", "bridgeless", "special"


def _graph(g) -> Graph:
    return g.graph if isinstance(g, MapInstance) else g


@dataclass(frozen=True)
class TwoEdgeCover:
    graph: Graph
    edges: frozenset
    provenance: str = RAW
    _dec: list = field(default_factory=list, repr=False, compare=False)

    @property
    def weight(self) -> int:
        return self.graph.weight_of(self.edges)

    @property
    def decomposition(self) -> Decomposition:
        if not self._dec:
            self._dec.append(decompose(self.graph, self.edges))
        return self._dec[0]

    def subgraph(self) -> EdgeSubgraph:
        return EdgeSubgraph(self.graph, self.edges)

    def replace(self, remove=(), add=(), provenance=None) -> "TwoEdgeCover":
        edges = (self.edges - frozenset(remove)) | frozenset(add)
        return TwoEdgeCover(self.graph, edges, provenance or self.provenance)


def compute_d2(g) -> TwoEdgeCover:
    """All zero edges plus a minimum set of unit edges covering the residual demand.

    The unit edges left out form a largest subgraph with degree at most
    unit_deg(v) - demand(v), found by the matching gadget.
    """
    gr = _graph(g)
    zero = gr.zero_edges()
    zdeg = {v: 0 for v in gr.vertices}
    for e in zero:
        for x in gr.ends(e):
            zdeg[x] += 1
    units = gr.unit_edges()
    ug = gr.edge_subgraph(units)
    cap = {}
    for v in gr.vertices:
        need = max(0, 2 - zdeg[v])
        cap[v] = ug.degree(v) - need
        if cap[v] < 0:
            raise InfeasibleDemand(f"vertex {v} has unit degree {ug.degree(v)} but needs {need}", vertex=v)
    spare = max_degree_constrained_subgraph(ug, cap).edge_ids
    chosen = frozenset(zero) | frozenset(e for e in units if e not in spare)
    return TwoEdgeCover(gr, chosen, RAW)


def rho(g, h: TwoEdgeCover) -> int:
    gr = _graph(g)
    n = gr.n
    dec = h.decomposition
    n_c = len(dec.components)
    n_s = n_m = 0
    for c in dec.components:
        for b in c.blocks:
            if b.size_class == SMALL:
                n_s += 1
            elif b.size_class == MEDIUM and not any(gr.weight(e) == 1 for e in b.bridges):
                n_m += 1
    return n * n * n_c + n * n_s + n_m


def canonical_violations(g, h: TwoEdgeCover) -> list[tuple[str, object]]:
    """Structural check of the canonical D2 conditions."""
    gr = _graph(g)
    out = []
    missing = [e for e in gr.zero_edges() if e not in h.edges]
    if missing:
        out.append(("missing-zero-edge", missing[0]))
    for c in h.decomposition.components:
        for b in c.blocks:
            if not b.pendant:
                continue
            if b.size_class == SMALL and len(b.vertices) != 4:
                out.append(("small-pendant-block", b))
            if b.size_class == MEDIUM and not any(gr.weight(e) == 1 for e in b.bridges):
                out.append(("medium-pendant-block", b))
    return out


def _is_cover(gr: Graph, edges: frozenset) -> bool:
    deg = {v: 0 for v in gr.vertices}
    for e in edges:
        u, v, _ = gr.edges[e]
        deg[u] += 1
        deg[v] += 1
    return all(d >= 2 for d in deg.values())


def _block_edge(gr: Graph, b, x, y):
    for e in sorted(b.edges):
        if set(gr.ends(e)) == {x, y}:
            return e
    return None


def _small_block_swaps(gr: Graph, h: TwoEdgeCover, b):
    """Exchanges for a pendant small block with fewer than four vertices."""
    (bridge,) = b.bridges
    u = next(x for x in gr.ends(bridge) if x in b.vertices)
    others = sorted(b.vertices - {u})
    for x in others:
        ux = _block_edge(gr, b, u, x)
        if ux is None:
            continue
        if gr.weight(ux) == 1:
            for e in gr.adj[x]:
                if e not in h.edges:
                    yield ux, e
        else:
            for y in others:
                if y == x:
                    continue
                uy = _block_edge(gr, b, u, y)
                if uy is None or gr.weight(uy) != 1:
                    continue
                for e in gr.adj[y]:
                    if e not in h.edges:
                        yield uy, e


def _medium_block_swaps(gr: Graph, h: TwoEdgeCover, b):
    """Exchanges for a pendant medium block whose bridge is a zero edge."""
    (bridge,) = b.bridges
    u = next(x for x in gr.ends(bridge) if x in b.vertices)
    nbrs = sorted({gr.other(e, u) for e in b.edges if u in gr.ends(e)})
    for v in nbrs:
        for w in nbrs:
            if w == v:
                continue
            uv = _block_edge(gr, b, u, v)
            for e in gr.edges_between(v, w):
                if e not in h.edges and gr.weight(uv) == 1:
                    yield uv, e
    for v in nbrs:
        uv = _block_edge(gr, b, u, v)
        if gr.weight(uv) != 1:
            continue
        for e in gr.adj[v]:
            if e not in h.edges and gr.other(e, v) not in b.vertices:
                yield uv, e


def canonicalize_d2(g, h: TwoEdgeCover, trace: list | None = None) -> TwoEdgeCover:
    """Apply weight-preserving exchanges until the cover is canonical.

    An exchange is only taken when it strictly lowers rho; ``trace`` receives
    (rho_before, rho_after, removed, added) per exchange.
    """
    gr = _graph(g)
    missing = [e for e in gr.zero_edges() if e not in h.edges]
    if missing:
        h = h.replace(add=missing)
    r = rho(gr, h)
    limit = r
    for _ in range(limit + 1):
        bad = [(k, b) for k, b in canonical_violations(gr, h) if k != "missing-zero-edge"]
        if not bad:
            return TwoEdgeCover(gr, h.edges, CANONICAL)
        bad.sort(key=lambda kb: (kb[0] != "small-pendant-block", min(kb[1].vertices)))
        kind, block = bad[0]
        swaps = _small_block_swaps(gr, h, block) if kind == "small-pendant-block" else _medium_block_swaps(gr, h, block)
        done = False
        for out_e, in_e in swaps:
            cand = h.replace(remove=[out_e], add=[in_e])
            if gr.weight(out_e) != gr.weight(in_e) or not _is_cover(gr, cand.edges):
                continue
            r2 = rho(gr, cand)
            if r2 < r:
                if trace is not None:
                    trace.append((r, r2, out_e, in_e))
                h, r, done = cand, r2, True
                break
        if not done:
            raise ExchangeNotFound(
                f"no rho-decreasing exchange for {kind} on vertices {sorted(block.vertices)}",
                kind=kind, block=sorted(block.vertices), cover=h)
    raise ExchangeNotFound("exchange loop did not terminate within rho steps")
