"""The recursive solver: split off forbidden configurations, solve the parts,
stitch the part solutions together, and run the structured pipeline on graphs
that have none.

Parts keep the edge ids of the input, so a part solution maps back to the input
graph unchanged. Fictitious edges added to a part get fresh ids above the
input's id floor and are listed in the part's pseudo-edge registry; combine
removes or replaces every one of them before returning.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bridge_cover import cover_all_bridges
from .config import RunStats, SolverConfig
from .config_builder import build_special_config
from .errors import (
    BudgetExceeded,
    ExchangeNotFound,
    NotStructured,
    PatchEdgeNotFound,
    SizeNotDecreasing,
    VariantUndecidable,
)
from .exact_oracle import min_augmentation, opt_at_most, opt_exact
from .forbidden import (
    CONTRACTIBLE,
    CUT_VERTEX,
    PARALLEL,
    S0,
    S1,
    S2,
    S34,
    SK,
    SK_PRIME,
    Budget,
    ForbiddenConfig,
    detect_forbidden,
    opt_capped,
    side_graph,
    touch_sets,
)
from .glue import glue
from .graph_core import (
    SMALL,
    EdgeSubgraph,
    Graph,
    MapInstance,
    connected_components,
    contract,
    is_spanning_2ec,
    is_two_edge_connected,
    size_measure,
)
from .two_edge_cover import TwoEdgeCover, canonical_violations, compute_d2, canonicalize_d2


def _graph(g) -> Graph:
    return g.graph if isinstance(g, MapInstance) else g


@dataclass
class DivideResult:
    parts: tuple  # Graphs
    config: ForbiddenConfig
    pseudo: tuple  # per part: pseudo id -> (x, y) vertex pair in G
    meta: dict = field(default_factory=dict)


class _Run:
    """State shared by one top-level call."""

    def __init__(self, config: SolverConfig, stats: RunStats):
        self.config = config
        self.stats = stats
        self.budget = Budget(config.contractible_cap)


# divide --------------------------------------------------------------------------


def _with_pseudo(h: Graph, pairs) -> tuple[Graph, dict]:
    h2, ids = h.with_edges([(x, y, 1) for x, y in pairs])
    return h2, {e: (x, y) for e, (x, y) in zip(ids, pairs)}


def _attached(gr: Graph, h: Graph, k: int, vertices) -> EdgeSubgraph | None:
    """A weight-k solution of h whose edges touch each listed vertex of G."""
    return opt_at_most(h, k, must_hit=touch_sets(gr, h, vertices))


def divide(g, cfg: ForbiddenConfig, stats: RunStats | None = None) -> DivideResult:
    gr = _graph(g)
    kind = cfg.kind
    meta: dict = {}
    if kind == CUT_VERTEX:
        (v,) = cfg.vertices
        parts = tuple(gr.induced(side | {v}) for side in cfg.sides)
        pseudo = ({}, {})
    elif kind == PARALLEL:
        parts = (gr.without_edges(cfg.edges),)
        pseudo = ({},)
    elif kind == CONTRACTIBLE:
        g1, _ = contract(gr, [cfg.vertices])
        parts = (g1,)
        pseudo = ({},)
    elif kind == S0:
        core = cfg.vertices
        parts = tuple(side_graph(gr, side, core)[0] for side in cfg.sides)
        pseudo = ({}, {})
    elif kind == S1:
        parts, pseudo, meta = _divide_s1(gr, cfg)
    elif kind == S2:
        parts, pseudo, meta = _divide_s2(gr, cfg)
    elif kind == S34:
        parts, pseudo, meta = _divide_s34(gr, cfg)
    elif kind in (SK, SK_PRIME):
        core = cfg.vertices
        parts = tuple(side_graph(gr, side, core)[0] for side in cfg.sides if side)
        pseudo = tuple({} for _ in parts)
    else:
        raise VariantUndecidable(f"unknown configuration type {kind!r}")
    res = DivideResult(parts, cfg, pseudo, meta)
    before = size_measure(gr)
    after = sum(size_measure(p) for p in parts)
    if stats is not None:
        stats.divide_sizes.append((cfg.label(), after, before))
    if after >= before:
        if stats is not None:
            stats.size_violations += 1
        raise SizeNotDecreasing(f"{cfg.label()} parts have size {after} >= {before}", kind=kind)
    for i, p in enumerate(parts):
        if not is_two_edge_connected(p):
            raise VariantUndecidable(f"{cfg.label()} part {i} is not 2-edge-connected", part=i)
    return res


def _divide_s1(gr: Graph, cfg):
    u, v = cfg.vertices
    v1, v2 = cfg.sides
    h1, _ = side_graph(gr, v1, (u, v))
    h2c, _ = side_graph(gr, v2, (u, v))
    o1 = opt_capped(h1, 4)
    meta = {"opt_h1": o1}
    if o1 >= 4:
        meta["variant"] = "H2'"
        return (h1, h2c), ({}, {}), meta
    wit = _attached(gr, h1, o1, (u, v))
    if wit is not None:
        meta.update(variant="H2'", attached=wit.edge_ids)
        return (h1, h2c), ({}, {}), meta
    h2u, _ = side_graph(gr, v2, (u, v), shrink=False)
    h2, reg = _with_pseudo(h2u, [(u, v)])
    meta["variant"] = "H2''"
    return (h1, h2), ({}, reg), meta


def _divide_s2(gr: Graph, cfg):
    u, v, w = cfg.vertices
    uv, vw, g = cfg.edges
    v1, v2 = cfg.sides
    core = (u, v, w)
    h1, _ = side_graph(gr, v1, core)
    h2c, _ = side_graph(gr, v2, core)
    o1 = opt_capped(h1, 4)
    meta = {"opt_h1": o1}
    if o1 >= 4:
        meta["variant"] = "H2'"
        return (h1, h2c), ({}, {}), meta
    for pair, variant in (((u, w), "H2'/uw"), ((u, v), "H2'/uv")):
        wit = _attached(gr, h1, o1, pair)
        if wit is not None:
            meta.update(variant=variant, attached=wit.edge_ids)
            return (h1, h2c), ({}, {}), meta
    wit = _attached(gr, h1, o1, (v, w))
    if wit is not None:
        base = gr.induced(set(v2) | set(core))
        h2b, _ = contract(base, [(v, w)])
        h2, reg = _with_pseudo(h2b, [(u, min(v, w))])
        meta.update(variant="H2''", attached=wit.edge_ids)
        return (h1, h2), ({}, reg), meta
    # pairs of the path joined through side 1 avoiding the triangle edges
    side1 = gr.induced(set(v1) | set(core))
    tri = {e for e in side1.edges if gr.ends(e)[0] in core and gr.ends(e)[1] in core}
    rest = side1.without_edges(tri)
    comp_of = {}
    for c in connected_components(rest):
        for x in c:
            comp_of[x] = c
    pairs = [(a, b) for a, b in ((u, v), (u, w), (v, w)) if comp_of[a] is comp_of[b]]
    h2u, _ = side_graph(gr, v2, core, shrink=False)
    h2, reg = _with_pseudo(h2u, pairs)
    meta.update(variant="H2'''", pairs=pairs)
    return (h1, h2), ({}, reg), meta


def _divide_s34(gr: Graph, cfg):
    core = cfg.vertices
    v1, v2 = cfg.sides
    h2, _ = side_graph(gr, v2, core)
    if cfg.meta.get("case", 1) == 1:
        h1, _ = side_graph(gr, v1, core)
        return (h1, h2), ({}, {}), {"variant": "both contracted"}
    h1u, _ = side_graph(gr, v1, core, shrink=False)
    if len(core) == 3:
        return (h1u, h2), ({}, {}), {"variant": "triangle"}
    u1, u2, u3, u4 = core
    realize = {}
    pairs = []
    for a, b in ((u1, u3), (u2, u4)):
        if h1u.edges_between(a, b):
            continue
        wit = _attached(gr, h2, 3, (a, b))
        if wit is not None:
            pairs.append((a, b))
            realize[(a, b)] = wit.edge_ids
    h1, reg = _with_pseudo(h1u, pairs)
    return (h1, h2), (reg, {}), {"variant": "diagonals", "realize": realize}


# combine -------------------------------------------------------------------------


def _patch(gr: Graph, ids, bound: int, stats: RunStats | None, label: str) -> frozenset:
    """Add at most ``bound`` edges of G to make ``ids`` spanning 2-edge-connected."""
    ids = frozenset(ids)
    if is_spanning_2ec(gr, EdgeSubgraph(gr, ids)):
        return ids
    cands = [e for e in gr.edges if e not in ids]
    best, _, _ = min_augmentation(gr, ids, cands, upper=bound + 1, budget=200000)
    if best is not None:
        if stats is not None:
            stats.bump(f"combine.{label}.patch{len(best)}")
        return ids | best
    exc = PatchEdgeNotFound(f"{label}: no patch of at most {bound} edges", kind=label)
    if stats is None:
        raise exc
    stats.fail(exc)
    best, _, _ = min_augmentation(gr, ids, cands, budget=200000)
    return ids | best


def _strip(sol, reg: dict) -> tuple[frozenset, list]:
    used = [e for e in sol if e in reg]
    return frozenset(e for e in sol if e not in reg), used


def combine(g, div: DivideResult, sols, stats: RunStats | None = None) -> EdgeSubgraph:
    gr = _graph(g)
    cfg = div.config
    kind = cfg.kind
    sols = [frozenset(s.edge_ids if isinstance(s, EdgeSubgraph) else s) for s in sols]
    label = cfg.label()
    if kind in (CUT_VERTEX, PARALLEL):
        out = _patch(gr, frozenset().union(*sols), 0, stats, label)
    elif kind == CONTRACTIBLE:
        out = _patch(gr, sols[0] | frozenset(cfg.edges), 0, stats, label)
    elif kind == S0:
        out = _patch(gr, sols[0] | sols[1] | set(cfg.edges), 1, stats, label)
    elif kind == S1:
        out = _combine_s1(gr, div, sols, stats)
    elif kind == S2:
        out = _combine_s2(gr, div, sols, stats)
    elif kind == S34:
        out = _combine_s34(gr, div, sols, stats)
    else:
        out = _patch(gr, frozenset().union(*sols) | set(cfg.edges), 0, stats, label)
    leak = [e for e in out if e not in gr.edges]
    assert not leak, f"pseudo edges {leak} leaked out of {label}"
    return EdgeSubgraph(gr, out)


def _attached_sol(sol, meta, gr, h1, vertices):
    """The part solution if it touches the listed vertices, else the stored optimum."""
    if "attached" not in meta:
        return sol
    if all(s & sol for s in touch_sets(gr, h1, vertices)) and gr.weight_of(sol) <= gr.weight_of(meta["attached"]):
        return sol
    return meta["attached"]


def _combine_s1(gr, div, sols, stats):
    u, v = div.config.vertices
    uv = div.config.edges[0]
    meta = div.meta
    h1 = div.parts[0]
    s1 = _attached_sol(sols[0], meta, gr, h1, (u, v))
    if meta["variant"] == "H2'":
        bound = 1 if meta["opt_h1"] >= 4 else 0
        return _patch(gr, s1 | sols[1] | {uv}, bound, stats, "S1")
    s2, used = _strip(sols[1], div.pseudo[1])
    return _patch(gr, s1 | s2, len(used), stats, "S1")


def _combine_s2(gr, div, sols, stats):
    u, v, w = div.config.vertices
    uv, vw, g = div.config.edges
    meta = div.meta
    h1 = div.parts[0]
    var = meta["variant"]
    if var == "H2'":
        return _patch(gr, sols[0] | sols[1] | {uv, vw, g}, 1, stats, "S2")
    if var == "H2'/uw":
        s1 = _attached_sol(sols[0], meta, gr, h1, (u, w))
        return _patch(gr, s1 | sols[1] | {uv, vw}, 0, stats, "S2")
    if var == "H2'/uv":
        s1 = _attached_sol(sols[0], meta, gr, h1, (u, v))
        return _patch(gr, s1 | sols[1] | {vw}, 1, stats, "S2")
    if var == "H2''":
        s1 = _attached_sol(sols[0], meta, gr, h1, (v, w))
    else:
        s1 = sols[0]
    s2, used = _strip(sols[1], div.pseudo[1])
    return _patch(gr, s1 | s2 | {vw}, len(used), stats, "S2")


def _combine_s34(gr, div, sols, stats):
    cyc = frozenset(div.config.edges)
    var = div.meta["variant"]
    if var == "both contracted":
        return _patch(gr, sols[0] | sols[1] | cyc, 0, stats, "S34")
    if var == "triangle":
        return _patch(gr, sols[0] | sols[1], 0, stats, "S34")
    s1, used = _strip(sols[0], div.pseudo[0])
    f = sols[1]
    if len(used) == 1:
        pair = div.pseudo[0][used[0]]
        f = div.meta["realize"][pair]
    elif len(used) == 2:
        s1 = s1 | cyc
    return _patch(gr, s1 | f, 0, stats, "S34")


# recursion -----------------------------------------------------------------------


def _exact(gr: Graph, run: _Run) -> EdgeSubgraph:
    try:
        return opt_exact(gr, budget=run.config.exact_budget, max_vertices=None).witness
    except BudgetExceeded as exc:
        run.stats.bump("exact.budget_exceeded")
        return exc.best.witness


def _reduce(gr: Graph, run: _Run, depth: int) -> EdgeSubgraph:
    stats = run.stats
    stats.max_depth = max(stats.max_depth, depth)
    stats.bump("reduce.calls")
    if gr.n <= 2 or (gr.n <= run.config.exact_threshold and gr.is_simple()):
        stats.bump("reduce.exact")
        return _exact(gr, run)
    cfg = detect_forbidden(gr, run.config, stats, run.budget)
    if cfg is None:
        return _alg_structured(gr, run, depth)
    try:
        div = divide(gr, cfg, stats)
    except (SizeNotDecreasing, VariantUndecidable) as exc:
        stats.fail(exc)
        return _alg_structured(gr, run, depth)
    sols = [_reduce(p, run, depth + 1) for p in div.parts]
    out = combine(gr, div, sols, stats)
    assert is_spanning_2ec(gr, out), f"combine after {cfg.label()} is not 2-edge-connected"
    return out


def reduce(g, config: SolverConfig | None = None, stats: RunStats | None = None) -> EdgeSubgraph:
    """A 2-ECSS of g; exact on small simple graphs, recursive otherwise."""
    config = config or SolverConfig()
    stats = stats if stats is not None else RunStats(strict=config.strict)
    gr = _graph(g)
    return _reduce(gr, _Run(config, stats), 0)


def _alg_structured(gr: Graph, run: _Run, depth: int) -> EdgeSubgraph:
    stats = run.stats
    stats.bump("structured.calls")
    d2 = compute_d2(gr)
    trace: list = []
    try:
        h = canonicalize_d2(gr, d2, trace)
        stats.canonical_checks.append(len(canonical_violations(gr, h)))
    except ExchangeNotFound as exc:
        stats.fail(exc)
        h = d2
    stats.rho_traces.append([(a, b) for a, b, *_ in trace])
    bc = cover_all_bridges(gr, h, stats)
    s = build_special_config(gr, bc.cover, stats, bc.ledger, d2.weight)
    return _contract_vs_glue(gr, s, run, depth)


def alg_structured(g, config: SolverConfig | None = None, stats: RunStats | None = None) -> EdgeSubgraph:
    """The structured pipeline on a graph with no forbidden configuration."""
    config = config or SolverConfig()
    stats = stats if stats is not None else RunStats(strict=config.strict)
    gr = _graph(g)
    run = _Run(config, stats)
    cfg = detect_forbidden(gr, config, stats, run.budget)
    if cfg is not None:
        raise NotStructured(f"graph contains a {cfg.label()}", kind=cfg.kind)
    return _alg_structured(gr, run, 0)


def _contract_vs_glue(gr: Graph, s: TwoEdgeCover, run: _Run, depth: int) -> EdgeSubgraph:
    stats = run.stats
    comps = s.decomposition.components
    if len(comps) == 1:
        stats.bump("cvg.connected")
        return EdgeSubgraph(gr, s.edges)
    small = [c for c in comps if c.size_class == SMALL]
    s2 = glue(gr, s, stats)
    if not small:
        stats.bump("cvg.glue_only")
        return s2
    g1, _ = contract(gr, [c.vertices for c in small])
    sol = _reduce(g1, run, depth + 1)
    s1 = EdgeSubgraph(gr, frozenset(sol.edge_ids).union(*(c.edges for c in small)))
    assert is_spanning_2ec(gr, s1), "contraction branch is not 2-edge-connected"
    if s1.weight <= s2.weight:
        stats.bump("cvg.contract")
        return s1
    stats.bump("cvg.glue")
    return s2


def contract_vs_glue(g, s: TwoEdgeCover, config: SolverConfig | None = None,
                     stats: RunStats | None = None) -> EdgeSubgraph:
    config = config or SolverConfig()
    stats = stats if stats is not None else RunStats(strict=config.strict)
    return _contract_vs_glue(_graph(g), s, _Run(config, stats), 0)
