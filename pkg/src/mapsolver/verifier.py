"""Independent feasibility check of a solution.

Only graph primitives are used here, never solver code, so a passing check
does not depend on the code that produced the solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph_core import EdgeSubgraph, Graph, MapInstance, adjacency, components_of, lowlink


@dataclass(frozen=True)
class VerifyReport:
    feasible: bool
    weight: int
    problems: tuple = field(default=())
    bridges: tuple = field(default=())  # (u, v) pairs, 0-indexed

    def describe(self, one_indexed: bool = True) -> str:
        if self.feasible:
            return f"feasible, weight {self.weight}"
        return "; ".join(self.problems)


def verify(inst, sol) -> VerifyReport:
    g: Graph = inst.graph if isinstance(inst, MapInstance) else inst
    ids = sol.edge_ids if isinstance(sol, EdgeSubgraph) else frozenset(sol)
    problems = []
    unknown = sorted(e for e in ids if e not in g.edges)
    if unknown:
        problems.append(f"unknown edge ids {unknown[:5]}")
    ids = [e for e in ids if e in g.edges]
    weight = sum(g.edges[e][2] for e in ids)
    adj = adjacency(g, ids)
    comps = components_of(adj)
    if len(comps) > 1:
        problems.append(f"solution is disconnected ({len(comps)} components)")
    bridges = lowlink(adj)[0]
    pairs = tuple(g.ends(e) for e in bridges)
    for u, v in pairs[:5]:
        problems.append(f"edge {u + 1}-{v + 1} is a bridge")
    return VerifyReport(not problems, weight, tuple(problems), pairs)
