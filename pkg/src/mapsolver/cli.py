"""Command line tool: solve, d2, verify, gen, bench.

Exit codes: 0 ok, 2 unreadable input, 3 invalid instance or infeasible
solution, 4 internal failure.
"""

from __future__ import annotations

import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import click

from .config import RunStats, SolverConfig
from .errors import InvalidInstance, MapError
from .exact_oracle import f_value, opt_exact
from .generator import MODELS, generate
from .graph_core import is_spanning_2ec
from .instance_io import parse_instance, parse_solution, read_instance, serialize_instance, serialize_solution
from .reduce_solver import reduce
from .two_edge_cover import compute_d2
from .verifier import verify

SCHEMA_VERSION = 1


def _num(x):
    if isinstance(x, Fraction):
        return float(x) if x.denominator != 1 else int(x)
    return x


@dataclass
class RunReport:
    instance: str
    n: int
    m: int
    d2_weight: int
    weight: int
    ratio_to_d2: float | None
    feasible: bool
    wall_time: float
    recursion_depth: int
    counters: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    opt: int | None = None
    bound: str | None = None
    bound_satisfied: bool | None = None
    edges: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION, **asdict(self)}
        if self.opt is None:
            # no exact optimum, so no bound verdict either
            for k in ("opt", "bound", "bound_satisfied"):
                out.pop(k)
        return out

    def lines(self) -> list[str]:
        out = [
            f"instance      {self.instance}",
            f"n, m          {self.n}, {self.m}",
            f"d2 weight     {self.d2_weight}",
            f"output weight {self.weight}",
            f"ratio to d2   {self.ratio_to_d2:.4f}" if self.ratio_to_d2 is not None else "ratio to d2   n/a",
        ]
        if self.opt is not None:
            out.append(f"opt           {self.opt}  (bound {self.bound}, {'ok' if self.bound_satisfied else 'VIOLATED'})")
        out.append(f"depth         {self.recursion_depth}")
        out.append(f"wall time     {self.wall_time:.3f}s")
        for k, v in self.counters.items():
            out.append(f"  {k} = {v}")
        for name, msg in self.failures:
            out.append(f"  fallback {name}: {msg}")
        return out


def solve_instance(inst, name: str, config: SolverConfig, oracle: bool = False,
                   exact_budget: int | None = None):
    """Run the solver on one instance and build its report."""
    stats = RunStats(strict=config.strict)
    t0 = time.perf_counter()
    d2 = compute_d2(inst)
    sol = reduce(inst, config, stats)
    wall = time.perf_counter() - t0
    g = inst.graph
    rep = RunReport(
        instance=name,
        n=g.n,
        m=g.m,
        d2_weight=d2.weight,
        weight=sol.weight,
        ratio_to_d2=(sol.weight / d2.weight) if d2.weight else None,
        feasible=is_spanning_2ec(g, sol),
        wall_time=round(wall, 6),
        recursion_depth=stats.max_depth,
        counters=dict(sorted(stats.counters.items())),
        failures=[list(f) for f in stats.failures[:20]],
        warnings=[list(w) for w in stats.warnings[:20]],
        edges=sorted(sol.edge_ids),
    )
    if oracle:
        ex = opt_exact(inst, budget=exact_budget, max_vertices=None)
        if ex.complete:
            bound = f_value(ex.weight)
            rep.opt = ex.weight
            rep.bound = str(bound)
            rep.bound_satisfied = Fraction(sol.weight) <= bound
    return rep, sol


def _load(path: str):
    return read_instance(path) if path != "-" else parse_instance(sys.stdin.read())


def _config(exact_threshold, contractible_t, strict=False):
    return SolverConfig(exact_threshold=exact_threshold, contractible_t=contractible_t, strict=strict)


def _fail(exc: MapError):
    click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
    sys.exit(exc.exit_code)


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except MapError as exc:
            _fail(exc)
        except AssertionError as exc:
            click.echo(f"error: internal assertion: {exc}", err=True)
            sys.exit(4)


def _solver_options(f):
    f = click.option("--contractible-t", default=12, show_default=True, type=int,
                     help="Largest vertex set scanned for contractible subgraphs.")(f)
    f = click.option("--exact-threshold", default=20, show_default=True, type=int,
                     help="Graphs up to this size are solved exactly.")(f)
    return f


@click.group(cls=_Group)
def main():
    """Matching augmentation solver."""


@main.command()
@click.option("--input", "-i", "input_", required=True, help="Instance file, or - for stdin.")
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON.")
@click.option("--oracle", is_flag=True, help="Also compute the exact optimum and check the bound.")
@click.option("--strict", is_flag=True, help="Abort on the first failed pipeline step.")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write the solution here.")
@_solver_options
def solve(input_, as_json, oracle, strict, output, exact_threshold, contractible_t):
    """Solve an instance and print a run report."""
    inst = _load(input_)
    rep, sol = solve_instance(inst, input_, _config(exact_threshold, contractible_t, strict), oracle)
    if output:
        Path(output).write_text(serialize_solution(sol, comments=[f"weight {sol.weight}"]))
    if as_json:
        click.echo(json.dumps(rep.to_json(), indent=2))
    else:
        click.echo("\n".join(rep.lines()))
    if not rep.feasible:
        sys.exit(4)


@main.command()
@click.option("--input", "-i", "input_", required=True)
@click.option("--json", "as_json", is_flag=True)
def d2(input_, as_json):
    """Minimum-weight 2-edge-cover of an instance."""
    inst = _load(input_)
    h = compute_d2(inst)
    comps = h.decomposition.components
    sizes = {"small": 0, "medium": 0, "large": 0}
    for c in comps:
        sizes[c.size_class] += 1
    if as_json:
        click.echo(json.dumps({"schema_version": SCHEMA_VERSION, "weight": h.weight,
                               "components": len(comps), "size_classes": sizes,
                               "edges": sorted(h.edges)}, indent=2))
    else:
        click.echo(f"d2 weight {h.weight}, {len(comps)} components "
                   f"({sizes['large']} large, {sizes['medium']} medium, {sizes['small']} small)")


@main.command("verify")
@click.option("--input", "-i", "input_", required=True, help="Instance file.")
@click.option("--solution", "-s", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--exact", is_flag=True, help="Report the gap to the optimum (small instances only).")
@click.option("--exact-threshold", default=20, show_default=True, type=int)
@click.option("--json", "as_json", is_flag=True)
def verify_cmd(input_, solution, exact, exact_threshold, as_json):
    """Check a solution file against an instance without using the solver."""
    inst = _load(input_)
    sol = parse_solution(Path(solution).read_text(), inst)
    rep = verify(inst, sol)
    out = {"schema_version": SCHEMA_VERSION, "feasible": rep.feasible, "weight": rep.weight,
           "problems": list(rep.problems)}
    if exact and inst.n <= exact_threshold:
        opt = opt_exact(inst, max_vertices=None).weight
        out["opt"] = opt
        out["gap"] = rep.weight - opt
    if as_json:
        click.echo(json.dumps(out, indent=2))
    else:
        click.echo(rep.describe())
        if "opt" in out:
            click.echo(f"opt {out['opt']}, gap {out['gap']}")
    if not rep.feasible:
        sys.exit(InvalidInstance.exit_code)


@main.command()
@click.option("--model", type=click.Choice(MODELS), default="random", show_default=True)
@click.option("-n", "n", type=int, required=True)
@click.option("--density", type=float, default=0.5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False))
def gen(model, n, density, seed, output):
    """Generate a seeded instance."""
    inst = generate(model, n, density, seed)
    text = serialize_instance(inst, comments=[f"{model} n={n} density={density} seed={seed}"])
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


def _bench_one(job):
    name, text, cfg, oracle = job
    inst = parse_instance(text)
    rep, _ = solve_instance(inst, name, cfg, oracle)
    return rep


def corpus(model: str, count: int, n_min: int, n_max: int, densities, seed: int):
    """Deterministic list of (name, instance) pairs."""
    out = []
    for i in range(count):
        n = n_min + i % (n_max - n_min + 1)
        d = densities[i % len(densities)]
        s = seed + i
        out.append((f"{model}-n{n}-d{d}-s{s}", generate(model, n, d, s)))
    return out


@main.command()
@click.option("--model", type=click.Choice(MODELS), default="random", show_default=True)
@click.option("--count", type=int, default=50, show_default=True)
@click.option("--n-min", type=int, default=4, show_default=True)
@click.option("--n-max", type=int, default=12, show_default=True)
@click.option("--density", "densities", type=float, multiple=True, default=(0.3, 0.5, 0.8), show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--input", "-i", "inputs", multiple=True, type=click.Path(exists=True),
              help="Instance files or directories; replaces the generated corpus.")
@click.option("--oracle", is_flag=True, help="Compare every output with the exact optimum.")
@click.option("--jobs", "-j", type=int, default=1, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@_solver_options
def bench(model, count, n_min, n_max, densities, seed, inputs, oracle, jobs, as_json,
          exact_threshold, contractible_t):
    """Run a corpus and print a table with summary statistics."""
    cfg = _config(exact_threshold, contractible_t)
    if inputs:
        files = []
        for p in map(Path, inputs):
            files.extend(sorted(p.glob("*.map")) if p.is_dir() else [p])
        jobs_in = [(str(f), f.read_text(), cfg, oracle) for f in files]
    else:
        jobs_in = [(name, serialize_instance(inst), cfg, oracle)
                   for name, inst in corpus(model, count, n_min, n_max, densities, seed)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            reports = list(ex.map(_bench_one, jobs_in))
    else:
        reports = [_bench_one(j) for j in jobs_in]
    reports.sort(key=lambda r: r.instance)
    checked = [r for r in reports if r.bound_satisfied is not None]
    ratios = [r.ratio_to_d2 for r in reports if r.ratio_to_d2 is not None]
    summary = {
        "instances": len(reports),
        "feasible": sum(r.feasible for r in reports),
        "bound_checked": len(checked),
        "bound_satisfied": sum(r.bound_satisfied for r in checked),
        "max_ratio_to_d2": max(ratios, default=None),
        "mean_ratio_to_d2": sum(ratios) / len(ratios) if ratios else None,
        "total_time": round(sum(r.wall_time for r in reports), 3),
        "fallbacks": sum(len(r.failures) for r in reports),
    }
    if as_json:
        click.echo(json.dumps({"schema_version": SCHEMA_VERSION, "summary": summary,
                               "reports": [r.to_json() for r in reports]}, indent=2))
    else:
        click.echo(f"{'instance':<34} {'n':>4} {'m':>5} {'d2':>4} {'alg':>4} {'opt':>4} {'ok':>3} {'time':>8}")
        for r in reports:
            opt = "-" if r.opt is None else r.opt
            ok = "-" if r.bound_satisfied is None else ("y" if r.bound_satisfied else "N")
            click.echo(f"{r.instance:<34} {r.n:>4} {r.m:>5} {r.d2_weight:>4} {r.weight:>4} {opt:>4} {ok:>3} {r.wall_time:>8.3f}")
        click.echo("")
        for k, v in summary.items():
            click.echo(f"{k:<18} {_num(v) if not isinstance(v, float) else round(v, 4)}")
    if summary["feasible"] != len(reports):
        sys.exit(4)


if __name__ == "__main__":
    main()
