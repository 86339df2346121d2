"""Solver configuration and run statistics."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PipelineError


@dataclass(frozen=True)
class SolverConfig:
    exact_threshold: int = 20
    contractible_t: int = 12
    contractible_cap: int = 10**6
    # strict: a failed lemma step raises; otherwise a generic repair is used
    # and the failure is counted in RunStats
    strict: bool = False
    exact_budget: int | None = None


@dataclass
class RunStats:
    strict: bool = False
    counters: Counter = field(default_factory=Counter)
    failures: list = field(default_factory=list)
    size_violations: int = 0
    max_depth: int = 0
    # (weight, bound) pairs of every glue call and every bridge cover run
    glue_checks: list = field(default_factory=list)
    economical_checks: list = field(default_factory=list)
    special_checks: list = field(default_factory=list)
    canonical_checks: list = field(default_factory=list)
    rho_traces: list = field(default_factory=list)
    divide_sizes: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def bump(self, key: str, by: int = 1):
        self.counters[key] += by

    def fail(self, exc: PipelineError):
        """Raise in strict mode, otherwise record the failure and continue."""
        if self.strict:
            raise exc
        name = type(exc).__name__
        self.counters[f"fallback.{name}"] += 1
        self.failures.append((name, str(exc)))

    def warn(self, w: Warning):
        self.counters[f"warning.{type(w).__name__}"] += 1
        self.warnings.append((type(w).__name__, str(w)))

    def as_dict(self) -> dict:
        def conv(x):
            if isinstance(x, Fraction):
                return str(x)
            return x

        return {
            "counters": dict(sorted(self.counters.items())),
            "max_depth": self.max_depth,
            "size_violations": self.size_violations,
            "glue_bound_checks": [[conv(a), conv(b)] for a, b in self.glue_checks],
            "economical_checks": [[conv(a), conv(b)] for a, b in self.economical_checks],
            "failures": [list(f) for f in self.failures[:20]],
            "warnings": [list(w) for w in self.warnings[:20]],
        }
