"""Matching augmentation: a 13/8-approximation solver with exact oracles."""

from .config import RunStats, SolverConfig
from .errors import MapError
from .exact_oracle import f_value, min_2edge_cover_bruteforce, opt_exact
from .generator import generate
from .graph_core import EdgeSubgraph, Graph, MapInstance, is_spanning_2ec, validate_map_instance
from .instance_io import parse_instance, read_instance, serialize_instance, write_instance
from .matching import max_matching
from .reduce_solver import alg_structured, reduce
from .two_edge_cover import canonicalize_d2, compute_d2
from .verifier import verify

__all__ = [
    "EdgeSubgraph", "Graph", "MapError", "MapInstance", "RunStats", "SolverConfig",
    "alg_structured", "canonicalize_d2", "compute_d2", "f_value", "generate",
    "is_spanning_2ec", "max_matching", "min_2edge_cover_bruteforce", "opt_exact",
    "parse_instance", "read_instance", "reduce", "serialize_instance", "validate_map_instance",
    "verify", "write_instance",
]
