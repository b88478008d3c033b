"""Exact fixed-parameter edge bipartization via terminal separation."""

from .multigraph import Edge, GraphError, MultiGraph, parse_graph, render_graph
from .relaxation import (InstanceError, ProbeReport, TermSepInstance,
                         TerminalSeparation, min_cost_extension, normalize,
                         probe_branch)
from .pipeline import (Solution, SolveStats, baseline_guo, compress,
                       oracle_min_bipartization, oracle_termsep,
                       solve_edge_bipartization)
from .branching import SearchStats, is_good_vector, potential, solve_termsep

__all__ = [
    "Edge", "GraphError", "MultiGraph", "parse_graph", "render_graph",
    "InstanceError", "ProbeReport", "TermSepInstance", "TerminalSeparation",
    "min_cost_extension", "normalize", "probe_branch",
    "Solution", "SolveStats", "baseline_guo", "compress",
    "oracle_min_bipartization", "oracle_termsep", "solve_edge_bipartization",
    "SearchStats", "is_good_vector", "potential", "solve_termsep",
]
