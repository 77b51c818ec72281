"""Exact Min-Sum-Radii solvers, hardness-reduction builders and checkers."""

from ._backend import BACKEND
from .graph import (
    MetricSpace,
    WeightedGraph,
    ball,
    build_graph,
    candidate_radii,
    is_bipartite,
    shortest_path_metric,
    subdivide_to_unit,
)
from .solvers import (
    Clustering,
    MsrInstance,
    SolveReport,
    Variant,
    Verdict,
    decide,
    solve,
    solve_branch_bound,
    solve_cover_dp,
    solve_enumerate,
    verify_clustering,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "MetricSpace",
    "WeightedGraph",
    "ball",
    "build_graph",
    "candidate_radii",
    "is_bipartite",
    "shortest_path_metric",
    "subdivide_to_unit",
    "Clustering",
    "MsrInstance",
    "SolveReport",
    "Variant",
    "Verdict",
    "decide",
    "solve",
    "solve_branch_bound",
    "solve_cover_dp",
    "solve_enumerate",
    "verify_clustering",
]

