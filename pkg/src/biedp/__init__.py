"""Edge-disjoint path provisioning in complete bipartite host graphs."""

from .core import (
    A,
    B,
    DemandGraph,
    EdgeLabel,
    LabeledMultigraph,
    Realization,
    Vertex,
    extract_paths,
    resolve,
    verify_realization,
)
from .coloring import (
    EdgeColoring,
    abb_coloring,
    greedy_color,
    make_equitable,
    shannon_color,
)
from .maxedp import MaxEdpResult, degree_bounded_subgraph, maxedp_approx, maxedp_exact
from .oracle import OracleResult, SearchBudget, edp_decide
from .realize_degree import DegreeConditions, realize_deg1, realize_deg2, regularize
from .realize_edge import pad_to_exact, realize_edge
from .report import SolveReport

__all__ = [
    "A",
    "B",
    "DemandGraph",
    "DegreeConditions",
    "EdgeColoring",
    "EdgeLabel",
    "LabeledMultigraph",
    "MaxEdpResult",
    "OracleResult",
    "Realization",
    "SearchBudget",
    "SolveReport",
    "Vertex",
    "abb_coloring",
    "degree_bounded_subgraph",
    "edp_decide",
    "extract_paths",
    "greedy_color",
    "make_equitable",
    "maxedp_approx",
    "maxedp_exact",
    "pad_to_exact",
    "realize_deg1",
    "realize_deg2",
    "realize_edge",
    "regularize",
    "resolve",
    "shannon_color",
    "verify_realization",
]
