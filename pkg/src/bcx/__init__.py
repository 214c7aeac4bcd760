"""Exact betweenness centrality for unweighted undirected graphs.

Brandes rounds with active-edge work mapping, 1-degree reduction, the
2-degree DMF heuristic, and a simulated 2-D partitioned multi-worker runtime.
"""
from .degree1 import bc_with_1degree, endpoint_contribution, preprocess_1degree
from .degree2 import Mode, bc_with_heuristics, dmf_accumulate, schedule_2degree
from .graph import (
    EdgeList,
    Graph,
    RmatParams,
    build_undirected,
    complete_graph,
    cycle_graph,
    disjoint_union,
    erdos_renyi,
    generate_rmat,
    load_edge_list,
    path_graph,
    star_graph,
)
from .serial import Tally, bc_exact, bc_oracle, brandes_round, teps

__version__ = "0.1.0"

__all__ = [
    "EdgeList",
    "Graph",
    "RmatParams",
    "build_undirected",
    "generate_rmat",
    "load_edge_list",
    "path_graph",
    "cycle_graph",
    "star_graph",
    "complete_graph",
    "disjoint_union",
    "erdos_renyi",
    "Tally",
    "bc_exact",
    "bc_oracle",
    "brandes_round",
    "teps",
    "preprocess_1degree",
    "bc_with_1degree",
    "endpoint_contribution",
    "Mode",
    "bc_with_heuristics",
    "dmf_accumulate",
    "schedule_2degree",
]
