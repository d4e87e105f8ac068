"""b-Matching and maximum matching on graphs of bounded split-width."""

from .fileformat import ParseError, parse_graph, read_graph, serialize_graph, write_graph
from .graph import (
    Graph,
    GraphError,
    WeightStore,
    build_graph,
    store_merge,
    store_split,
    truncate_capacities,
    validate_bmatching,
)
from .kernel import Kernel, KernelBudgetError, max_matching, solve_bmatching_kernel, solve_maxcost_bmatching_kernel
from .profile import MuProfile, compute_profile, mu_at, mu_from_profile
from .solver import SolveResult, solve_bmatching, solve_maximum_matching
from .splitdecomp import SplitTree, decompose_minimal, find_split, split_width, verify_decomposition

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphError",
    "Kernel",
    "KernelBudgetError",
    "MuProfile",
    "ParseError",
    "SolveResult",
    "SplitTree",
    "WeightStore",
    "build_graph",
    "compute_profile",
    "decompose_minimal",
    "find_split",
    "max_matching",
    "mu_at",
    "mu_from_profile",
    "parse_graph",
    "read_graph",
    "serialize_graph",
    "solve_bmatching",
    "solve_bmatching_kernel",
    "solve_maxcost_bmatching_kernel",
    "solve_maximum_matching",
    "split_width",
    "store_merge",
    "store_split",
    "truncate_capacities",
    "validate_bmatching",
    "verify_decomposition",
    "write_graph",
]
