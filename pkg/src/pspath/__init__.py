"""Parametric shortest paths, minimum mean and ratio cycles, and minimum balancing.

Hot loops run as numba kernels when numba is importable; set
``PSPATH_DISABLE_NUMBA=1`` to force the pure Python/numpy paths.
"""

__version__ = "0.1.0"

from .balance import BalanceResult, Balanced, Violation, check_balanced, min_balance
from .cycles import (CycleResult, Potential, add_artificial_source, min_cycle, min_mean_cycle_karp,
                     min_mean_cycle_parametric, min_ratio_cycle, shortest_path_potential)
from .graph import Edge, Graph, GraphFormatError, contract_cycle, parse_graph, random_graph, serialize_graph
from .heap import FibonacciHeap
from .oracle import bellman_ford_at, brute_min_mean_cycle, certify_solution
from .parametric import ParametricSolution, PathTree, SolverState, solve, tree_at
from .rational import INF, NEG_INF, format_rational, parse_rational

__all__ = [
    "BalanceResult", "Balanced", "Violation", "check_balanced", "min_balance",
    "CycleResult", "Potential", "add_artificial_source", "min_cycle", "min_mean_cycle_karp",
    "min_mean_cycle_parametric", "min_ratio_cycle", "shortest_path_potential",
    "Edge", "Graph", "GraphFormatError", "contract_cycle", "parse_graph", "random_graph", "serialize_graph",
    "FibonacciHeap",
    "bellman_ford_at", "brute_min_mean_cycle", "certify_solution",
    "ParametricSolution", "PathTree", "SolverState", "solve", "tree_at",
    "INF", "NEG_INF", "format_rational", "parse_rational",
]
