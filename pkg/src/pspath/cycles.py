"""Minimum mean and minimum ratio cycles.

The parametric route adds an artificial source with zero-cost,
non-parameterized edges to every vertex, parameterizes every original edge
and sweeps ``lambda`` up to ``lambda*``, which is then the minimum cycle
mean (or cost/weight ratio when weights are kept).  Karp's dynamic program
is provided as an independent value-only algorithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _accel
from .graph import Edge, Graph, induced_subgraph, strong_components
from .kernels import cycle_kernel_safe, run_karp, run_parametric_cycle, sourceless_arrays
from .parametric import ParametricSolution, PathTree, solve, tree_at
from .rational import is_finite

__all__ = [
    "CycleResult",
    "Potential",
    "add_artificial_source",
    "min_mean_cycle_parametric",
    "min_ratio_cycle",
    "min_mean_cycle_karp",
    "shortest_path_potential",
    "min_cycle",
]


@dataclass(frozen=True)
class CycleResult:
    mean: Fraction
    cycle: Optional[tuple]
    method: str
    pivots: int = 0
    path_changes: int = 0


@dataclass(frozen=True)
class Potential:
    """Vertex weights; ``c(u, v)`` becomes ``c(u, v) + p(u) - p(v)``."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    @classmethod
    def zero(cls, n: int) -> "Potential":
        return cls((Fraction(0),) * n)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, v):
        return self.values[v]

    def __iter__(self):
        return iter(self.values)

    def __add__(self, other: "Potential") -> "Potential":
        if len(other) != len(self):
            raise ValueError("potentials are over different vertex sets")
        return Potential(a + b for a, b in zip(self.values, other.values))

    def __neg__(self) -> "Potential":
        return Potential(-a for a in self.values)

    def pull_back(self, vertex_map: Sequence[int]) -> "Potential":
        """Extend a potential on a contracted graph to the pre-contraction vertices."""
        return Potential(self.values[vertex_map[w]] for w in range(len(vertex_map)))

    def normalized(self, anchor: int = 0) -> "Potential":
        if not self.values:
            return self
        base = self.values[anchor]
        return Potential(a - base for a in self.values)


def add_artificial_source(g: Graph) -> Graph:
    """Append vertex ``n`` with a zero-cost, non-parameterized edge to every vertex.

    Original edge ids are unchanged; the new edges are ``m .. m+n-1``.
    """
    extra = [Edge(g.n, v, 0, False, 1) for v in range(g.n)]
    return Graph(g.n + 1, list(g.edges) + extra, g.n)


def _cycle_graph(g: Graph, keep_weights: bool) -> Graph:
    return g.with_edges([Edge(e.tail, e.head, e.cost, True, e.weight if keep_weights else 1) for e in g.edges])


def _star_tree(aug: Graph, n: int) -> PathTree:
    m0 = aug.m - n
    parents = [m0 + v for v in range(n)] + [None]
    return PathTree.from_parents(aug, n, parents)


def _kernel_arrays(g: Graph, keep_weights: bool, backend: str):
    """Sourceless int64 arrays when the kernel should run, else ``None``."""
    if backend == "python" or (backend == "auto" and not _accel.NUMBA_ENABLED):
        return None
    try:
        arrays = sourceless_arrays(g, keep_weights)
    except OverflowError:
        arrays = None
    ok = arrays is not None and cycle_kernel_safe(
        g.n + 1, int(np.abs(arrays.costs).max(initial=0)), int(arrays.dw.max(initial=1)))
    if not ok and backend == "kernel":
        raise ValueError("kernel backend needs integer costs within the int64 safety bound")
    return arrays if ok else None


def _parametric_cycle(g: Graph, keep_weights: bool, method: str, backend: str) -> Optional[CycleResult]:
    n = g.n
    if g.m == 0:
        return None
    arrays = _kernel_arrays(g, keep_weights, backend)
    if arrays is not None:
        parents = [g.m + v for v in range(n)] + [-1]
        zeros = [0] * (n + 1)
        num, den, cyc, pivots, changes, _ = run_parametric_cycle(arrays, n, parents, zeros, zeros)
        if den == 0:
            return None
        return CycleResult(Fraction(int(num), int(den)), tuple(int(e) for e in cyc), method,
                           int(pivots), int(changes))
    aug = add_artificial_source(_cycle_graph(g, keep_weights))
    sol = solve(aug, tree=_star_tree(aug, n))
    if not is_finite(sol.lambda_star):
        return None
    return CycleResult(sol.lambda_star, tuple(sol.terminal_cycle), method,
                       sol.pivot_count, sol.path_change_count)


def min_mean_cycle_parametric(g: Graph, backend: str = "auto") -> Optional[CycleResult]:
    """Minimum mean cycle via the parametric sweep; ``None`` if ``g`` is acyclic.

    ``backend`` is ``"auto"`` (compiled kernel when available and safe),
    ``"python"`` (exact Fraction solver) or ``"kernel"``.
    """
    return _parametric_cycle(g, False, "parametric", backend)


def min_ratio_cycle(g: Graph, backend: str = "auto") -> Optional[CycleResult]:
    """Cycle minimizing total cost over total weight; ``None`` if acyclic."""
    return _parametric_cycle(g, True, "parametric", backend)


def min_mean_cycle_karp(g: Graph) -> Optional[Fraction]:
    """Minimum cycle mean by Karp's O(nm) dynamic program (value only)."""
    if g.m == 0:
        return None
    costs = [e.cost for e in g.edges]
    scale = 1
    if not all(isinstance(c, (int, np.integer)) for c in costs):
        scale = math.lcm(*(Fraction(c).denominator for c in costs))
        costs = [int(Fraction(c) * scale) for c in costs]
    tails = np.fromiter((e.tail for e in g.edges), dtype=np.int64, count=g.m)
    heads = np.fromiter((e.head for e in g.edges), dtype=np.int64, count=g.m)
    max_c = max(abs(int(c)) for c in costs)
    if max_c < 2**62:
        costs_arr = np.array(costs, dtype=np.int64)
    else:
        costs_arr = costs
    num, den = run_karp(g.n, tails, heads, costs_arr, max_abs_cost=max_c)
    if den == 0:
        return None
    return Fraction(num, den * scale)


def shortest_path_potential(sol: ParametricSolution, g: Optional[Graph] = None) -> Potential:
    """Distances in ``G_{lambda*}`` from the final tree of a solved instance."""
    lam = sol.lambda_star
    if not is_finite(lam):
        raise ValueError("shortest path potential needs a finite lambda*")
    tree = tree_at(sol, lam)
    return Potential(Fraction(c) - lam * p for c, p in zip(tree.cost, tree.pcount))


def min_cycle(g: Graph, algo: str = "parametric", ratio: bool = False, scc: bool = False,
              backend: str = "auto") -> Optional[CycleResult]:
    """Front door used by the CLI.  Karp results carry ``cycle=None``."""
    if scc:
        best = None
        for comp in strong_components(g):
            sub, ids = induced_subgraph(g, comp)
            if sub.m == 0:
                continue
            r = min_cycle(sub, algo, ratio, False, backend)
            if r is None:
                continue
            if r.cycle is not None:
                r = CycleResult(r.mean, tuple(ids[e] for e in r.cycle), r.method, r.pivots, r.path_changes)
            if best is None or r.mean < best.mean:
                best = r
        return best
    if algo == "parametric":
        return min_ratio_cycle(g, backend) if ratio else min_mean_cycle_parametric(g, backend)
    if algo == "karp":
        if ratio:
            raise ValueError("karp computes mean cycles only; use --algo=parametric or brute with --ratio")
        mean = min_mean_cycle_karp(g)
        return None if mean is None else CycleResult(mean, None, "karp")
    if algo == "brute":
        from .oracle import brute_min_mean_cycle

        return brute_min_mean_cycle(g, ratio=ratio)
    raise ValueError(f"unknown algorithm {algo!r}")
