"""Minimum balancing by repeated minimum-mean-cycle contraction.

The parametric sweep runs with every edge parameterized.  Each time it
closes a cycle at ``lambda*`` the current graph is shifted by ``-lambda*``,
reweighted by its shortest-path potential (making tree and cycle edges cost
zero), the cycle is contracted, and the sweep continues from the contracted
tree at local ``lambda = 0``.  The balancing potential is the sum of the
per-level potentials pulled back to the original vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cycles import Potential
from .graph import Edge, Graph, contract_cycle
from .parametric import CycleFound, NoMorePivots, PathTree, SolverState, UnreachableError, initial_tree
from .rational import INF

__all__ = [
    "NotStronglyConnectedError",
    "BalanceResult",
    "Balanced",
    "Violation",
    "apply_potential",
    "min_balance",
    "rebuild_after_contraction",
    "check_balanced",
]

CHECK_MAX_N = 20


class NotStronglyConnectedError(ValueError):
    pass


@dataclass
class BalanceResult:
    potential: Potential
    contraction_trace: list  # (global lambda*, cycle as original edge ids)
    contraction_count: int
    pivots: int = 0
    path_changes: list = field(default_factory=list)  # per original vertex

    @property
    def lambdas(self) -> list:
        return [lam for lam, _ in self.contraction_trace]


@dataclass(frozen=True)
class Balanced:
    def __bool__(self):
        return True


@dataclass(frozen=True)
class Violation:
    subset: tuple
    min_in: object
    min_out: object

    def __bool__(self):
        return False


def apply_potential(g: Graph, p) -> Graph:
    """Reduced costs ``c(e) + p(tail) - p(head)``; costs become Fractions."""
    if len(p) != g.n:
        raise ValueError(f"potential has {len(p)} values for {g.n} vertices")
    return g.with_edges(
        [Edge(e.tail, e.head, Fraction(e.cost) + p[e.tail] - p[e.head], e.param, e.weight) for e in g.edges])


def rebuild_after_contraction(state: SolverState, potential, cycle):
    """Shift by ``-lambda*``, apply the potential, contract ``cycle`` and restart the sweep.

    The contracted tree T/C keeps every surviving tree edge; all of them
    have reduced cost zero, so each vertex's path cost is zero and its
    parameterized count is its depth.  Returns ``(new_state, vertex_map)``.
    """
    g = state.graph
    lam = state.lam
    shifted = g.with_edges([Edge(e.tail, e.head, e.cost - lam, e.param, e.weight) for e in g.edges])
    reduced = apply_potential(shifted, potential)
    h, vmap = contract_cycle(reduced, cycle)
    new_id = {old: new for new, old in enumerate(vmap.kept_edges)}
    parents = [None] * h.n
    for v, pe in enumerate(state.tree.parent_edge):
        if pe is not None and pe in new_id:
            parents[vmap[v]] = new_id[pe]
    tree = PathTree.from_parents(h, h.source, parents)
    return SolverState(h, tree, lam=Fraction(0)), vmap


def min_balance(g: Graph) -> BalanceResult:
    """Potential under which every proper nonempty vertex subset is minimum-balanced.

    Requires a strongly connected graph.  The potential is normalized so
    that vertex 0 (vertex 1 in files) has value 0.
    """
    n = g.n
    if n == 0:
        raise ValueError("empty graph")
    if n == 1:
        return BalanceResult(Potential.zero(1), [], 0, 0, [0])
    h = Graph(n, [Edge(e.tail, e.head, Fraction(e.cost), True, 1) for e in g.edges], 0)
    try:
        tree = initial_tree(h)
    except UnreachableError as exc:
        raise NotStronglyConnectedError(str(exc)) from None
    state = SolverState(h, tree)
    edge_ids = list(range(g.m))  # current edge id -> original edge id
    where = list(range(n))  # original vertex -> current vertex
    total = [Fraction(0)] * n
    changes = [0] * n
    trace = []
    offset = Fraction(0)
    pivots = 0
    while state.graph.n > 1:
        while True:
            out = state.pivot()
            if isinstance(out, CycleFound):
                break
            if isinstance(out, NoMorePivots):
                raise NotStronglyConnectedError("sweep ended without a cycle: graph is not strongly connected")
        tree = state.tree
        lam = out.lam
        pi = [c - lam * p for c, p in zip(tree.cost, tree.pcount)]
        for w in range(n):
            total[w] += pi[where[w]]
            changes[w] += state.jumps[where[w]]
        pivots += state.pivot_count
        offset += lam
        trace.append((offset, [edge_ids[e] for e in out.cycle]))
        state, vmap = rebuild_after_contraction(state, pi, out.cycle)
        edge_ids = [edge_ids[e] for e in vmap.kept_edges]
        where = [vmap[x] for x in where]
    potential = Potential(total).normalized(0)
    return BalanceResult(potential, trace, len(trace), pivots, changes)


def check_balanced(g: Graph, p=None):
    """Exhaustively test every proper nonempty subset of ``g`` under potential ``p``.

    Returns :class:`Balanced` or the first :class:`Violation` in subset-bitmask
    order (vertex ``i`` is bit ``i``).
    """
    n = g.n
    if n > CHECK_MAX_N:
        raise ValueError(f"exhaustive check limited to n <= {CHECK_MAX_N}")
    if n < 2:
        return Balanced()
    h = g if p is None else apply_potential(g, p)
    costs = [Fraction(e.cost) for e in h.edges]
    # compare by rank: exact and keeps the arrays integral
    distinct = sorted(set(costs))
    rank = {c: i for i, c in enumerate(distinct)}
    none = len(distinct)
    masks = np.arange(1, (1 << n) - 1, dtype=np.int64)
    min_in = np.full(masks.shape, none, dtype=np.int64)
    min_out = np.full(masks.shape, none, dtype=np.int64)
    for e, c in zip(h.edges, costs):
        t_in = (masks >> e.tail) & 1
        h_in = (masks >> e.head) & 1
        r = rank[c]
        entering = (t_in == 0) & (h_in == 1)
        leaving = (t_in == 1) & (h_in == 0)
        np.minimum(min_in, np.where(entering, r, none), out=min_in)
        np.minimum(min_out, np.where(leaving, r, none), out=min_out)
    bad = np.flatnonzero(min_in != min_out)
    if bad.size == 0:
        return Balanced()
    i = int(bad[0])
    mask = int(masks[i])
    subset = tuple(v for v in range(n) if mask >> v & 1)

    def value(r):
        return INF if r == none else distinct[r]

    return Violation(subset, value(int(min_in[i])), value(int(min_out[i])))
