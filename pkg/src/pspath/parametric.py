"""Parametric shortest paths with vertex keys in a Fibonacci heap.

Edge costs in ``G_lambda`` are ``c(e) - lambda * d(e)`` where ``d(e)`` is the
edge weight for parameterized edges and 0 otherwise.  Starting from the
shortest-path tree at ``lambda = -inf``, :func:`solve` sweeps ``lambda``
upward one pivot at a time until a cycle of zero cost appears (``lambda*``)
or no path can overtake the current tree (``lambda* = inf``).

Everything here is exact: tree costs are integers (or Fractions), keys are
Fractions, and infinity is the :data:`~pspath.rational.INF` sentinel.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .graph import Graph
from .heap import FibonacciHeap
from .rational import INF, NEG_INF, is_finite

__all__ = [
    "PathTree",
    "MinusInfCertificate",
    "UnreachableError",
    "Pivoted",
    "CycleFound",
    "NoMorePivots",
    "SolverState",
    "ParametricSolution",
    "initial_tree",
    "edge_key",
    "pivot_once",
    "solve",
    "tree_at",
    "tree_at_pivot",
]


class UnreachableError(ValueError):
    pass


@dataclass
class PathTree:
    """Shortest-path tree with per-vertex path cost and parameterized weight."""

    root: int
    parent_edge: list
    cost: list
    pcount: list
    children: list  # per vertex: dict used as an insertion-ordered set

    @classmethod
    def from_parents(cls, g: Graph, root: int, parent_edge) -> "PathTree":
        """Build a tree from parent edges, recomputing costs top-down."""
        n = g.n
        parent_edge = list(parent_edge)
        children = [dict() for _ in range(n)]
        for v, e in enumerate(parent_edge):
            if e is not None:
                children[g.edges[e].tail][v] = None
        cost = [0] * n
        pcount = [0] * n
        seen = 1
        stack = [root]
        while stack:
            u = stack.pop()
            for v in children[u]:
                e = g.edges[parent_edge[v]]
                cost[v] = cost[u] + e.cost
                pcount[v] = pcount[u] + (e.weight if e.param else 0)
                seen += 1
                stack.append(v)
        if seen != n or parent_edge[root] is not None:
            raise ValueError("parent edges do not form an arborescence")
        return cls(root, parent_edge, cost, pcount, children)

    def parents(self) -> list:
        return list(self.parent_edge)

    def distances(self, lam) -> list:
        """Tree path lengths in ``G_lam`` for a finite ``lam``."""
        return [c - lam * p for c, p in zip(self.cost, self.pcount)]


class MinusInfCertificate(NamedTuple):
    """A cycle with no parameterized weight and negative cost: ``lambda* = -inf``."""

    cycle: list


class Pivoted(NamedTuple):
    lam: object
    vertex: int
    edge: int
    changed: list


class CycleFound(NamedTuple):
    lam: object
    cycle: list


class NoMorePivots(NamedTuple):
    pass


def _param_weights(g: Graph) -> list:
    return [e.weight if e.param else 0 for e in g.edges]


def initial_tree(g: Graph):
    """Shortest-path tree of ``G_{-inf}``.

    Bellman-Ford over the lexicographic length (parameterized weight, cost):
    at ``lambda -> -inf`` a path with less parameterized weight is always
    shorter, and cost breaks ties.  Returns a :class:`MinusInfCertificate`
    when a cycle is lexicographically negative.
    """
    if g.source is None:
        raise ValueError("graph has no source vertex")
    n, s = g.n, g.source
    tails = [e.tail for e in g.edges]
    heads = [e.head for e in g.edges]
    costs = [e.cost for e in g.edges]
    dw = _param_weights(g)
    dist = [None] * n
    dist[s] = (0, 0)
    pred = [None] * n
    last = -1
    for _ in range(n):
        last = -1
        for e in range(g.m):
            du = dist[tails[e]]
            if du is None:
                continue
            cand = (du[0] + dw[e], du[1] + costs[e])
            v = heads[e]
            if dist[v] is None or cand < dist[v]:
                dist[v] = cand
                pred[v] = e
                last = v
        if last == -1:
            break
    if last != -1:
        x = last
        for _ in range(n):
            x = tails[pred[x]]
        cycle = []
        y = x
        while True:
            e = pred[y]
            cycle.append(e)
            y = tails[e]
            if y == x:
                break
        cycle.reverse()
        return MinusInfCertificate(cycle)
    missing = [v for v in range(n) if dist[v] is None]
    if missing:
        raise UnreachableError(f"vertex {missing[0] + 1} is unreachable from the source")
    return PathTree.from_parents(g, s, pred)


class SolverState:
    """Tree, vertex keys and heap of an in-progress parametric sweep.

    Every vertex (the source included: a key on the source can only ever
    close a cycle) holds the minimum key over its in-edges together with
    the edge attaining it.
    """

    def __init__(self, g: Graph, tree: PathTree, lam=NEG_INF):
        self.graph = g
        self.tree = tree
        self.lam = lam
        self._tails = [e.tail for e in g.edges]
        self._heads = [e.head for e in g.edges]
        self._costs = [e.cost for e in g.edges]
        self._dw = _param_weights(g)
        self._in = g.in_edges
        self._out = g.out_edges
        self.heap = FibonacciHeap()
        self.handles = [None] * g.n
        self.key_edge = [None] * g.n
        self.pivot_count = 0
        self.path_change_count = 0
        self.jumps = [0] * g.n
        self.pcount_total = sum(tree.pcount)
        for v in range(g.n):
            k, e = self._vertex_key(v)
            self.key_edge[v] = e
            self.handles[v] = self.heap.insert(k, (v, e), tiebreak=v)

    def edge_key(self, e: int):
        u, v = self._tails[e], self._heads[e]
        pc = self.tree.pcount
        den = pc[u] + self._dw[e] - pc[v]
        if den <= 0:
            return INF
        cost = self.tree.cost
        return Fraction(cost[u] + self._costs[e] - cost[v], den)

    def _vertex_key(self, v: int):
        best, best_e = INF, None
        for e in self._in[v]:
            k = self.edge_key(e)
            if k < best:
                best, best_e = k, e
        return best, best_e

    def vertex_key(self, v: int):
        return self.handles[v].key

    def subtree(self, v: int) -> list:
        children = self.tree.children
        out = [v]
        i = 0
        while i < len(out):
            out.extend(children[out[i]])
            i += 1
        return out

    def tree_path_edges(self, top: int, bottom: int) -> list:
        """Edges of the tree path from ``top`` down to ``bottom``."""
        path = []
        x = bottom
        pe = self.tree.parent_edge
        while x != top:
            e = pe[x]
            path.append(e)
            x = self._tails[e]
        path.reverse()
        return path

    def pivot(self):
        h = self.heap.min_handle()
        if h is None or not is_finite(h.key):
            return NoMorePivots()
        lam = h.key
        v = h.tiebreak
        e = self.key_edge[v]
        u = self._tails[e]
        sub = self.subtree(v)
        inside = set(sub)
        self.lam = lam
        if u in inside:
            return CycleFound(lam, self.tree_path_edges(v, u) + [e])

        tree = self.tree
        cost, pc = tree.cost, tree.pcount
        dc = cost[u] + self._costs[e] - cost[v]
        dp = pc[u] + self._dw[e] - pc[v]
        old = tree.parent_edge[v]
        if old is not None:
            del tree.children[self._tails[old]][v]
        tree.children[u][v] = None
        tree.parent_edge[v] = e
        for w in sub:
            cost[w] += dc
            pc[w] += dp
            self.jumps[w] += 1
        self.pivot_count += 1
        self.path_change_count += len(sub)
        self.pcount_total += dp * len(sub)

        heap = self.heap
        for w in sub:
            k, ke = self._vertex_key(w)
            self.key_edge[w] = ke
            heap.reassign_key(self.handles[w], k, (w, ke))
        for w in sub:
            for e2 in self._out[w]:
                x = self._heads[e2]
                if x in inside:
                    continue
                k = self.edge_key(e2)
                hx = self.handles[x]
                if k < hx.key:
                    self.key_edge[x] = e2
                    heap.decrease_key(hx, k, (x, e2))
        return Pivoted(lam, v, e, sub)


def edge_key(state: SolverState, e: int):
    return state.edge_key(e)


def pivot_once(state: SolverState):
    """Advance one pivot: :class:`Pivoted`, :class:`CycleFound` or :class:`NoMorePivots`."""
    return state.pivot()


@dataclass
class ParametricSolution:
    """Breakpoints plus compressed per-vertex parent histories.

    ``parent_log[v]`` lists ``(lambda, parent edge)`` in nondecreasing lambda
    order, starting with ``(NEG_INF, initial parent)``.  ``log_pivot[v]``
    holds the pivot index (1-based, 0 for the initial tree) of each entry.
    """

    graph: Graph
    breakpoints: list
    parent_log: list
    log_pivot: list
    lambda_star: object
    terminal_cycle: Optional[list] = None
    minus_inf_cycle: Optional[list] = None
    pivot_count: int = 0
    path_change_count: int = 0
    jumps: list = field(default_factory=list)
    pcount_totals: list = field(default_factory=list)

    def deduplicated_breakpoints(self) -> list:
        out = []
        for lam in self.breakpoints:
            if not out or out[-1] != lam:
                out.append(lam)
        return out


def solve(g: Graph, dedup: bool = False, tree: Optional[PathTree] = None) -> ParametricSolution:
    """Full breakpoint sequence of shortest-path trees for lambda in [-inf, lambda*].

    ``tree`` may supply a known shortest-path tree of ``G_{-inf}`` (e.g. the
    star of an artificial source) to skip the initial Bellman-Ford pass.
    """
    res = initial_tree(g) if tree is None else tree
    if isinstance(res, MinusInfCertificate):
        return ParametricSolution(g, [], [[] for _ in range(g.n)], [[] for _ in range(g.n)],
                                  NEG_INF, minus_inf_cycle=res.cycle, jumps=[0] * g.n)
    state = SolverState(g, res)
    log = [[(NEG_INF, pe)] for pe in res.parent_edge]
    log_pivot = [[0] for _ in range(g.n)]
    breakpoints = []
    totals = [state.pcount_total]
    while True:
        out = state.pivot()
        if isinstance(out, Pivoted):
            breakpoints.append(out.lam)
            log[out.vertex].append((out.lam, out.edge))
            log_pivot[out.vertex].append(state.pivot_count)
            totals.append(state.pcount_total)
        elif isinstance(out, CycleFound):
            lam_star, cycle = out.lam, out.cycle
            break
        else:
            lam_star, cycle = INF, None
            break
    sol = ParametricSolution(
        g, breakpoints, log, log_pivot, lam_star, cycle,
        pivot_count=state.pivot_count, path_change_count=state.path_change_count,
        jumps=list(state.jumps), pcount_totals=totals,
    )
    if dedup:
        sol.breakpoints = sol.deduplicated_breakpoints()
    return sol


def tree_at(sol: ParametricSolution, lam) -> PathTree:
    """Shortest-path tree of ``G_lam``; at a breakpoint the post-pivot parent is used."""
    if sol.lambda_star == NEG_INF:
        raise ValueError("no tree exists: lambda* = -inf")
    if lam > sol.lambda_star:
        raise ValueError(f"lambda {lam} exceeds lambda* {sol.lambda_star}")
    parents = []
    for entries in sol.parent_log:
        lams = [x for x, _ in entries]
        i = bisect_right(lams, lam) - 1
        parents.append(entries[max(i, 0)][1])
    return PathTree.from_parents(sol.graph, sol.graph.source, parents)


def tree_at_pivot(sol: ParametricSolution, index: int) -> PathTree:
    """The tree in force after ``index`` pivots (0 is the initial tree)."""
    if sol.lambda_star == NEG_INF:
        raise ValueError("no tree exists: lambda* = -inf")
    parents = []
    for entries, idx in zip(sol.parent_log, sol.log_pivot):
        i = bisect_right(idx, index) - 1
        parents.append(entries[i][1])
    return PathTree.from_parents(sol.graph, sol.graph.source, parents)
