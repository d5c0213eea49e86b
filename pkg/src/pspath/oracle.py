"""Reference computations used to check the solvers.

Nothing here imports the solver modules' algorithms: distances come from a
plain Bellman-Ford at a fixed lambda and cycles from exhaustive enumeration.
They are slow on purpose and meant for small instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .graph import Graph
from .rational import NEG_INF, format_rational, is_finite

__all__ = [
    "FixedLambdaResult",
    "bellman_ford_at",
    "brute_min_mean_cycle",
    "CertReport",
    "certify_solution",
]

BRUTE_MAX_N = 10


@dataclass
class FixedLambdaResult:
    """Exact distances in ``G_lam`` (``None`` = unreachable) or a negative cycle."""

    distances: Optional[list] = None
    negative_cycle: Optional[list] = None

    @property
    def has_negative_cycle(self) -> bool:
        return self.negative_cycle is not None


def bellman_ford_at(g: Graph, lam, source: Optional[int] = None) -> FixedLambdaResult:
    """Bellman-Ford in ``G_lam`` for finite ``lam``, in exactly scaled integers.

    With ``lam = p/q`` every edge length is scaled by ``q`` so integer-cost
    graphs stay in integer arithmetic; distances are divided back at the end.
    """
    if not is_finite(lam):
        raise ValueError("bellman_ford_at needs a finite lambda")
    s = g.source if source is None else source
    if s is None:
        raise ValueError("graph has no source vertex")
    lam = Fraction(lam)
    p, q = lam.numerator, lam.denominator
    n = g.n
    edges = [(e.tail, e.head, e.cost * q - (p * e.weight if e.param else 0)) for e in g.edges]
    dist = [None] * n
    dist[s] = 0
    pred = [None] * n
    last = -1
    for _ in range(n):
        last = -1
        for i, (u, v, w) in enumerate(edges):
            du = dist[u]
            if du is None:
                continue
            nd = du + w
            if dist[v] is None or nd < dist[v]:
                dist[v] = nd
                pred[v] = i
                last = v
        if last == -1:
            break
    if last != -1:
        x = last
        for _ in range(n):
            x = edges[pred[x]][0]
        cycle = []
        y = x
        while True:
            i = pred[y]
            cycle.append(i)
            y = edges[i][0]
            if y == x:
                break
        cycle.reverse()
        return FixedLambdaResult(negative_cycle=cycle)
    return FixedLambdaResult(distances=[None if d is None else Fraction(d, q) for d in dist])


def brute_min_mean_cycle(g: Graph, ratio: bool = False):
    """Enumerate every simple directed cycle; return the one of least mean (or cost/weight).

    Each cycle is generated once, from its smallest vertex, in DFS order over
    edge ids; ties keep the first cycle found.  ``None`` if acyclic.
    """
    from .cycles import CycleResult

    if g.n > BRUTE_MAX_N:
        raise ValueError(f"brute force enumeration limited to n <= {BRUTE_MAX_N}")
    out = g.out_edges
    best = None
    best_cycle = None
    on_path = [False] * g.n
    path = []

    def extend(start, v, cost, weight):
        nonlocal best, best_cycle
        for eid in out[v]:
            e = g.edges[eid]
            w = e.head
            if w < start or on_path[w]:
                continue
            c = cost + e.cost
            wt = weight + (e.weight if ratio else 1)
            if w == start:
                val = Fraction(c) / wt
                if best is None or val < best:
                    best = val
                    best_cycle = tuple(path) + (eid,)
                continue
            on_path[w] = True
            path.append(eid)
            extend(start, w, c, wt)
            path.pop()
            on_path[w] = False

    for start in range(g.n):
        extend(start, start, 0, 0)
    if best is None:
        return None
    return CycleResult(best, best_cycle, "brute")


@dataclass
class CertReport:
    checks: list = field(default_factory=list)  # (name, passed, detail)

    def add(self, name: str, passed: bool, detail: str = ""):
        self.checks.append((name, bool(passed), detail))

    @property
    def ok(self) -> bool:
        return all(p for _, p, _ in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c[1]]

    def summary(self) -> str:
        bad = self.failures
        if not bad:
            return f"certified: {len(self.checks)} checks passed"
        return f"FAILED {len(bad)} of {len(self.checks)} checks; first: {bad[0][0]} {bad[0][2]}"


def _tree_distances(g: Graph, parent_edge, lam) -> Optional[list]:
    """Path lengths in ``G_lam`` along the given parent edges, or ``None`` if they are not a tree."""
    n = g.n
    lam = Fraction(lam)
    dist = [None] * n
    dist[g.source] = Fraction(0)
    for v in range(n):
        chain = []
        x = v
        while dist[x] is None:
            e = parent_edge[x]
            if e is None or len(chain) > n:
                return None
            chain.append(x)
            x = g.edges[e].tail
        for y in reversed(chain):
            e = g.edges[parent_edge[y]]
            dist[y] = dist[e.tail] + e.cost - (lam * e.weight if e.param else 0)
    return dist


def _cycle_length(g: Graph, cycle, lam) -> Fraction:
    lam = Fraction(lam)
    return sum((g.edges[i].cost - (lam * g.edges[i].weight if g.edges[i].param else 0) for i in cycle),
               Fraction(0))


def certify_solution(g: Graph, sol) -> CertReport:
    """Check a :class:`~pspath.parametric.ParametricSolution` against fixed-lambda oracles.

    Tree ``T_i`` (in force from pivot ``i``) is checked at both ends of its
    interval ``[lam_i, lam_{i+1}]`` and at the midpoint; unbounded ends are
    replaced by a point one unit inside.  Only distances are compared, since
    trees at a breakpoint are not unique.
    """
    rep = CertReport()
    bps = list(sol.breakpoints)
    mono = all(a <= b for a, b in zip(bps, bps[1:]))
    if bps and is_finite(sol.lambda_star):
        mono = mono and bps[-1] <= sol.lambda_star
    rep.add("breakpoints nondecreasing", mono)
    if sol.lambda_star == NEG_INF:
        cyc = sol.minus_inf_cycle or []
        pw = sum(g.edges[i].weight for i in cyc if g.edges[i].param)
        cost = sum(g.edges[i].cost for i in cyc)
        rep.add("-inf certificate cycle", bool(cyc) and pw == 0 and cost < 0)
        return rep

    # per-pivot lambdas come from the parent log, which stays complete even
    # when the breakpoint list has been deduplicated
    pivots = sorted((j, lam) for entries, idx in zip(sol.parent_log, sol.log_pivot)
                    for (lam, _), j in zip(entries, idx) if j > 0)
    rep.add("parent log covers every pivot", [j for j, _ in pivots] == list(range(1, sol.pivot_count + 1)))
    lams = [lam for _, lam in pivots]
    rep.add("breakpoints match pivot log",
            bps == lams or bps == [x for k, x in enumerate(lams) if k == 0 or lams[k - 1] != x])
    ends = [NEG_INF] + lams + [sol.lambda_star]
    cache = {}

    def oracle(lam):
        if lam not in cache:
            cache[lam] = bellman_ford_at(g, lam)
        return cache[lam]

    for i in range(len(ends) - 1):
        lo, hi = ends[i], ends[i + 1]
        if is_finite(lo) and is_finite(hi):
            points = [lo, (lo + hi) / 2, hi]
        elif is_finite(lo):
            points = [lo, lo + 1]
        elif is_finite(hi):
            points = [hi - 1, hi]
        else:
            points = [Fraction(0)]
        parents = _parents_after(sol, i)
        for lam in points:
            name = f"tree {i} at lambda={format_rational(lam)}"
            ref = oracle(lam)
            if ref.has_negative_cycle:
                rep.add(name, False, "oracle found a negative cycle")
                continue
            mine = _tree_distances(g, parents, lam)
            if mine is None:
                rep.add(name, False, "parent edges do not form a tree")
                continue
            rep.add(name, mine == ref.distances)

    if is_finite(sol.lambda_star):
        cyc = sol.terminal_cycle or []
        ok_shape = bool(cyc) and all(
            g.edges[a].head == g.edges[b].tail for a, b in zip(cyc, cyc[1:] + cyc[:1]))
        rep.add("terminal cycle is closed", ok_shape)
        rep.add("terminal cycle has zero cost at lambda*", ok_shape and _cycle_length(g, cyc, sol.lambda_star) == 0)
        rep.add("negative cycle at lambda*+1", oracle(sol.lambda_star + 1).has_negative_cycle)
    else:
        rep.add("terminal cycle absent", sol.terminal_cycle is None)
    return rep


def _parents_after(sol, index: int) -> list:
    parents = []
    for entries, idx in zip(sol.parent_log, sol.log_pivot):
        j = 0
        while j + 1 < len(idx) and idx[j + 1] <= index:
            j += 1
        parents.append(entries[j][1])
    return parents
