import random
from dataclasses import replace
from fractions import Fraction

import pytest

from conftest import small_graph
from pspath.cycles import add_artificial_source
from pspath.graph import Edge, Graph
from pspath.oracle import bellman_ford_at, brute_min_mean_cycle, certify_solution
from pspath.parametric import solve
from pspath.rational import NEG_INF


def test_bellman_ford_parallel_edges(parallel_edges):
    res = bellman_ford_at(parallel_edges, 0)
    assert not res.has_negative_cycle
    assert res.distances == [0, 0]


def test_bellman_ford_negative_cycle(two_cycle):
    res = bellman_ford_at(two_cycle, 5)
    assert res.has_negative_cycle and sorted(res.negative_cycle) == [0, 1]
    assert bellman_ford_at(two_cycle, 4).distances == [0, -1]


def test_bellman_ford_unreachable_and_errors():
    g = Graph(3, [Edge(0, 1, 2)], 0)
    assert bellman_ford_at(g, Fraction(1, 3)).distances == [0, Fraction(5, 3), None]
    with pytest.raises(ValueError):
        bellman_ford_at(g, NEG_INF)
    with pytest.raises(ValueError):
        bellman_ford_at(g.with_source(None), 0)


def _walk_lengths(g, lam, source):
    """Shortest simple-path lengths by exhaustive enumeration, or None if some cycle is negative."""
    best = [None] * g.n
    best[source] = Fraction(0)

    def length(e):
        return e.cost - (lam * e.weight if e.param else 0)

    def dfs(v, d, on):
        for eid in g.out_edges[v]:
            e = g.edges[eid]
            if e.head in on:
                continue
            nd = d + length(e)
            if best[e.head] is None or nd < best[e.head]:
                best[e.head] = nd
            dfs(e.head, nd, on | {e.head})

    dfs(source, Fraction(0), {source})
    cyc = brute_min_mean_cycle(g) if g.n else None
    return best, cyc


def test_bellman_ford_against_path_enumeration():
    rng = random.Random(21)
    for _ in range(300):
        g = small_graph(rng, n_max=6, m_max=12, param_prob=0.6, max_weight=3)
        g = g.with_source(0)
        lam = Fraction(rng.randint(-30, 30), rng.randint(1, 4))
        res = bellman_ford_at(g, lam)
        # a negative cycle exists iff some simple cycle is negative in G_lam
        shifted = g.with_edges([Edge(e.tail, e.head, e.cost - (lam * e.weight if e.param else 0), True, 1)
                                for e in g.edges])
        cyc = brute_min_mean_cycle(shifted)
        reach = _reachable(g, 0)
        neg = cyc is not None and _has_negative_reachable_cycle(shifted, reach)
        assert res.has_negative_cycle == neg
        if not neg:
            want, _ = _walk_lengths(g, lam, 0)
            assert res.distances == want
        else:
            c = res.negative_cycle
            assert sum(shifted.edges[i].cost for i in c) < 0


def _reachable(g, s):
    seen = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        for eid in g.out_edges[u]:
            v = g.edges[eid].head
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _has_negative_reachable_cycle(g, reach):
    keep = [i for i, e in enumerate(g.edges) if e.tail in reach and e.head in reach]
    sub = g.with_edges([g.edges[i] for i in keep])
    r = brute_min_mean_cycle(sub)
    return r is not None and r.mean < 0


def test_brute_triangle_with_back_edge():
    g = Graph(3, [Edge(0, 1, 1), Edge(1, 2, 3), Edge(2, 0, 2), Edge(1, 0, 1)], None)
    r = brute_min_mean_cycle(g)
    assert r.mean == 1 and sorted(r.cycle) == [0, 3]


def test_brute_dag_and_two_cycle(two_cycle):
    assert brute_min_mean_cycle(Graph(3, [Edge(0, 1, 1), Edge(1, 2, 1)], None)) is None
    r = brute_min_mean_cycle(two_cycle)
    assert r.mean == 4 and r.cycle == (0, 1)


def test_brute_ratio_mode():
    g = Graph(2, [Edge(0, 1, 3, True, 1), Edge(1, 0, 5, True, 3)], None)
    assert brute_min_mean_cycle(g, ratio=True).mean == 2
    with pytest.raises(ValueError):
        brute_min_mean_cycle(Graph(11, [], None))


@pytest.mark.parametrize("fixture", ["two_cycle", "parallel_edges"])
def test_certify_tiny(fixture, request):
    g = request.getfixturevalue(fixture)
    rep = certify_solution(g, solve(g))
    assert rep.ok, rep.failures
    assert rep.summary().startswith("certified")


def test_certify_minus_inf():
    g = Graph(3, [Edge(0, 1, 1), Edge(1, 2, 2, False), Edge(2, 1, -3, False)], 0)
    assert certify_solution(g, solve(g)).ok


def test_certify_detects_corruption():
    g = add_artificial_source(Graph(3, [Edge(0, 1, 5), Edge(1, 2, 1), Edge(2, 0, 9), Edge(1, 0, 2)], None))
    sol = solve(g)
    assert len(sol.breakpoints) >= 2
    bad = replace(sol, breakpoints=[sol.breakpoints[0]] + [sol.breakpoints[1] - 100] + sol.breakpoints[2:])
    rep = certify_solution(g, bad)
    assert not rep.ok
    assert any(name == "breakpoints nondecreasing" for name, _, _ in rep.failures)


def test_certify_detects_wrong_lambda_star(two_cycle):
    sol = solve(two_cycle)
    rep = certify_solution(two_cycle, replace(sol, lambda_star=Fraction(3)))
    assert not rep.ok


def test_certify_detects_wrong_tree():
    g = add_artificial_source(Graph(3, [Edge(0, 1, 5), Edge(1, 2, 1), Edge(2, 0, 9), Edge(1, 0, 2)], None))
    sol = solve(g)
    log = [list(x) for x in sol.parent_log]
    # swap the initial parent of vertex 1 for the edge 0 -> 1
    log[1][0] = (NEG_INF, 0)
    rep = certify_solution(g, replace(sol, parent_log=log))
    assert not rep.ok
