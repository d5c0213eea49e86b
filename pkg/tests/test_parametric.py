import random
from fractions import Fraction

import pytest

from conftest import strongly_connected_graph
from pspath.cycles import add_artificial_source
from pspath.graph import Edge, Graph
from pspath.oracle import bellman_ford_at, brute_min_mean_cycle
from pspath.parametric import (CycleFound, MinusInfCertificate, NoMorePivots, PathTree, Pivoted, SolverState,
                               UnreachableError, edge_key, initial_tree, pivot_once, solve, tree_at, tree_at_pivot)
from pspath.rational import INF, NEG_INF, is_finite


def rooted_graph(rng, n_max=10, m_max=30, param_prob=0.7, max_weight=1, cost=(-20, 20)):
    """Random multigraph whose source 0 reaches every vertex (spine edges 0 -> v added)."""
    n = rng.randint(1, n_max)
    edges = [Edge(0, v, rng.randint(*cost), rng.random() < param_prob, rng.randint(1, max_weight))
             for v in range(1, n)]
    for _ in range(rng.randint(0, m_max)):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.append(Edge(u, v, rng.randint(*cost), rng.random() < param_prob, rng.randint(1, max_weight)))
    return Graph(n, edges, 0)


def test_initial_tree_prefers_fewer_parameterized_edges():
    g = Graph(2, [Edge(0, 1, 0, False), Edge(0, 1, -10, True)], 0)
    t = initial_tree(g)
    assert t.parent_edge == [None, 0]
    assert t.cost == [0, 0] and t.pcount == [0, 0]


def test_initial_tree_without_parameters_is_shortest_path_tree():
    g = Graph(3, [Edge(0, 1, 5, False), Edge(0, 2, 1, False), Edge(2, 1, 2, False)], 0)
    t = initial_tree(g)
    assert t.parent_edge == [None, 2, 1]
    assert t.cost == [0, 3, 1]


def test_initial_tree_minus_inf_certificate():
    g = Graph(3, [Edge(0, 1, 1), Edge(1, 2, 2, False), Edge(2, 1, -3, False)], 0)
    res = initial_tree(g)
    assert isinstance(res, MinusInfCertificate)
    assert sorted(res.cycle) == [1, 2]
    sol = solve(g)
    assert sol.lambda_star is NEG_INF and sorted(sol.minus_inf_cycle) == [1, 2]


def test_initial_tree_errors():
    with pytest.raises(UnreachableError):
        initial_tree(Graph(2, [], 0))
    with pytest.raises(ValueError):
        initial_tree(Graph(2, [Edge(0, 1, 1)], None))


def test_path_tree_rejects_non_tree():
    g = Graph(3, [Edge(1, 2, 0), Edge(2, 1, 0)], 0)
    with pytest.raises(ValueError):
        PathTree.from_parents(g, 0, [None, 1, 0])


def _key_state(param=True):
    # s=0 -> u=1 cost 5, s -> v=2 cost 3, u -> v cost 2
    g = Graph(3, [Edge(0, 1, 5), Edge(0, 2, 3), Edge(1, 2, 2, param)], 0)
    return SolverState(g, PathTree.from_parents(g, 0, [None, 0, 1]))


def test_edge_key_formula():
    st = _key_state()
    assert st.tree.cost[1] == 5 and st.tree.pcount[1] == 1
    assert edge_key(st, 2) == 4


def test_edge_key_zero_denominator():
    assert edge_key(_key_state(param=False), 2) is INF


def test_edge_key_tree_edge():
    st = _key_state()
    assert edge_key(st, 0) is INF and edge_key(st, 1) is INF


def test_single_pivot_then_done(parallel_edges):
    st = SolverState(parallel_edges, initial_tree(parallel_edges))
    out = pivot_once(st)
    assert isinstance(out, Pivoted)
    assert (out.lam, out.vertex, out.edge) == (4, 1, 1)
    assert isinstance(pivot_once(st), NoMorePivots)


def test_pivot_detects_cycle(two_cycle):
    st = SolverState(two_cycle, initial_tree(two_cycle))
    out = pivot_once(st)
    assert isinstance(out, CycleFound)
    assert out.lam == 4 and sorted(out.cycle) == [0, 1]


def _check_state(st):
    for v in range(st.graph.n):
        want = min((st.edge_key(e) for e in st.graph.in_edges[v]), default=INF)
        h = st.handles[v]
        assert h.key == want
        if is_finite(want):
            assert st.edge_key(st.key_edge[v]) == want
        assert st.lam == NEG_INF or want >= st.lam


def test_heap_keys_match_full_recomputation():
    rng = random.Random(11)
    for _ in range(200):
        g = rooted_graph(rng, n_max=50, m_max=150, cost=(-5, 40))
        t = initial_tree(g)
        if isinstance(t, MinusInfCertificate):
            continue
        st = SolverState(g, t)
        _check_state(st)
        while True:
            out = st.pivot()
            if not isinstance(out, Pivoted):
                break
            _check_state(st)


def test_solve_parallel_edges(parallel_edges):
    sol = solve(parallel_edges)
    assert sol.breakpoints == [4]
    assert sol.lambda_star is INF and sol.terminal_cycle is None
    assert sol.parent_log[1] == [(NEG_INF, 0), (4, 1)]


def test_solve_two_cycle(two_cycle):
    sol = solve(two_cycle)
    assert sol.breakpoints == [] and sol.lambda_star == 4
    assert sorted(sol.terminal_cycle) == [0, 1]


def test_solve_matches_brute_force():
    rng = random.Random(5)
    for _ in range(500):
        g = strongly_connected_graph(rng)
        sol = solve(g.with_source(0))
        assert sol.lambda_star == brute_min_mean_cycle(g).mean


def test_solution_invariants():
    rng = random.Random(6)
    for _ in range(200):
        g = rooted_graph(rng, n_max=20, m_max=60, max_weight=3)
        sol = solve(g)
        if sol.lambda_star is NEG_INF:
            continue
        n = g.n
        bps = sol.breakpoints
        assert all(a <= b for a, b in zip(bps, bps[1:]))
        assert len(bps) == sol.pivot_count <= n * (n - 1) // 2
        assert all(a < b for a, b in zip(sol.pcount_totals, sol.pcount_totals[1:]))
        assert (sol.terminal_cycle is not None) == is_finite(sol.lambda_star)
        if sol.terminal_cycle:
            cyc = [g.edges[e] for e in sol.terminal_cycle]
            pw = sum(e.weight for e in cyc if e.param)
            assert Fraction(sum(e.cost for e in cyc), pw) == sol.lambda_star
        assert sum(sol.jumps) == sol.path_change_count >= sol.pivot_count


def test_dedup_drops_repeats():
    rng = random.Random(8)
    seen_repeat = False
    for _ in range(300):
        g = rooted_graph(rng, n_max=8, m_max=20, cost=(-2, 2))
        sol = solve(g)
        ded = solve(g, dedup=True)
        assert ded.breakpoints == sorted(set(sol.breakpoints))
        seen_repeat |= len(ded.breakpoints) < len(sol.breakpoints)
    assert seen_repeat


def test_tree_at_boundaries(parallel_edges):
    sol = solve(parallel_edges)
    assert tree_at(sol, 0).parent_edge[1] == 0
    assert tree_at(sol, 4).parent_edge[1] == 1
    assert tree_at(sol, NEG_INF).parent_edge == initial_tree(parallel_edges).parent_edge
    assert tree_at_pivot(sol, 0).parent_edge[1] == 0


def test_tree_at_errors(two_cycle):
    sol = solve(two_cycle)
    with pytest.raises(ValueError):
        tree_at(sol, 5)
    g = Graph(2, [Edge(0, 1, 1), Edge(1, 0, -1, False), Edge(0, 1, -1, False)], 0)
    with pytest.raises(ValueError):
        tree_at(solve(g), 0)


def test_tree_at_midpoints_match_bellman_ford():
    rng = random.Random(9)
    checked = 0
    while checked < 50:
        g = rooted_graph(rng, n_max=15, m_max=40, max_weight=2)
        sol = solve(g)
        if sol.lambda_star is NEG_INF or len(sol.breakpoints) < 2:
            continue
        ends = sol.breakpoints + ([sol.lambda_star] if is_finite(sol.lambda_star) else [])
        for a, b in zip(ends, ends[1:]):
            mid = (a + b) / 2
            assert tree_at(sol, mid).distances(mid) == bellman_ford_at(g, mid).distances
        checked += 1


def test_artificial_source_star_tree_equals_bellman_ford_start():
    rng = random.Random(10)
    for _ in range(50):
        g = strongly_connected_graph(rng)
        aug = add_artificial_source(g)
        a = solve(aug)
        assert a.pivot_count == len(a.breakpoints)
        assert a.lambda_star == brute_min_mean_cycle(g).mean
