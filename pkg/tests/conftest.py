import random

import pytest

from pspath.graph import Edge, Graph, is_strongly_connected, random_graph


def strongly_connected_graph(rng: random.Random, n_max=8, m_max=20, cost_lo=-20, cost_hi=20, n_min=2):
    """Uniform random graph conditioned on strong connectivity (by resampling)."""
    while True:
        n = rng.randint(n_min, n_max)
        m = rng.randint(n, min(m_max, n * (n - 1)))
        g = random_graph(n, m, cost_lo, cost_hi, seed=rng.randrange(2**32))
        if is_strongly_connected(g):
            return g


def small_graph(rng: random.Random, n_max=8, m_max=20, cost_lo=-20, cost_hi=20, param_prob=1.0, max_weight=1):
    """Random multigraph without the connectivity condition; may hold parallel edges."""
    n = rng.randint(1, n_max)
    m = rng.randint(0, m_max)
    edges = []
    for _ in range(m):
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        edges.append(Edge(u, v, rng.randint(cost_lo, cost_hi), rng.random() < param_prob,
                          rng.randint(1, max_weight)))
    return Graph(n, edges, None)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def two_cycle():
    # s -> v cost 3, v -> s cost 5, both parameterized
    return Graph(2, [Edge(0, 1, 3), Edge(1, 0, 5)], 0)


@pytest.fixture
def parallel_edges():
    # A: cost 0 non-parameterized, B: cost 4 parameterized
    return Graph(2, [Edge(0, 1, 0, False), Edge(0, 1, 4, True)], 0)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None:
        return
    terminalreporter.section("acceptance criteria")
    for num in range(1, 11):
        missing = f"criterion {num}: NOT RUN  (deselected, or errored before reporting)"
        terminalreporter.write_line(mod.RESULTS.get(num, missing))
