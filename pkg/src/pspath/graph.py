"""Directed multigraphs: the text format, random generation and cycle contraction.

Text format (vertex ids are 1-based in files, 0-based in memory)::

    c comment
    p psp <n> <m>
    s <vertex>                                  (optional)
    a <tail> <head> <cost> <param:0|1> <weight>  (exactly m lines)
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .rational import format_rational

__all__ = [
    "Edge",
    "Graph",
    "GraphFormatError",
    "VertexMap",
    "parse_graph",
    "serialize_graph",
    "random_graph",
    "sample_arcs",
    "contract_cycle",
    "is_strongly_connected",
    "strong_components",
]


class GraphFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


class Edge(NamedTuple):
    tail: int
    head: int
    cost: object  # int in input graphs; Fraction once a potential is applied
    param: bool = True
    weight: int = 1


@dataclass(frozen=True)
class Graph:
    """Immutable directed multigraph with integer (or rational) edge costs."""

    n: int
    edges: tuple = ()
    source: Optional[int] = None

    def __post_init__(self):
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        for i, e in enumerate(edges):
            if not (0 <= e.tail < self.n and 0 <= e.head < self.n):
                raise ValueError(f"edge {i} has an endpoint out of range")
            if e.weight < 1:
                raise ValueError(f"edge {i} has weight {e.weight} < 1")
        if self.source is not None and not 0 <= self.source < self.n:
            raise ValueError("source out of range")

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def out_edges(self) -> list:
        out = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            out[e.tail].append(i)
        return out

    @cached_property
    def in_edges(self) -> list:
        inc = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            inc[e.head].append(i)
        return inc

    def degrees(self) -> np.ndarray:
        """Total (in + out) degree of every vertex."""
        deg = np.zeros(self.n, dtype=np.int64)
        for e in self.edges:
            deg[e.tail] += 1
            deg[e.head] += 1
        return deg

    def with_source(self, source: Optional[int]) -> "Graph":
        return Graph(self.n, self.edges, source)

    def with_edges(self, edges) -> "Graph":
        return Graph(self.n, edges, self.source)


def _parse_int(tok: str, what: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"non-integer {what} {tok!r}", lineno) from None


def parse_graph(text: Union[str, bytes, io.IOBase]) -> Graph:
    """Parse the line-oriented graph format; errors carry the offending line number."""
    if hasattr(text, "read"):
        text = text.read()
    if isinstance(text, bytes):
        text = text.decode()
    n = m = None
    source = None
    edges = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        kind = toks[0]
        if kind == "p":
            if n is not None:
                raise GraphFormatError("duplicate header", lineno)
            if len(toks) != 4 or toks[1] != "psp":
                raise GraphFormatError("malformed header, expected 'p psp <n> <m>'", lineno)
            n = _parse_int(toks[2], "vertex count", lineno)
            m = _parse_int(toks[3], "edge count", lineno)
            if n < 0 or m < 0:
                raise GraphFormatError("malformed header, negative count", lineno)
            continue
        if n is None:
            raise GraphFormatError("malformed header, expected 'p psp <n> <m>' first", lineno)
        if kind == "s":
            if len(toks) != 2:
                raise GraphFormatError("malformed source line", lineno)
            if source is not None:
                raise GraphFormatError("duplicate source line", lineno)
            v = _parse_int(toks[1], "vertex id", lineno)
            if not 1 <= v <= n:
                raise GraphFormatError(f"vertex id {v} out of range", lineno)
            source = v - 1
        elif kind == "a":
            if len(toks) != 6:
                raise GraphFormatError("malformed edge line, expected 'a <tail> <head> <cost> <param> <weight>'", lineno)
            t = _parse_int(toks[1], "vertex id", lineno)
            h = _parse_int(toks[2], "vertex id", lineno)
            for v in (t, h):
                if not 1 <= v <= n:
                    raise GraphFormatError(f"vertex id {v} out of range", lineno)
            cost = _parse_int(toks[3], "cost", lineno)
            if not -(2**63) <= cost < 2**63:
                raise GraphFormatError(f"cost {cost} does not fit in 64 bits", lineno)
            param = _parse_int(toks[4], "param flag", lineno)
            if param not in (0, 1):
                raise GraphFormatError(f"param flag must be 0 or 1, got {param}", lineno)
            weight = _parse_int(toks[5], "weight", lineno)
            if weight < 1:
                raise GraphFormatError(f"weight {weight} < 1", lineno)
            if len(edges) == m:
                raise GraphFormatError(f"edge count mismatch: header declares {m} edges", lineno)
            edges.append(Edge(t - 1, h - 1, cost, bool(param), weight))
        else:
            raise GraphFormatError(f"unknown line type {kind!r}", lineno)
    if n is None:
        raise GraphFormatError("missing header", last_line + 1)
    if len(edges) != m:
        raise GraphFormatError(f"edge count mismatch: header declares {m}, found {len(edges)}", last_line + 1)
    return Graph(n, edges, source)


def serialize_graph(g: Graph) -> str:
    out = [f"p psp {g.n} {g.m}\n"]
    if g.source is not None:
        out.append(f"s {g.source + 1}\n")
    for e in g.edges:
        out.append(f"a {e.tail + 1} {e.head + 1} {format_rational(e.cost)} {int(e.param)} {e.weight}\n")
    return "".join(out)


def sample_arcs(rng: np.random.Generator, n: int, m: int):
    """Draw ``m`` distinct ordered pairs ``u != v`` uniformly without replacement."""
    total = n * (n - 1)
    if m > total:
        raise ValueError(f"m={m} exceeds n(n-1)={total}")
    idx = rng.choice(total, size=m, replace=False) if m else np.zeros(0, dtype=np.int64)
    idx = np.asarray(idx, dtype=np.int64)
    if n < 2:
        return idx, idx
    tails = idx // (n - 1)
    r = idx % (n - 1)
    heads = np.where(r < tails, r, r + 1)
    return tails, heads


def random_graph(n: int, m: int, cost_lo: int = 1, cost_hi: int = 10**6, seed: int = 0) -> Graph:
    """Uniform random simple digraph on ``n`` vertices with exactly ``m`` arcs.

    Costs are independent uniform integers in ``[cost_lo, cost_hi]`` and every
    edge is parameterized.
    """
    if n < 0 or m < 0:
        raise ValueError("n and m must be nonnegative")
    if cost_lo > cost_hi:
        raise ValueError("cost_lo > cost_hi")
    rng = np.random.default_rng(seed)
    tails, heads = sample_arcs(rng, n, m)
    costs = rng.integers(cost_lo, cost_hi, size=m, endpoint=True, dtype=np.int64)
    edges = [Edge(int(t), int(h), int(c), True, 1) for t, h, c in zip(tails, heads, costs)]
    return Graph(n, edges)


@dataclass(frozen=True)
class VertexMap:
    """Result bookkeeping of a contraction.

    ``vertex[old]`` is the new id of each old vertex; ``kept_edges[new_edge]``
    is the old id of each surviving edge; ``cycle_vertex`` is the new id the
    cycle was contracted into.
    """

    vertex: tuple
    kept_edges: tuple
    cycle_vertex: int

    def __getitem__(self, v):
        return self.vertex[v]

    def __len__(self):
        return len(self.vertex)


def cycle_vertices(g: Graph, cycle: Sequence[int]) -> list:
    """Vertices of a simple directed cycle given as edge ids; raises if it is not one."""
    if not cycle:
        raise ValueError("empty cycle")
    verts = []
    for i, eid in enumerate(cycle):
        if not 0 <= eid < g.m:
            raise ValueError(f"edge id {eid} out of range")
        e = g.edges[eid]
        nxt = g.edges[cycle[(i + 1) % len(cycle)]]
        if e.head != nxt.tail:
            raise ValueError("edges do not form a closed directed walk")
        verts.append(e.tail)
    if len(set(verts)) != len(verts):
        raise ValueError("cycle is not simple")
    return verts


def contract_cycle(g: Graph, cycle: Sequence[int]):
    """Contract a simple cycle into one vertex, dropping self-loops and keeping parallel edges.

    Non-cycle vertices keep their relative order; the new vertex is last.
    """
    on_cycle = set(cycle_vertices(g, cycle))
    mapping = [0] * g.n
    k = 0
    for v in range(g.n):
        if v not in on_cycle:
            mapping[v] = k
            k += 1
    for v in on_cycle:
        mapping[v] = k
    new_edges = []
    kept = []
    for i, e in enumerate(g.edges):
        t, h = mapping[e.tail], mapping[e.head]
        if t == h:
            continue
        new_edges.append(Edge(t, h, e.cost, e.param, e.weight))
        kept.append(i)
    source = None if g.source is None else mapping[g.source]
    vmap = VertexMap(tuple(mapping), tuple(kept), k)
    return Graph(k + 1, new_edges, source), vmap


def strong_components(g: Graph) -> list:
    """Strongly connected components, each a sorted vertex list (iterative Tarjan)."""
    index = [-1] * g.n
    low = [0] * g.n
    on_stack = [False] * g.n
    stack = []
    comps = []
    counter = 0
    out = g.out_edges
    for root in range(g.n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(out[v]):
                work[-1] = (v, i + 1)
                w = g.edges[out[v][i]].head
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                p = work[-1][0]
                low[p] = min(low[p], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def is_strongly_connected(g: Graph) -> bool:
    return g.n > 0 and len(strong_components(g)) == 1


def induced_subgraph(g: Graph, vertices: Sequence[int]):
    """Subgraph on ``vertices`` (renumbered in the given order) plus the old id of each edge."""
    pos = {v: i for i, v in enumerate(vertices)}
    edges, ids = [], []
    for i, e in enumerate(g.edges):
        if e.tail in pos and e.head in pos:
            edges.append(Edge(pos[e.tail], pos[e.head], e.cost, e.param, e.weight))
            ids.append(i)
    return Graph(len(vertices), edges), ids
