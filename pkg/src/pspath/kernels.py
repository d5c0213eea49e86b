"""Array kernels for the hot loops: the minimum-cycle pivot sweep and Karp's DP.

Each kernel is plain Python over int64 arrays, compiled with numba unless
``PSPATH_DISABLE_NUMBA`` is set.  Keys are kept as unreduced ``(num, den)``
pairs with ``den == 0`` meaning +inf and are compared by cross-multiplication,
so callers must check :func:`cycle_kernel_safe` / :func:`karp_kernel_safe`
first; beyond those bounds int64 products could overflow and the exact
Python paths are used instead.
"""

from __future__ import annotations

import numpy as np

from ._accel import NUMBA_ENABLED, maybe_njit

__all__ = [
    "GraphArrays",
    "graph_arrays",
    "sourceless_arrays",
    "cycle_kernel_safe",
    "karp_kernel_safe",
    "parametric_cycle_kernel",
    "run_parametric_cycle",
    "karp_kernel",
    "karp_numpy",
    "run_karp",
]

_LIMIT = 2**62

# heap field rows
_P, _C, _L, _R, _D, _M, _IN = 0, 1, 2, 3, 4, 5, 6


class GraphArrays:
    """Flat int64 view of a graph with CSR in/out adjacency."""

    __slots__ = ("n", "tails", "heads", "costs", "dw", "in_ptr", "in_eid", "out_ptr", "out_eid")

    def __init__(self, n, tails, heads, costs, dw):
        self.n = n
        self.tails = np.ascontiguousarray(tails, dtype=np.int64)
        self.heads = np.ascontiguousarray(heads, dtype=np.int64)
        self.costs = np.ascontiguousarray(costs, dtype=np.int64)
        self.dw = np.ascontiguousarray(dw, dtype=np.int64)
        self.in_ptr, self.in_eid = _csr(n, self.heads)
        self.out_ptr, self.out_eid = _csr(n, self.tails)


def _csr(n, keys):
    order = np.argsort(keys, kind="stable").astype(np.int64)
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(keys, minlength=n), out=ptr[1:])
    return ptr, order


def graph_arrays(g, all_param=False, unit_weights=False) -> GraphArrays:
    """Arrays for an integer-cost graph; flags force every edge parameterized / weight 1."""
    m = g.m
    tails = np.fromiter((e.tail for e in g.edges), dtype=np.int64, count=m)
    heads = np.fromiter((e.head for e in g.edges), dtype=np.int64, count=m)
    costs = np.fromiter((e.cost for e in g.edges), dtype=np.int64, count=m)
    dw = np.fromiter(((1 if unit_weights else e.weight) if (all_param or e.param) else 0 for e in g.edges),
                     dtype=np.int64, count=m)
    return GraphArrays(g.n, tails, heads, costs, dw)


def sourceless_arrays(g, keep_weights=False):
    """Arrays of ``g`` with every edge parameterized plus an artificial source ``n``.

    The source edges ``n -> v`` are ids ``m .. m+n-1``, cost 0, not
    parameterized.  Returns ``None`` when some cost is not an integer.
    """
    n, m = g.n, g.m
    costs = [e.cost for e in g.edges]
    if not all(isinstance(c, (int, np.integer)) for c in costs):
        return None
    star = np.arange(n, dtype=np.int64)
    tails = np.concatenate([np.fromiter((e.tail for e in g.edges), np.int64, m), np.full(n, n, np.int64)])
    heads = np.concatenate([np.fromiter((e.head for e in g.edges), np.int64, m), star])
    cost_arr = np.zeros(m + n, dtype=np.int64)
    cost_arr[:m] = costs
    dw = np.zeros(m + n, dtype=np.int64)
    dw[:m] = np.fromiter((e.weight for e in g.edges), np.int64, m) if keep_weights else 1
    return GraphArrays(n + 1, tails, heads, cost_arr, dw)


def cycle_kernel_safe(n, max_abs_cost, max_weight) -> bool:
    """True when every key product of the cycle sweep fits in int64."""
    # |key num| <= (2n + 1) C, key den <= n W, compared by num * den
    c = max(int(max_abs_cost), 1)
    w = max(int(max_weight), 1)
    return (2 * n + 2) * c * (n + 1) * w < _LIMIT


def karp_kernel_safe(n, max_abs_cost) -> bool:
    c = max(int(max_abs_cost), 1)
    return (2 * n + 2) * c * (n + 1) < _LIMIT


# ---------------------------------------------------------------------------
# array Fibonacci heap over vertex ids (one item per vertex)

@maybe_njit
def _less(a, b, knum, kden):
    da = kden[a]
    db = kden[b]
    if da == 0:
        if db == 0:
            return a < b
        return False
    if db == 0:
        return True
    x = knum[a] * db
    y = knum[b] * da
    if x != y:
        return x < y
    return a < b


@maybe_njit
def _splice_out(x, H):
    l = H[_L, x]
    r = H[_R, x]
    H[_R, l] = r
    H[_L, r] = l
    H[_L, x] = x
    H[_R, x] = x


@maybe_njit
def _add_root(x, H, hs):
    H[_P, x] = -1
    H[_M, x] = 0
    m = hs[0]
    if m == -1:
        H[_L, x] = x
        H[_R, x] = x
        hs[0] = x
    else:
        r = H[_R, m]
        H[_R, x] = r
        H[_L, x] = m
        H[_L, r] = x
        H[_R, m] = x


@maybe_njit
def _heap_insert(x, H, hs, knum, kden):
    H[_C, x] = -1
    H[_D, x] = 0
    H[_IN, x] = 1
    _add_root(x, H, hs)
    if _less(x, hs[0], knum, kden):
        hs[0] = x
    hs[1] += 1


@maybe_njit
def _cut(x, p, H, hs):
    if H[_R, x] == x:
        H[_C, p] = -1
    elif H[_C, p] == x:
        H[_C, p] = H[_R, x]
    _splice_out(x, H)
    H[_D, p] -= 1
    _add_root(x, H, hs)


@maybe_njit
def _cascading_cut(p, H, hs):
    while H[_P, p] != -1:
        if H[_M, p] == 0:
            H[_M, p] = 1
            return
        z = H[_P, p]
        _cut(p, z, H, hs)
        p = z


@maybe_njit
def _heap_decrease(x, num, den, H, hs, knum, kden):
    knum[x] = num
    kden[x] = den
    p = H[_P, x]
    if p != -1 and _less(x, p, knum, kden):
        _cut(x, p, H, hs)
        _cascading_cut(p, H, hs)
    if _less(x, hs[0], knum, kden):
        hs[0] = x


@maybe_njit
def _link(y, x, H):
    _splice_out(y, H)
    H[_P, y] = x
    H[_M, y] = 0
    c = H[_C, x]
    if c == -1:
        H[_C, x] = y
        H[_L, y] = y
        H[_R, y] = y
    else:
        r = H[_R, c]
        H[_R, y] = r
        H[_L, y] = c
        H[_L, r] = y
        H[_R, c] = y
    H[_D, x] += 1


@maybe_njit
def _consolidate(H, hs, knum, kden, roots, table):
    start = hs[0]
    k = 0
    x = start
    while True:
        roots[k] = x
        k += 1
        x = H[_R, x]
        if x == start:
            break
    maxd = 0
    for i in range(k):
        x = roots[i]
        d = H[_D, x]
        while table[d] != -1:
            y = table[d]
            table[d] = -1
            if _less(y, x, knum, kden):
                t = x
                x = y
                y = t
            _link(y, x, H)
            d += 1
        table[d] = x
        if d > maxd:
            maxd = d
    best = -1
    for d in range(maxd + 1):
        x = table[d]
        if x != -1:
            if best == -1 or _less(x, best, knum, kden):
                best = x
            table[d] = -1
    hs[0] = best


@maybe_njit
def _heap_delete(x, H, hs, knum, kden, roots, table):
    p = H[_P, x]
    if p != -1:
        _cut(x, p, H, hs)
        _cascading_cut(p, H, hs)
    c = H[_C, x]
    for _ in range(H[_D, x]):
        nxt = H[_R, c]
        _splice_out(c, H)
        _add_root(c, H, hs)
        c = nxt
    H[_C, x] = -1
    H[_D, x] = 0
    if hs[0] == x:
        if H[_R, x] == x:
            hs[0] = -1
        else:
            hs[0] = H[_R, x]
            _splice_out(x, H)
            _consolidate(H, hs, knum, kden, roots, table)
    else:
        _splice_out(x, H)
    H[_IN, x] = 0
    hs[1] -= 1


@maybe_njit
def _heap_reassign(x, num, den, H, hs, knum, kden, roots, table):
    # new <= old: decrease in place; otherwise delete + insert
    od = kden[x]
    if den == 0:
        smaller = od == 0
    elif od == 0:
        smaller = True
    else:
        smaller = num * od <= knum[x] * den
    if smaller:
        _heap_decrease(x, num, den, H, hs, knum, kden)
    else:
        _heap_delete(x, H, hs, knum, kden, roots, table)
        knum[x] = num
        kden[x] = den
        _heap_insert(x, H, hs, knum, kden)


# ---------------------------------------------------------------------------
# minimum mean / ratio cycle sweep

@maybe_njit
def _vertex_key(v, tails, costs, dw, in_ptr, in_eid, cost, pc):
    bn = 0
    bd = 0
    be = -1
    for j in range(in_ptr[v], in_ptr[v + 1]):
        e = in_eid[j]
        u = tails[e]
        den = pc[u] + dw[e] - pc[v]
        if den <= 0:
            continue
        num = cost[u] + costs[e] - cost[v]
        if bd == 0 or num * bd < bn * den:
            bn = num
            bd = den
            be = e
    return bn, bd, be


@maybe_njit
def _append_child(u, v, first, last, nxt, prv):
    t = last[u]
    prv[v] = t
    nxt[v] = -1
    if t == -1:
        first[u] = v
    else:
        nxt[t] = v
    last[u] = v


@maybe_njit
def parametric_cycle_kernel(n, root, tails, heads, costs, dw, in_ptr, in_eid, out_ptr, out_eid,
                            parent_edge, cost, pc):
    """Pivot from the given tree until a cycle closes or keys run out.

    ``parent_edge``, ``cost`` and ``pc`` describe a shortest-path tree and
    are updated in place.  Returns ``(num, den, cycle, pivots, changes, jumps)``
    with ``den == 0`` when no cycle exists (lambda* = inf).
    """
    # children as doubly linked lists appended at the tail, so subtrees are
    # walked in the same order as the Python solver
    first = np.full(n, -1, np.int64)
    last = np.full(n, -1, np.int64)
    nxt = np.full(n, -1, np.int64)
    prv = np.full(n, -1, np.int64)
    for v in range(n):
        e = parent_edge[v]
        if e >= 0:
            _append_child(tails[e], v, first, last, nxt, prv)

    H = np.full((7, n), -1, np.int64)
    hs = np.array([-1, 0], np.int64)
    knum = np.zeros(n, np.int64)
    kden = np.zeros(n, np.int64)
    kedge = np.full(n, -1, np.int64)
    roots = np.empty(n, np.int64)
    table = np.full(130, -1, np.int64)
    for v in range(n):
        bn, bd, be = _vertex_key(v, tails, costs, dw, in_ptr, in_eid, cost, pc)
        knum[v] = bn
        kden[v] = bd
        kedge[v] = be
        _heap_insert(v, H, hs, knum, kden)

    mark = np.zeros(n, np.int64)
    stamp = 0
    sub = np.empty(n, np.int64)
    jumps = np.zeros(n, np.int64)
    pivots = 0
    changes = 0
    while True:
        v = hs[0]
        if v == -1 or kden[v] == 0:
            return 0, 0, np.empty(0, np.int64), pivots, changes, jumps
        lam_num = knum[v]
        lam_den = kden[v]
        e = kedge[v]
        u = tails[e]

        stamp += 1
        sub[0] = v
        mark[v] = stamp
        size = 1
        i = 0
        while i < size:
            c = first[sub[i]]
            while c != -1:
                sub[size] = c
                mark[c] = stamp
                size += 1
                c = nxt[c]
            i += 1

        if mark[u] == stamp:
            length = 1
            x = u
            while x != v:
                x = tails[parent_edge[x]]
                length += 1
            cyc = np.empty(length, np.int64)
            cyc[length - 1] = e
            x = u
            k = length - 2
            while x != v:
                pe = parent_edge[x]
                cyc[k] = pe
                k -= 1
                x = tails[pe]
            return lam_num, lam_den, cyc, pivots, changes, jumps

        dc = cost[u] + costs[e] - cost[v]
        dp = pc[u] + dw[e] - pc[v]
        old = parent_edge[v]
        if old >= 0:
            op = tails[old]
            a = prv[v]
            b = nxt[v]
            if a != -1:
                nxt[a] = b
            else:
                first[op] = b
            if b != -1:
                prv[b] = a
            else:
                last[op] = a
        _append_child(u, v, first, last, nxt, prv)
        parent_edge[v] = e

        for i in range(size):
            w = sub[i]
            cost[w] += dc
            pc[w] += dp
            jumps[w] += 1
        pivots += 1
        changes += size

        for i in range(size):
            w = sub[i]
            bn, bd, be = _vertex_key(w, tails, costs, dw, in_ptr, in_eid, cost, pc)
            kedge[w] = be
            _heap_reassign(w, bn, bd, H, hs, knum, kden, roots, table)
        for i in range(size):
            w = sub[i]
            for j in range(out_ptr[w], out_ptr[w + 1]):
                e2 = out_eid[j]
                x = heads[e2]
                if mark[x] == stamp:
                    continue
                den = pc[w] + dw[e2] - pc[x]
                if den <= 0:
                    continue
                num = cost[w] + costs[e2] - cost[x]
                xd = kden[x]
                if xd == 0 or num * xd < knum[x] * den:
                    kedge[x] = e2
                    _heap_decrease(x, num, den, H, hs, knum, kden)


def run_parametric_cycle(arrays: GraphArrays, root, parent_edge, cost, pc):
    """Call the sweep kernel on copies of the initial tree arrays."""
    a = arrays
    return parametric_cycle_kernel(
        a.n, root, a.tails, a.heads, a.costs, a.dw, a.in_ptr, a.in_eid, a.out_ptr, a.out_eid,
        np.array(parent_edge, dtype=np.int64), np.array(cost, dtype=np.int64), np.array(pc, dtype=np.int64),
    )


# ---------------------------------------------------------------------------
# Karp's minimum mean cycle DP, sourceless form: D_0(v) = 0 for every v


@maybe_njit
def karp_kernel(n, tails, heads, costs):
    """Minimum cycle mean as ``(num, den)``; ``den == 0`` when acyclic."""
    m = tails.shape[0]
    big = 2**62
    D = np.full((n + 1, n), big, np.int64)
    for v in range(n):
        D[0, v] = 0
    for k in range(1, n + 1):
        prev = D[k - 1]
        cur = D[k]
        for e in range(m):
            du = prev[tails[e]]
            if du == big:
                continue
            cand = du + costs[e]
            h = heads[e]
            if cand < cur[h]:
                cur[h] = cand
    best_num = 0
    best_den = 0
    for v in range(n):
        dn = D[n, v]
        if dn == big:
            continue
        wn = 0
        wd = 0
        for k in range(n):
            dk = D[k, v]
            if dk == big:
                continue
            num = dn - dk
            den = n - k
            if wd == 0 or num * wd > wn * den:
                wn = num
                wd = den
        if best_den == 0 or wn * best_den < best_num * wd:
            best_num = wn
            best_den = wd
    return best_num, best_den


def karp_numpy(n, tails, heads, costs, dtype=np.int64):
    """Vectorized Karp DP; ``dtype=object`` gives arbitrary-precision integers."""
    tails = np.asarray(tails, dtype=np.int64)
    heads = np.asarray(heads, dtype=np.int64)
    if len(tails) == 0 or n == 0:
        return 0, 0
    order = np.argsort(heads, kind="stable")
    t = tails[order]
    h = heads[order]
    c = np.asarray(costs, dtype=dtype)[order]
    starts = np.flatnonzero(np.r_[True, h[1:] != h[:-1]])
    targets = h[starts]
    big = 2**62 if dtype is np.int64 else None
    if big is None:
        big = (abs(int(max(costs, key=abs))) + 1) * (n + 2) * 4
    D = np.full((n + 1, n), big, dtype=dtype)
    D[0, :] = 0
    for k in range(1, n + 1):
        prev = D[k - 1, t]
        cand = np.where(prev >= big, big, prev + c)
        D[k, targets] = np.minimum.reduceat(cand, starts)
    reach = D[n] < big
    if not reach.any():
        return 0, 0
    dn = D[n]
    wn = np.zeros(n, dtype=dtype)
    wd = np.zeros(n, dtype=np.int64)
    for k in range(n):
        dk = D[k]
        ok = reach & (dk < big)
        num = np.where(ok, dn - dk, 0)
        den = n - k
        better = ok & ((wd == 0) | (num * wd > wn * den))
        wn = np.where(better, num, wn)
        wd = np.where(better, den, wd)
    best_num, best_den = 0, 0
    for v in np.flatnonzero(reach):
        a, b = int(wn[v]), int(wd[v])
        if best_den == 0 or a * best_den < best_num * b:
            best_num, best_den = a, b
    return best_num, best_den


def run_karp(n, tails, heads, costs, max_abs_cost=None):
    """Dispatch Karp's DP to numba, int64 numpy, or object numpy by magnitude."""
    if max_abs_cost is None:
        max_abs_cost = int(np.max(np.abs(costs))) if len(costs) else 0
    if not karp_kernel_safe(n, max_abs_cost):
        return karp_numpy(n, tails, heads, [int(x) for x in costs], dtype=object)
    if NUMBA_ENABLED:
        num, den = karp_kernel(n, np.asarray(tails, np.int64), np.asarray(heads, np.int64),
                               np.asarray(costs, np.int64))
        return int(num), int(den)
    return karp_numpy(n, tails, heads, costs)
