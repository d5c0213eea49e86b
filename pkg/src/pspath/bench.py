"""Random-graph experiment harness: trial batches, degree statistics and CSV output."""

from __future__ import annotations

import csv
import hashlib
import io
import math
import time
import warnings
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _accel
from .balance import min_balance
from .cycles import _star_tree, add_artificial_source
from .graph import is_strongly_connected, random_graph, sample_arcs
from .kernels import cycle_kernel_safe, graph_arrays, run_karp, run_parametric_cycle, sourceless_arrays
from .oracle import certify_solution
from .parametric import solve
from .rational import is_finite

__all__ = [
    "TrialRecord",
    "BenchConfig",
    "CertificationError",
    "trial_seed",
    "run_trials",
    "degree_check",
    "degree_threshold",
    "emit_csv",
    "parse_csv",
    "path_change_summary",
    "parse_points",
    "timing_summary",
    "CSV_FIELDS",
]

CSV_FIELDS = ["n", "m", "seed", "trial", "path_changes", "max_degree", "pivots", "contractions",
              "time_parametric_ns", "time_karp_ns"]


class CertificationError(RuntimeError):
    pass


@dataclass
class TrialRecord:
    n: int
    m: int
    seed: int
    trial: int
    path_changes: int
    max_degree: int
    pivots: int
    contractions: Optional[int] = None
    time_parametric_ns: Optional[int] = None
    time_karp_ns: Optional[int] = None

    def without_timing(self) -> tuple:
        d = asdict(self)
        d.pop("time_parametric_ns")
        d.pop("time_karp_ns")
        return tuple(d.values())


@dataclass
class BenchConfig:
    points: list
    trials: Optional[int] = None
    seed: int = 0
    cost_lo: int = 1
    cost_hi: int = 10**6
    mode: str = "mmc"
    certify: bool = False

    def trials_for(self, n: int) -> int:
        if self.trials is not None:
            return self.trials
        return max(n // 2, 50)


def parse_points(text: str) -> list:
    """``"100:400,200:800"`` -> ``[(100, 400), (200, 800)]``."""
    pts = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        n, m = chunk.split(":")
        pts.append((int(n), int(m)))
    if not pts:
        raise ValueError("no points given")
    return pts


def trial_seed(base: int, n: int, m: int, trial: int, attempt: int = 0) -> int:
    """Per-trial seed: ``base`` xor a stable 64-bit hash of the trial coordinates."""
    tag = f"{n}:{m}:{trial}:{attempt}".encode()
    h = int.from_bytes(hashlib.blake2b(tag, digest_size=8).digest(), "little")
    return (base ^ h) & (2**64 - 1)


def _max_degree(g) -> int:
    return int(g.degrees().max()) if g.n else 0


def _warm_up():
    if _accel.NUMBA_ENABLED:
        g = add_artificial_source(random_graph(4, 8, seed=1))
        a = graph_arrays(g)
        run_parametric_cycle(a, 4, [8, 9, 10, 11, -1], [0] * 5, [0] * 5)
        run_karp(4, a.tails[:8], a.heads[:8], a.costs[:8])


def _mmc_trial(g, certify: bool):
    n = g.n
    max_c = max((abs(e.cost) for e in g.edges), default=0)
    use_kernel = _accel.NUMBA_ENABLED and cycle_kernel_safe(n + 1, max_c, 1)
    if use_kernel:
        arrays = sourceless_arrays(g)
        parents = [g.m + v for v in range(n)] + [-1]
        zeros = [0] * (n + 1)
        t0 = time.perf_counter_ns()
        num, den, _, pivots, changes, _ = run_parametric_cycle(arrays, n, parents, zeros, zeros)
        t_par = time.perf_counter_ns() - t0
        lam = None if den == 0 else Fraction(int(num), int(den))
        pivots, changes = int(pivots), int(changes)
    else:
        aug = add_artificial_source(g)
        star = _star_tree(aug, n)
        t0 = time.perf_counter_ns()
        sol = solve(aug, tree=star)
        t_par = time.perf_counter_ns() - t0
        lam = sol.lambda_star if is_finite(sol.lambda_star) else None
        pivots, changes = sol.pivot_count, sol.path_change_count

    tails = np.fromiter((e.tail for e in g.edges), np.int64, g.m)
    heads = np.fromiter((e.head for e in g.edges), np.int64, g.m)
    costs = np.fromiter((e.cost for e in g.edges), np.int64, g.m)
    t0 = time.perf_counter_ns()
    run_karp(n, tails, heads, costs, max_abs_cost=max_c)
    t_karp = time.perf_counter_ns() - t0

    if certify:
        aug = add_artificial_source(g)
        sol = solve(aug, tree=_star_tree(aug, n))
        rep = certify_solution(aug, sol)
        if not rep.ok:
            raise CertificationError(rep.summary())
        exact = sol.lambda_star if is_finite(sol.lambda_star) else None
        if exact != lam or sol.pivot_count != pivots or sol.path_change_count != changes:
            raise CertificationError("timed solver and certified solver disagree")
    if changes > n * n:
        raise RuntimeError(f"path changes {changes} exceed n^2 = {n * n}")
    return pivots, changes, t_par, t_karp


def _balance_graph(cfg: BenchConfig, n: int, m: int, trial: int):
    for attempt in range(1000):
        seed = trial_seed(cfg.seed, n, m, trial, attempt)
        g = random_graph(n, m, cfg.cost_lo, cfg.cost_hi, seed)
        if is_strongly_connected(g):
            return seed, g
    raise RuntimeError(f"no strongly connected graph found for n={n}, m={m}")


def run_trials(cfg: BenchConfig, progress=None) -> list:
    """Run every (point, trial) of ``cfg``; deterministic apart from timings."""
    if cfg.mode not in ("mmc", "balance"):
        raise ValueError(f"unknown mode {cfg.mode!r}")
    _warm_up()
    records = []
    for n, m in cfg.points:
        for trial in range(cfg.trials_for(n)):
            if cfg.mode == "mmc":
                seed = trial_seed(cfg.seed, n, m, trial)
                g = random_graph(n, m, cfg.cost_lo, cfg.cost_hi, seed)
                pivots, changes, t_par, t_karp = _mmc_trial(g, cfg.certify)
                rec = TrialRecord(n, m, seed, trial, changes, _max_degree(g), pivots, None, t_par, t_karp)
            else:
                seed, g = _balance_graph(cfg, n, m, trial)
                t0 = time.perf_counter_ns()
                res = min_balance(g)
                t_par = time.perf_counter_ns() - t0
                if max(res.path_changes) > n:
                    raise RuntimeError("a vertex changed path more than n times")
                rec = TrialRecord(n, m, seed, trial, sum(res.path_changes), _max_degree(g), res.pivots,
                                  res.contraction_count, t_par, None)
            records.append(rec)
            if progress is not None:
                progress(rec)
    return records


def degree_threshold(n: int, m: int) -> float:
    return 8 * m / n + 2 * math.log2(n)


def degree_check(n: int, m: int, samples: int, seed: int = 0) -> float:
    """Fraction of sampled random graphs whose max degree exceeds ``8m/n + 2 log2 n``."""
    if m > n * (n - 1):
        raise ValueError("m exceeds n(n-1)")
    rng = np.random.default_rng(seed)
    limit = degree_threshold(n, m)
    bad = 0
    for _ in range(samples):
        tails, heads = sample_arcs(rng, n, m)
        deg = np.bincount(tails, minlength=n) + np.bincount(heads, minlength=n)
        if deg.max(initial=0) > limit:
            bad += 1
    return bad / samples if samples else 0.0


def emit_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        w.writerow(["" if getattr(r, f) is None else getattr(r, f) for f in CSV_FIELDS])
    return buf.getvalue()


def parse_csv(text: str) -> list:
    """Inverse of :func:`emit_csv`; empty fields become ``None``."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_FIELDS:
        raise ValueError("unexpected CSV header")
    out = []
    for row in rows[1:]:
        vals = {f: (None if v == "" else int(v)) for f, v in zip(CSV_FIELDS, row)}
        out.append(TrialRecord(**vals))
    return out


def path_change_summary(records, warn: bool = True) -> dict:
    """Mean path changes per vertex for each ``n``; warns above the ``2 ln n`` guardrail."""
    by_n = {}
    for r in records:
        by_n.setdefault(r.n, []).append(r.path_changes / r.n)
    out = {}
    for n, vals in sorted(by_n.items()):
        mean = sum(vals) / len(vals)
        limit = 2 * math.log(n)
        out[n] = (mean, limit)
        if warn and mean > limit:
            warnings.warn(f"n={n}: mean path changes per vertex {mean:.3f} exceeds 2 ln n = {limit:.3f}")
    return out


def timing_summary(records) -> dict:
    """Mean parametric and Karp times per (n, m) point."""
    acc = {}
    for r in records:
        acc.setdefault((r.n, r.m), []).append(r)
    out = {}
    for key, rs in acc.items():
        tp = [r.time_parametric_ns for r in rs if r.time_parametric_ns is not None]
        tk = [r.time_karp_ns for r in rs if r.time_karp_ns is not None]
        out[key] = (sum(tp) / len(tp) if tp else None, sum(tk) / len(tk) if tk else None)
    return out
