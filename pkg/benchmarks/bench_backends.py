"""Compare the numba kernels with the pure Python/numpy fallback.

Each backend runs in its own interpreter (the backend is fixed at import
time by PSPATH_DISABLE_NUMBA), on the same seeded graphs.  Results must
agree exactly; the table reports mean wall time per call.

    python3 benchmarks/bench_backends.py --points 100:1000,200:2000 --trials 5
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
from pspath import _accel
from pspath.bench import parse_points, trial_seed, _warm_up
from pspath.cycles import min_mean_cycle_karp, min_mean_cycle_parametric
from pspath.graph import random_graph
from pspath.rational import format_rational

points, trials, seed = parse_points(sys.argv[1]), int(sys.argv[2]), int(sys.argv[3])
_warm_up()
rows = []
for n, m in points:
    tp = tk = 0
    answers = []
    for t in range(trials):
        g = random_graph(n, m, seed=trial_seed(seed, n, m, t))
        t0 = time.perf_counter_ns()
        r = min_mean_cycle_parametric(g)
        t1 = time.perf_counter_ns()
        k = min_mean_cycle_karp(g)
        t2 = time.perf_counter_ns()
        tp += t1 - t0
        tk += t2 - t1
        answers.append([format_rational(r.mean) if r else "inf", r.pivots if r else 0,
                        format_rational(k) if k is not None else "inf"])
    rows.append({"n": n, "m": m, "parametric_ms": tp / trials / 1e6, "karp_ms": tk / trials / 1e6,
                 "answers": answers})
print(json.dumps({"backend": _accel.backend_name(), "rows": rows}))
"""


def run_backend(disable, points, trials, seed):
    env = dict(os.environ)
    if disable:
        env["PSPATH_DISABLE_NUMBA"] = "1"
    else:
        env.pop("PSPATH_DISABLE_NUMBA", None)
    proc = subprocess.run([sys.executable, "-c", WORKER, points, str(trials), str(seed)], env=env,
                          capture_output=True, text=True)
    if proc.returncode != 0:
        sys.exit(proc.stderr)
    return json.loads(proc.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", default="50:500,100:1000,200:2000")
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    fast = run_backend(False, args.points, args.trials, args.seed)
    slow = run_backend(True, args.points, args.trials, args.seed)

    print(f"{'n':>6} {'m':>7}  {'parametric ms':>26}  {'karp ms':>26}")
    print(f"{'':>6} {'':>7}  {fast['backend']:>8} {slow['backend']:>8} {'speedup':>8}  "
          f"{fast['backend']:>8} {slow['backend']:>8} {'speedup':>8}")
    mismatches = 0
    for a, b in zip(fast["rows"], slow["rows"]):
        mismatches += a["answers"] != b["answers"]
        print(f"{a['n']:>6} {a['m']:>7}  {a['parametric_ms']:8.2f} {b['parametric_ms']:8.2f} "
              f"{b['parametric_ms'] / a['parametric_ms']:7.1f}x  {a['karp_ms']:8.2f} {b['karp_ms']:8.2f} "
              f"{b['karp_ms'] / a['karp_ms']:7.1f}x")
    print(f"answers identical across backends: {'yes' if not mismatches else 'NO'}"
          f"  ({time.perf_counter() - t0:.1f}s total)")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
