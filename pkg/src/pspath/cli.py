"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 certification or
balance-check failure.  Vertex and edge ids are 1-based on output, edges
numbered in file order.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, _accel
from .balance import NotStronglyConnectedError, check_balanced, min_balance
from .bench import (BenchConfig, CertificationError, emit_csv, parse_points, path_change_summary,
                    run_trials, timing_summary)
from .cycles import _cycle_graph, _star_tree, add_artificial_source, min_cycle
from .graph import Graph, GraphFormatError, parse_graph, random_graph, serialize_graph
from .oracle import certify_solution
from .parametric import UnreachableError, solve
from .rational import format_rational, is_finite

EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_graph(path: str) -> Graph:
    try:
        if path == "-":
            return parse_graph(sys.stdin.read())
        with open(path, "rb") as fh:
            return parse_graph(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except GraphFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _edge_list(edges) -> str:
    return " ".join(str(e + 1) for e in edges)


def _cmd_gen(args, out):
    g = random_graph(args.n, args.m, args.cost_lo, args.cost_hi, args.seed)
    text = serialize_graph(g)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _cmd_parametric(args, out):
    g = _read_graph(args.file)
    m0 = g.m
    if g.source is None:
        out.write(f"c no source line: using an artificial source {g.n + 1}\n")
        g = add_artificial_source(g)
        sol = solve(g, dedup=args.dedup, tree=_star_tree(g, g.n - 1))
    else:
        sol = solve(g, dedup=args.dedup)
    for i, lam in enumerate(sol.breakpoints, start=1):
        out.write(f"{i} {format_rational(lam)}\n")
    if args.dump_log:
        for v, entries in enumerate(sol.parent_log):
            for lam, e in entries:
                edge = "-" if e is None or e >= m0 else str(e + 1)
                out.write(f"v {v + 1} {format_rational(lam)} {edge}\n")
    if sol.terminal_cycle is not None:
        out.write(f"cycle {_edge_list(sol.terminal_cycle)}\n")
    elif sol.minus_inf_cycle is not None:
        out.write(f"cycle {_edge_list(sol.minus_inf_cycle)}\n")
    out.write(f"lambda_star {format_rational(sol.lambda_star)}\n")
    if args.certify:
        rep = certify_solution(g, sol)
        print(rep.summary(), file=sys.stderr)
        if not rep.ok:
            return EXIT_CHECK
    return EXIT_OK


def _cmd_mmc(args, out):
    g = _read_graph(args.file)
    try:
        res = min_cycle(g, algo=args.algo, ratio=args.ratio, scc=args.scc)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if res is None:
        out.write("lambda_star inf\n")
    else:
        out.write(f"lambda_star {format_rational(res.mean)}\n")
        if res.cycle is not None:
            out.write(f"cycle {_edge_list(res.cycle)}\n")
    if args.certify:
        h = _cycle_graph(g, keep_weights=args.ratio)
        aug = add_artificial_source(h)
        sol = solve(aug, tree=_star_tree(aug, g.n))
        rep = certify_solution(aug, sol)
        expected = sol.lambda_star if is_finite(sol.lambda_star) else None
        got = None if res is None else res.mean
        rep.add("reported lambda* matches certified sweep", expected == got)
        print(rep.summary(), file=sys.stderr)
        if not rep.ok:
            return EXIT_CHECK
    return EXIT_OK


def _cmd_balance(args, out):
    g = _read_graph(args.file)
    if args.check and g.n > 20:
        raise UsageError("--check enumerates all subsets and is limited to n <= 20")
    try:
        res = min_balance(g)
    except NotStronglyConnectedError as exc:
        raise UsageError(f"graph is not strongly connected: {exc}") from None
    for v, val in enumerate(res.potential):
        out.write(f"pi {v + 1} {format_rational(val)}\n")
    out.write(f"contractions {res.contraction_count}\n")
    for lam, cyc in res.contraction_trace:
        out.write(f"cycle {format_rational(lam)} {_edge_list(cyc)}\n")
    if args.check:
        verdict = check_balanced(g, res.potential)
        if not verdict:
            subset = " ".join(str(v + 1) for v in verdict.subset)
            print(f"unbalanced subset {{{subset}}}: min in {format_rational(verdict.min_in)}, "
                  f"min out {format_rational(verdict.min_out)}", file=sys.stderr)
            return EXIT_CHECK
        print("balanced: every proper subset checked", file=sys.stderr)
    return EXIT_OK


def _cmd_bench(args, out):
    try:
        points = parse_points(args.points)
    except ValueError as exc:
        raise UsageError(f"bad --points: {exc}") from None
    cfg = BenchConfig(points, trials=args.trials, seed=args.seed, cost_lo=args.cost_lo,
                      cost_hi=args.cost_hi, mode=args.mode, certify=args.certify)
    print(f"c backend {_accel.backend_name()}; costs uniform integers in [{cfg.cost_lo}, {cfg.cost_hi}] "
          f"(assumed distribution)", file=sys.stderr)
    try:
        records = run_trials(cfg)
    except CertificationError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    text = emit_csv(records)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    for n, (mean, limit) in path_change_summary(records, warn=False).items():
        flag = "" if mean <= limit else "  WARNING: above 2 ln n"
        print(f"c n={n}: path changes per vertex {mean:.3f} (guardrail {limit:.3f}){flag}", file=sys.stderr)
    if cfg.mode == "mmc":
        for (n, m), (tp, tk) in timing_summary(records).items():
            print(f"c n={n} m={m}: mean time parametric/karp = {tp / tk:.3f}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pspath", description="Parametric shortest paths, minimum mean cycles and minimum balancing.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a uniform random graph")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--cost-lo", type=int, default=1)
    g.add_argument("--cost-hi", type=int, default=10**6)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=_cmd_gen)

    q = sub.add_parser("parametric", help="breakpoints of the parametric shortest path problem")
    q.add_argument("file")
    q.add_argument("--certify", action="store_true", help="check every interval against Bellman-Ford")
    q.add_argument("--dump-log", action="store_true", help="print the per-vertex parent change log")
    q.add_argument("--dedup", action="store_true", help="drop repeated breakpoints")
    q.set_defaults(func=_cmd_parametric)

    c = sub.add_parser("mmc", help="minimum mean (or ratio) cycle")
    c.add_argument("file")
    c.add_argument("--algo", choices=["parametric", "karp", "brute"], default="parametric")
    c.add_argument("--ratio", action="store_true", help="minimize cost/weight instead of the mean")
    c.add_argument("--scc", action="store_true", help="solve each strongly connected component separately")
    c.add_argument("--certify", action="store_true")
    c.set_defaults(func=_cmd_mmc)

    b = sub.add_parser("balance", help="minimum-balancing potential")
    b.add_argument("file")
    b.add_argument("--check", action="store_true", help="verify every proper subset (n <= 20)")
    b.set_defaults(func=_cmd_balance)

    r = sub.add_parser("bench", help="random-graph experiments, CSV output")
    r.add_argument("--mode", choices=["mmc", "balance"], default="mmc")
    r.add_argument("--points", required=True, help='comma-separated "n:m" pairs')
    r.add_argument("--trials", type=int, default=None, help="trials per point (default max(n/2, 50))")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--cost-lo", type=int, default=1)
    r.add_argument("--cost-hi", type=int, default=10**6)
    r.add_argument("--certify", action="store_true")
    r.add_argument("-o", "--output")
    r.set_defaults(func=_cmd_bench)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, UnreachableError, ValueError) as exc:
        print(f"pspath: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_entry():
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
