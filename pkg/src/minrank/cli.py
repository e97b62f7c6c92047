"""Command-line frontend.

Subcommands: gen (graph files), solve (single-graph JSON report), demo
(encode/decode transcript with the error bound), netcode (network pipeline
listing or the unknown disclaimer), bench (experiment sweep to CSV).

Exit codes: 0 success, 1 usage error, 2 runtime error.  --graph, --network
and --spec accept either a filesystem path or the name of a bundled preset.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace
from importlib import resources
from pathlib import Path

import numpy as np

from .bench import ExperimentSpec, Method, _evaluate, dumps_csv, run_experiment
from .codec import decode_all, encode, error_bound, aggregate_error, make_index_code
from .graph import (
    dumps_graph,
    gen_directed_er,
    gen_directed_regular,
    gen_three_clique_coverable,
    gen_undirected_er,
    load_graph,
    undirected_subgraph,
)
from .netcode import (
    NetworkCode,
    Unknown,
    format_network_code,
    load_network,
    solve_network,
)
from .pattern import PatternMatrix
from .rankmin import SolverConfig, Variant, dump_matrix, solve

__all__ = ["main"]

_FAMILY_TOKENS = ("er-undirected", "er-directed", "regular", "three-clique")
_METHOD_TOKENS = {
    "ap-eig": Method.AP_EIG,
    "ap-svd": Method.AP_SVD,
    "dirap-eig": Method.DIRAP_EIG,
    "dirap-svd": Method.DIRAP_SVD,
    "altmin": Method.ALTMIN,
    "greedy-coloring": Method.GREEDY_COLORING,
    "ldg": Method.LDG,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # route argparse failures to exit code 1
        raise UsageError(message)


def _resolve(value: str, suffix: str) -> Path:
    """A real path wins; otherwise look for a bundled preset of that name."""
    p = Path(value)
    if p.is_file():
        return p
    base = resources.files("minrank") / "presets"
    for name in (value, f"{value}{suffix}"):
        candidate = base / name
        if candidate.is_file():
            return Path(str(candidate))
    raise FileNotFoundError(f"no such file or preset: {value}")


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    try:
        return SolverConfig(
            epsilon=args.epsilon,
            max_iters=args.max_iters,
            restarts=args.restarts,
            seed=args.seed,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None


def _add_solver_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--epsilon", type=float, default=0.001)
    sub.add_argument("--max-iters", type=int, default=10000)
    sub.add_argument("--restarts", type=int, default=3)


def _fmt_vec(v: np.ndarray) -> str:
    return "[" + ", ".join(f"{x:.6g}" for x in v) + "]"


def cmd_gen(args: argparse.Namespace) -> str:
    if args.family == "regular":
        if args.c is None:
            raise UsageError("--c is required for the regular family")
        param: float = args.c
    else:
        if args.p is None:
            raise UsageError("--p is required for this family")
        param = args.p
    try:
        if args.family == "er-undirected":
            g = gen_undirected_er(args.n, param, args.seed)
        elif args.family == "er-directed":
            g = gen_directed_er(args.n, param, args.seed)
        elif args.family == "regular":
            g = gen_directed_regular(args.n, int(param), args.seed)
        else:
            g = gen_three_clique_coverable(args.n, param, args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from None
    return dumps_graph(g)


def cmd_solve(args: argparse.Namespace) -> str:
    g = load_graph(_resolve(args.graph, ".graph"))
    method = _METHOD_TOKENS[args.method]
    cfg = _solver_config(args)
    measure = args.timing == "on"
    if method in (Method.GREEDY_COLORING, Method.LDG):
        if args.matrix_out:
            raise UsageError("--matrix-out needs a rank-minimization method")
        length, wall, iters, res = _evaluate(method, g, cfg, args.seed, measure)
    else:
        cfg = replace(cfg, variant=Variant[method.value])
        t0 = time.perf_counter()
        outcome = solve(g, cfg)
        wall = time.perf_counter() - t0 if measure else 0.0
        length, iters, res = outcome.r_star, outcome.iterations, outcome.residual
        if args.matrix_out:
            dump_matrix(outcome.m_star, args.matrix_out)
    report = {
        "graph": args.graph,
        "n": g.n,
        "method": method.value,
        "code_length": length,
        "r_star": length,
        "residual": res,
        "iterations": iters,
        "wall_time_s": wall,
        "epsilon": cfg.epsilon,
        "seed": args.seed,
    }
    if args.matrix_out:
        report["matrix_file"] = args.matrix_out
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def cmd_demo(args: argparse.Namespace) -> str:
    g = load_graph(_resolve(args.graph, ".graph"))
    method = _METHOD_TOKENS[args.method]
    if method in (Method.GREEDY_COLORING, Method.LDG):
        raise UsageError("demo needs a rank-minimization method")
    cfg = replace(_solver_config(args), variant=Variant[method.value])
    if args.x is not None:
        x = np.array([float(tok) for tok in args.x.split(",")])
        if x.size != g.n:
            raise UsageError(f"--x needs {g.n} comma-separated values")
        x_max = args.x_max if args.x_max is not None else float(np.abs(x).max())
    else:
        x_max = args.x_max if args.x_max is not None else 10.0
        x = np.random.default_rng(args.seed).uniform(-x_max, x_max, g.n)
    outcome = solve(g, cfg)
    src = undirected_subgraph(g) if cfg.variant.uses_eig else g
    code = make_index_code(outcome.m_star, outcome.r_star, PatternMatrix.from_graph(src), cfg.epsilon)
    y = encode(code.a, x)
    x_hat = decode_all(code, g, y, x)
    err = aggregate_error(x, x_hat)
    bound = error_bound(cfg.epsilon, x_max, g.n)
    lines = [
        f"graph: n={g.n} kind={g.kind.value} edges={len(g.edges)}",
        f"method: {method.value}  r_star={outcome.r_star}  "
        f"residual={outcome.residual:.6g}  iterations={outcome.iterations}",
        f"X     = {_fmt_vec(x)}",
        f"Y     = {_fmt_vec(y)}",
        f"X_hat = {_fmt_vec(x_hat)}",
        f"aggregate error = {err:.6g}",
        f"error bound     = {bound:.6g}",
    ]
    if err > bound:
        raise RuntimeError(
            f"decoding error {err:.6g} exceeds the bound {bound:.6g}; solver contract breach"
        )
    lines.append("PASS: error within bound")
    return "\n".join(lines) + "\n"


def cmd_netcode(args: argparse.Namespace) -> str:
    net = load_network(_resolve(args.network, ".net"))
    method = _METHOD_TOKENS[args.method]
    if method in (Method.GREEDY_COLORING, Method.LDG):
        raise UsageError("netcode needs a rank-minimization method")
    cfg = replace(_solver_config(args), variant=Variant[method.value])
    result = solve_network(net, cfg)
    if isinstance(result, Unknown):
        return "UNKNOWN\n" + result.message + "\n"
    assert isinstance(result, NetworkCode)
    listing = format_network_code(result)
    summary = (
        f"capacity sum = {net.capacity_sum}; rank achieved = {result.r_star}; "
        "verified on 100 random message vectors"
    )
    return listing + "\n" + summary + "\n"


def cmd_bench(args: argparse.Namespace) -> str:
    try:
        spec = ExperimentSpec.from_json(_resolve(args.spec, ".json").read_text(encoding="utf-8"))
        if args.trials is not None:
            spec = replace(spec, trials=args.trials)
        if args.seed is not None:
            spec = replace(spec, seed=args.seed)
    except (FileNotFoundError, ValueError, KeyError, TypeError) as e:
        raise UsageError(f"bad experiment spec: {e}") from None
    rows = run_experiment(spec, measure_time=args.timing == "on", threads=args.threads)
    return dumps_csv(rows)


def _parser() -> _Parser:
    parser = _Parser(prog="minrank", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    default_threads = int(os.environ.get("MINRANK_THREADS", "1"))

    gen = subs.add_parser("gen", help="generate a graph file")
    gen.add_argument("--family", choices=_FAMILY_TOKENS, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--p", type=float)
    gen.add_argument("--c", type=int)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_gen)

    solve_p = subs.add_parser("solve", help="solve one graph, report JSON")
    solve_p.add_argument("--graph", required=True)
    solve_p.add_argument("--method", choices=sorted(_METHOD_TOKENS), required=True)
    _add_solver_flags(solve_p)
    solve_p.add_argument("--seed", type=int, default=0)
    solve_p.add_argument("--timing", choices=("on", "off"), default="on")
    solve_p.add_argument("--matrix-out")
    solve_p.add_argument("--out")
    solve_p.set_defaults(func=cmd_solve)

    demo = subs.add_parser("demo", help="encode/decode walkthrough with the error bound")
    demo.add_argument("--graph", required=True)
    demo.add_argument("--method", choices=sorted(_METHOD_TOKENS), default="ap-svd")
    _add_solver_flags(demo)
    demo.add_argument("--seed", type=int, default=0)
    demo.add_argument("--x", help="comma-separated message values")
    demo.add_argument("--x-max", type=float)
    demo.add_argument("--out")
    demo.set_defaults(func=cmd_demo)

    netc = subs.add_parser("netcode", help="network coding pipeline")
    netc.add_argument("--network", required=True)
    netc.add_argument("--method", choices=sorted(_METHOD_TOKENS), default="ap-svd")
    _add_solver_flags(netc)
    netc.add_argument("--seed", type=int, default=0)
    netc.add_argument("--out")
    netc.set_defaults(func=cmd_netcode)

    bench = subs.add_parser("bench", help="run an experiment spec to CSV")
    bench.add_argument("--spec", required=True)
    bench.add_argument("--trials", type=int)
    bench.add_argument("--seed", type=int)
    bench.add_argument("--threads", type=int, default=default_threads)
    bench.add_argument("--timing", choices=("on", "off"), default="on")
    bench.add_argument("--out")
    bench.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:  # --help
        return int(e.code or 0)
    try:
        text = args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
