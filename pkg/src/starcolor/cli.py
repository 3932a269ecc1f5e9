"""Command-line front end.

JSON goes to standard output, human-readable notes to standard error.
Exit codes: 0 answered, 1 verification failure, 2 input error,
3 resource budget exceeded, 4 cross-check disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .crosscheck import run_crosscheck
from .cwdp import DEFAULT_MAX_STATES, EXTENDED, JOIN_CASE_RANGES, solve_cw
from .errors import (BudgetExceeded, ContractViolation, InternalConsistencyError, ParameterError, ParseError,
                     StarColorError)
from .generate import cluster_plus_cover, gnp, random_nice_expression
from .graph import Coloring, Graph, is_star_coloring, parse_dimacs, same_type, to_dimacs
from .ilp import DEFAULT_NODE_BUDGET, SolveStats
from .nd import compute_type_partition, solve_nd
from .oracle import oracle_feasible
from .twincover import TcStats, compute_twin_cover, is_twin_cover, solve_tc
from .wexpr import check_nice, drop_redundant_joins, evaluate, parse_wexpr_with_width, to_file_text

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_DISAGREE = 4

METHODS = ("auto", "brute", "nd", "twincover", "cliquewidth")


class InputError(StarColorError):
    """Unusable command-line input."""


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=1, sort_keys=True))


def _read_graph(path: str) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_dimacs(text)


def _seed(value: str) -> int:
    seed = int(value)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits (0 <= seed < 2^64)")
    return seed


def _vertex_list(value: str) -> list[int]:
    try:
        return [int(x) for x in value.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected comma-separated vertex ids") from exc


# -- solve --------------------------------------------------------------------

def _load_expression(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    expr, w = parse_wexpr_with_width(text)
    return expr, w


def cmd_solve(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    if args.k < 0:
        raise InputError("--k must be nonnegative")
    expr = None
    declared_w = None
    if args.cw_expr:
        expr, declared_w = _load_expression(args.cw_expr)
    if args.input:
        g = _read_graph(args.input)
    elif expr is not None:
        g, mapping = evaluate(expr).to_graph()
        if any(old != new for old, new in mapping.items()):
            raise InputError("expression vertex ids must be 1..n when no --input graph is given")
    else:
        raise InputError("solve needs --input or --cw-expr")

    report: dict = {"n": g.n, "m": g.m, "k": args.k, "parameters": {}, "counters": {}, "flags": []}
    method = args.method
    params = report["parameters"]
    if method == "auto":
        if g.n <= args.brute_max_n:
            method = "brute"
        else:
            t = compute_type_partition(g).t
            params["nd"] = t
            if t <= args.nd_max_t:
                method = "nd"
            else:
                cover = compute_twin_cover(g, args.tc_max)
                params["twin_cover"] = None if cover is None else cover.t
                if cover is not None:
                    method = "twincover"
                elif expr is not None:
                    method = "cliquewidth"
                else:
                    raise ParameterError(
                        f"no method applies: n={g.n} > {args.brute_max_n}, nd={t} > {args.nd_max_t}, "
                        f"twin cover > {args.tc_max}, and no --cw-expr given")
    report["method"] = method

    coloring: Coloring | None
    if method == "brute":
        res = oracle_feasible(g, args.k)
        coloring = res.coloring if res.feasible else None
        report["counters"]["oracle_states"] = res.states_explored
    elif method == "nd":
        stats = SolveStats()
        params["nd"] = compute_type_partition(g).t
        coloring = solve_nd(g, args.k, max_nodes=args.max_nodes, stats=stats, dump_ilp=args.dump_ilp)
        report["counters"]["ilp_nodes"] = stats.nodes
    elif method == "twincover":
        tstats = TcStats()
        coloring = solve_tc(g, args.k, args.tc_max, X=args.twin_cover, stats=tstats)
        params["twin_cover"] = len(tstats.twin_cover)
        params["twin_cover_set"] = list(tstats.twin_cover)
        report["counters"].update(x_colorings=tstats.x_colorings, guesses=tstats.guesses,
                                  residual_checks=tstats.residual_checks)
    else:
        if expr is None:
            raise InputError("method cliquewidth requires --cw-expr")
        lg = evaluate(expr)
        eg, mapping = lg.to_graph()
        if any(old != new for old, new in mapping.items()) or eg != g:
            raise InputError("the expression does not define the input graph on vertices 1..n")
        if check_nice(expr) is not None:
            cleaned = drop_redundant_joins(expr)
            if cleaned is not expr:
                report["flags"].append("redundant-joins-dropped")
            expr = cleaned
        violation = check_nice(expr)
        if violation is not None:
            raise ParameterError(f"expression is not nice: {violation}")
        res = solve_cw(expr, args.k, witness=args.witness, join_case_range=args.join_case_range,
                       max_states=args.max_states, dump_tables=args.dump_tables, w=declared_w)
        params["expression_width"] = res.width
        report["counters"].update(dp_nodes=res.stats.nodes, dp_max_table=res.stats.max_table,
                                  dp_total_states=res.stats.total_states)
        if args.join_case_range != EXTENDED:
            report["flags"].append(f"join-case-range-{args.join_case_range}")
        coloring = res.coloring
        if res.feasible and coloring is None:
            report["flags"].append("feasible-without-witness")
            report["feasible"] = True
    if "feasible" not in report:
        report["feasible"] = coloring is not None
    if coloring is not None:
        verdict = is_star_coloring(g, coloring)
        if not verdict.ok:
            raise InternalConsistencyError(f"witness fails verification: {verdict.witness}")
        report["coloring"] = {str(v): c for v, c in sorted(coloring.colors.items())}
        if args.output:
            Path(args.output).write_text(coloring.to_json() + "\n")
    else:
        report["coloring"] = None
    report["timings"] = {"total_seconds": round(time.perf_counter() - start, 6)}
    _note(f"{method}: {'feasible' if report['feasible'] else 'infeasible'} with k={args.k}")
    _emit(report)
    return EXIT_OK


# -- verify -------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    try:
        c = Coloring.from_json(Path(args.coloring).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {args.coloring}: {exc.strerror}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad coloring file: {exc}") from exc
    if any(v > g.n for v in c.colors):
        raise InputError("coloring names a vertex outside the graph")
    if not c.is_total(g):
        raise InputError("verify needs a total coloring")
    verdict = is_star_coloring(g, c)
    _emit(verdict.to_dict())
    _note("star coloring" if verdict.ok else f"not a star coloring: {verdict.kind} {list(verdict.witness)}")
    return EXIT_OK if verdict.ok else EXIT_VERIFY


# -- params -------------------------------------------------------------------

def cmd_params(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    p = compute_type_partition(g)
    # re-validate the type certificate
    for members in p.types:
        if any(not same_type(g, members[0], v) for v in members[1:]):
            raise InternalConsistencyError("type certificate failed re-validation")
    cover = compute_twin_cover(g, min(args.t_max, g.n))
    if cover is not None and not is_twin_cover(g, cover.X):
        raise InternalConsistencyError("twin cover certificate failed re-validation")
    _emit({
        "n": g.n, "m": g.m,
        "nd": p.t,
        "types": [{"vertices": list(m), "kind": kind} for m, kind in zip(p.types, p.kinds)],
        "twin_cover": None if cover is None else cover.t,
        "twin_cover_set": None if cover is None else list(cover.X),
        "twin_cover_search_limit": min(args.t_max, g.n),
    })
    _note(f"nd={p.t}, twin cover={'> ' + str(args.t_max) if cover is None else cover.t}")
    return EXIT_OK


# -- gen ----------------------------------------------------------------------

def cmd_gen(args: argparse.Namespace) -> int:
    if args.n is not None and args.n < 0:
        raise InputError("--n must be nonnegative")
    if args.model == "gnp":
        g = gnp(args.n if args.n is not None else 10, args.p, args.seed)
        files = {"graph": to_dimacs(g, f"gnp n={g.n} p={args.p} seed={args.seed}")}
    elif args.model == "cluster-plus-cover":
        g = cluster_plus_cover(args.t, args.cliques, args.max_clique, args.seed)
        files = {"graph": to_dimacs(g, f"cluster-plus-cover t={args.t} seed={args.seed}")}
    else:
        n = args.n if args.n is not None else 8
        expr = random_nice_expression(args.w, n, args.seed)
        if check_nice(expr) is not None:
            raise InternalConsistencyError("generator produced a non-nice expression")
        g, _ = evaluate(expr).to_graph()
        files = {"graph": to_dimacs(g, f"expression w={args.w} n={n} seed={args.seed}"),
                 "expression": to_file_text(expr, args.w)}
    written = {}
    if args.output:
        Path(args.output).write_text(files["graph"])
        written["graph"] = args.output
        if "expression" in files:
            target = args.expr_output or str(Path(args.output).with_suffix(".cwx"))
            Path(target).write_text(files["expression"])
            written["expression"] = target
    elif args.expr_output and "expression" in files:
        Path(args.expr_output).write_text(files["expression"])
        written["expression"] = args.expr_output
    _emit({"model": args.model, "seed": args.seed, "n": g.n, "m": g.m, "written": written,
           **({} if args.output else {"graph": files["graph"]}),
           **({"expression": files["expression"]} if "expression" in files and "expression" not in written else {})})
    return EXIT_OK


# -- crosscheck ---------------------------------------------------------------

def cmd_crosscheck(args: argparse.Namespace) -> int:
    report = run_crosscheck(args.n_max, args.k_max, args.trials, args.seed, reproducer_dir=args.reproducers)
    _emit(report.to_dict(with_timings=not args.no_timings))
    if report.ok:
        _note(f"all agree ({sum(report.counts.values())} comparisons)")
        return EXIT_OK
    _note(f"{len(report.disagreements)} disagreement(s)")
    return EXIT_DISAGREE


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="starcolor", description="Exact star coloring toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide star k-colorability and print a verified witness")
    s.add_argument("--input", help="DIMACS .col graph")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--method", choices=METHODS, default="auto")
    s.add_argument("--cw-expr", help="w-expression file for the cliquewidth method")
    s.add_argument("--twin-cover", type=_vertex_list, help="comma-separated twin cover to use")
    s.add_argument("--output", help="write the witness coloring JSON here")
    s.add_argument("--seed", type=_seed, default=0, help="accepted for uniformity; solving is deterministic")
    s.add_argument("--dump-ilp", help="write the type ILP as JSON (nd method)")
    s.add_argument("--dump-tables", help="directory for per-node DP tables (cliquewidth method)")
    s.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    s.add_argument("--max-nodes", type=int, default=DEFAULT_NODE_BUDGET)
    s.add_argument("--join-case-range", choices=JOIN_CASE_RANGES, default=EXTENDED)
    s.add_argument("--witness", action="store_true",
                   help="keep DP provenance and rebuild a verified coloring (cliquewidth method)")
    s.add_argument("--brute-max-n", type=int, default=10)
    s.add_argument("--nd-max-t", type=int, default=4)
    s.add_argument("--tc-max", type=int, default=3)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a coloring file against a graph")
    v.add_argument("--input", required=True)
    v.add_argument("--coloring", required=True)
    v.set_defaults(func=cmd_verify)

    p = sub.add_parser("params", help="neighborhood diversity and minimum twin cover")
    p.add_argument("--input", required=True)
    p.add_argument("--t-max", type=int, default=10, help="largest twin cover size searched")
    p.set_defaults(func=cmd_params)

    gsub = sub.add_parser("gen", help="generate a seeded random instance")
    gsub.add_argument("--model", choices=("gnp", "cluster-plus-cover", "expression"), required=True)
    gsub.add_argument("--n", type=int)
    gsub.add_argument("--p", type=float, default=0.5)
    gsub.add_argument("--t", type=int, default=3)
    gsub.add_argument("--cliques", type=int, default=4)
    gsub.add_argument("--max-clique", type=int, default=3)
    gsub.add_argument("--w", type=int, default=3)
    gsub.add_argument("--seed", type=_seed, default=0)
    gsub.add_argument("--output", help="graph file; defaults to JSON on stdout")
    gsub.add_argument("--expr-output", help="expression file (expression model)")
    gsub.set_defaults(func=cmd_gen)

    c = sub.add_parser("crosscheck", help="compare every solver with the oracle")
    c.add_argument("--n-max", type=int, default=7)
    c.add_argument("--k-max", type=int, default=4)
    c.add_argument("--trials", type=int, default=200)
    c.add_argument("--seed", type=_seed, default=0)
    c.add_argument("--reproducers", help="directory for reproducer files")
    c.add_argument("--no-timings", action="store_true", help="omit timings for byte-stable output")
    c.set_defaults(func=cmd_crosscheck)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ParseError, InputError, ParameterError, ContractViolation, ValueError) as exc:
        _note(f"error: {exc}")
        _emit({"error": str(exc), "kind": type(exc).__name__})
        return EXIT_INPUT
    except BudgetExceeded as exc:
        _note(f"budget exceeded: {exc}")
        _emit({"error": str(exc), "kind": "BudgetExceeded"})
        return EXIT_BUDGET
    except InternalConsistencyError as exc:
        _note(f"verification failure: {exc}")
        _emit({"error": str(exc), "kind": "InternalConsistencyError"})
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
