"""Command-line driver: ``absplan {plan,validate,reach,check}``.

Exit codes: 0 solved / valid / reachability decided / ok, 1 unsolvable or
invalid plan, 2 usage or parse errors, 3 a node/layer cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .absdom import WideningStrategy, default_thresholds
from .concrete import UnknownActionError, validate_plan
from .frontend import ParseError, parse_problem
from .heur import LayerCapExceeded, prove_unreachable
from .model import Problem
from .search import ALGORITHMS, HEURISTICS, SearchParams, plan_search
from .stochastic import ProbProblem, determinize_all_outcomes

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


def parse_widening(text: str, problem: Problem) -> WideningStrategy:
    """``join`` | ``delayed:K`` | ``thresholds`` | ``delayed-thresholds:K``."""
    kind, _, arg = text.partition(":")
    if kind == "join" and not arg:
        return WideningStrategy.join()
    if kind == "thresholds" and not arg:
        return WideningStrategy.with_thresholds(default_thresholds(problem))
    if kind in ("delayed", "delayed-thresholds") and arg.isdigit():
        if kind == "delayed":
            return WideningStrategy.delayed(int(arg))
        return WideningStrategy.delayed_thresholds(int(arg), default_thresholds(problem))
    raise ValueError(f"bad --widening value {text!r}")


def read_plan_file(text: str) -> list[str]:
    plan = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            plan.append(line)
    return plan


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="absplan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def files(p):
        p.add_argument("--domain", required=True, help="domain file")
        p.add_argument("--problem", required=True, help="problem file")

    def widening(p):
        p.add_argument("--widening", default="delayed-thresholds:2",
                       help="join | delayed:K | thresholds | delayed-thresholds:K")
        p.add_argument("--max-layers", type=int, default=1000)

    p = sub.add_parser("plan", help="search for a plan")
    files(p)
    widening(p)
    p.add_argument("--search", choices=ALGORITHMS, default="astar")
    p.add_argument("--heuristic", choices=HEURISTICS, default="hmax-widen")
    p.add_argument("--node-cap", type=int, default=1_000_000)
    p.add_argument("--stats-json", metavar="PATH", help="write run statistics as JSON ('-' = stdout)")
    p.add_argument("--trace", metavar="PATH", help="dump the reachability trace from the initial state")

    p = sub.add_parser("validate", help="check a plan file against a problem")
    files(p)
    p.add_argument("--plan", required=True, help="plan file: one action per line, '#' comments")

    p = sub.add_parser("reach", help="widening reachability analysis of the goal")
    files(p)
    widening(p)
    p.add_argument("--trace", metavar="PATH", help="dump the reachability trace")

    p = sub.add_parser("check", help="parse and typecheck only")
    files(p)
    return parser


def _load(args) -> Problem:
    domain = Path(args.domain)
    problem = Path(args.problem)
    return parse_problem(domain.read_bytes(), problem.read_bytes(), str(domain), str(problem))


def _write_json(path: str, payload: dict) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _cmd_plan(args, problem: Problem) -> int:
    strategy = parse_widening(args.widening, problem)
    params = SearchParams(args.search, args.heuristic, args.node_cap, strategy, args.max_layers)
    if args.trace:
        Path(args.trace).write_text(prove_unreachable(problem, strategy, args.max_layers).trace.dump())
    result = plan_search(problem, params)
    # keep stdout clean for JSON when it goes there
    human = sys.stderr if args.stats_json == "-" else sys.stdout
    if result.status == "solved":
        print(f"solved: cost {result.cost}", file=human)
        for step, name in enumerate(result.plan):
            print(f"{step}: {name}", file=human)
    elif result.status == "unsolvable":
        print("unsolvable", file=human)
    else:
        print(f"node cap exceeded ({args.node_cap} generated)", file=sys.stderr)
    if args.stats_json:
        s = result.stats
        _write_json(args.stats_json, {
            "schema_version": SCHEMA_VERSION,
            "status": result.status,
            "plan": result.plan,
            "cost": result.cost,
            "nodes_expanded": s.nodes_expanded,
            "nodes_generated": s.nodes_generated,
            "heuristic_evals": s.heuristic_evals,
            "peak_open_size": s.peak_open_size,
            "wall_time_ms": round(s.wall_time_ms, 3),
            "heuristic": args.heuristic,
            "search": args.search,
            "widening": str(strategy),
        })
    return {"solved": EXIT_OK, "unsolvable": EXIT_FAIL}.get(result.status, EXIT_CAP)


def _cmd_validate(args, problem: Problem) -> int:
    plan = read_plan_file(Path(args.plan).read_text())
    try:
        result = validate_plan(problem, plan)
    except UnknownActionError as err:
        print(f"error: {err.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    if result.valid:
        print(f"plan valid: cost {result.cost}")
        return EXIT_OK
    if result.failure_index == "goal":
        print("plan invalid: goal not satisfied after the last step")
    else:
        i = result.failure_index
        print(f"plan invalid: failure at step {i} ({plan[i]} is not applicable)")
    return EXIT_FAIL


def _cmd_reach(args, problem: Problem) -> int:
    strategy = parse_widening(args.widening, problem)
    result = prove_unreachable(problem, strategy, args.max_layers)
    if args.trace:
        Path(args.trace).write_text(result.trace.dump())
    if result.unreachable:
        print(f"goal unreachable (fixpoint at layer {result.trace.fixpoint_layer})")
    else:
        print(f"goal possibly reachable (first possible at layer {result.value})")
    return EXIT_OK


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        problem = _load(args)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as err:
        for d in err.diagnostics:
            print(str(d), file=sys.stderr)
        return EXIT_USAGE
    if args.command == "check":
        print(f"ok: {len(problem.variables)} variables, {len(problem.constants)} constants, "
              f"{len(problem.actions)} actions, {len(problem.predicate_pool)} predicates")
        return EXIT_OK
    if isinstance(problem, ProbProblem):
        problem = determinize_all_outcomes(problem)
    try:
        if args.command == "plan":
            return _cmd_plan(args, problem)
        if args.command == "validate":
            return _cmd_validate(args, problem)
        return _cmd_reach(args, problem)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except LayerCapExceeded as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CAP


def main() -> None:
    sys.exit(run())


