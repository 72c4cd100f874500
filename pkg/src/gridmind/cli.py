"""Command-line harness.

Subcommands: learn, show, recognize, explain, solve, graph. All output is
line-oriented and deterministic. Exit codes: 0 success, 1 no solution /
no explanation, 2 input or parse error.
"""

from __future__ import annotations

import argparse
import sys

from .graph import ConceptGraph, GraphError
from .grid import Grid, GridError
from .interpretation import explain
from .learning import Learner, LearningError
from .solver import (
    Environment,
    InvalidEnvError,
    NoSolution,
    StateSpace,
    TraceRecorder,
    enumerate_solutions,
    solve,
    solve_with_constraints,
)

EXIT_OK = 0
EXIT_NO_RESULT = 1
EXIT_INPUT_ERROR = 2


class _CliInputError(Exception):
    pass


def _load_graph(path) -> ConceptGraph:
    if path is None:
        return ConceptGraph()
    try:
        return ConceptGraph.import_file(path)
    except FileNotFoundError:
        return ConceptGraph()
    except GraphError as exc:
        raise _CliInputError(f"graph file {path}: {exc}") from exc


def _load_pattern(path) -> Grid:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return Grid.from_text(fh.read())
    except OSError as exc:
        raise _CliInputError(f"cannot read {path}: {exc}") from exc
    except GridError as exc:
        raise _CliInputError(f"pattern file {path}: {exc}") from exc


def _cmd_learn(args) -> int:
    grid = _load_pattern(args.pattern)
    graph = _load_graph(args.graph)
    learner = Learner(graph)
    try:
        report = learner.observe(grid)
    except LearningError as exc:
        raise _CliInputError(str(exc)) from exc
    print(f"ROOT {report.root}")
    print(f"CREATED {report.nodes_created}")
    print(f"REUSED {report.nodes_reused}")
    if args.graph is not None:
        graph.export_file(args.graph)
    return EXIT_OK


def _cmd_show(args) -> int:
    graph = _load_graph(args.graph)
    learner = Learner(graph)
    try:
        grid = learner.reconstruct(args.node)
    except (GraphError, LearningError) as exc:
        raise _CliInputError(str(exc)) from exc
    sys.stdout.write(grid.to_text())
    return EXIT_OK


def _cmd_recognize(args) -> int:
    grid = _load_pattern(args.pattern)
    learner = Learner(_load_graph(args.graph))
    matches = learner.recognize(grid)
    for m in matches:
        print(f"MATCH {m.concept} {m.score} {m.anchor[0]},{m.anchor[1]}")
    if not matches:
        print("NO MATCHES")
    return EXIT_OK


def _fmt_ids(ids) -> str:
    return ",".join(str(i) for i in sorted(ids)) or "-"


def _cmd_explain(args) -> int:
    grid = _load_pattern(args.pattern)
    learner = Learner(_load_graph(args.graph))
    explanations = explain(learner, grid)
    regular = [e for e in explanations if not e.novel]
    for e in regular:
        print(
            f"EXPLANATION chosen={_fmt_ids(e.chosen)}"
            f" covered={_fmt_ids(e.covered)}"
            f" suppressed={_fmt_ids(e.suppressed)}"
        )
    for e in explanations:
        if e.novel:
            print(f"NOVEL {_fmt_ids(e.residue)}")
    if not regular or all(not e.chosen and not e.covered for e in regular):
        if not grid.is_empty():
            return EXIT_NO_RESULT
    return EXIT_OK


def _parse_cell(text: str) -> tuple[int, int]:
    try:
        x, y = text.split(",")
        return int(x), int(y)
    except ValueError:
        raise _CliInputError(f"bad cell {text!r}, expected x,y") from None


def _cmd_solve(args) -> int:
    try:
        with open(args.env, "r", encoding="utf-8") as fh:
            env = Environment.from_text(fh.read())
        space = StateSpace(env)
    except OSError as exc:
        raise _CliInputError(f"cannot read {args.env}: {exc}") from exc
    except InvalidEnvError as exc:
        raise _CliInputError(str(exc)) from exc
    trace = TraceRecorder()
    forbidden = {_parse_cell(c) for c in args.forbid or ()}
    code = EXIT_OK
    if args.enumerate is not None:
        limit = None if args.enumerate == 0 else args.enumerate
        solutions = enumerate_solutions(space, limit, trace)
        for sol in solutions:
            print(f"SOLUTION {len(sol.moves)} moves: {' '.join(sol.moves)}")
        print(f"TOTAL {len(solutions)}")
        if not solutions:
            code = EXIT_NO_RESULT
    else:
        if forbidden:
            result = solve_with_constraints(space, forbidden, trace)
        else:
            result = solve(space, trace=trace)
        if isinstance(result, NoSolution):
            print("NO SOLUTION")
            code = EXIT_NO_RESULT
        else:
            print(f"SOLUTION {len(result.moves)} moves: {' '.join(result.moves)}")
    if args.trace is not None:
        trace.write(args.trace)
    return code


def _cmd_graph(args) -> int:
    try:
        graph = ConceptGraph.import_file(args.source)
    except OSError as exc:
        raise _CliInputError(f"cannot read {args.source}: {exc}") from exc
    except GraphError as exc:
        raise _CliInputError(str(exc)) from exc
    if args.action == "export":
        if args.dest is None:
            raise _CliInputError("graph export needs a destination file")
        graph.export_file(args.dest)
        print(f"EXPORTED {len(graph)} nodes")
    else:
        print(f"IMPORTED {len(graph)} nodes")
        print(f"MUTEX {len(graph.mutex)}")
        print(f"EXCITATORY {len(graph.excitatory)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridmind", description="concept-graph reasoning engine"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="observe a pattern file")
    p.add_argument("pattern")
    p.add_argument("--graph", default=None)
    p.set_defaults(func=_cmd_learn)

    p = sub.add_parser("show", help="reconstruct a node as a pattern grid")
    p.add_argument("node", type=int)
    p.add_argument("--graph", required=True)
    p.set_defaults(func=_cmd_show)

    p = sub.add_parser("recognize", help="match a pattern against known concepts")
    p.add_argument("pattern")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=_cmd_recognize)

    p = sub.add_parser("explain", help="search alternative explanations of a pattern")
    p.add_argument("pattern")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=_cmd_explain)

    p = sub.add_parser("solve", help="solve a maze or push-puzzle environment")
    p.add_argument("env")
    p.add_argument(
        "--enumerate",
        nargs="?",
        const=0,
        type=int,
        default=None,
        metavar="N",
        help="enumerate solutions (all, or at most N)",
    )
    p.add_argument("--forbid", action="append", metavar="x,y")
    p.add_argument("--trace", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("graph", help="validate or re-encode a graph file")
    p.add_argument("action", choices=["export", "import"])
    p.add_argument("source")
    p.add_argument("dest", nargs="?", default=None)
    p.set_defaults(func=_cmd_graph)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
