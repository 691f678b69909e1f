"""Command line entry point: maze-mentor <subcommand>."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analyze import analyze, report_to_markdown, write_report
from .blocks import ParseError, parse_program
from .catalog import CatalogError, bundled_catalog, load_task_catalog, validate_program
from .grid import execute
from .hints import recommend, render_recommendation
from .quizzes import QuizError, build_code_quiz
from .simulate import dataset_from_logs, load_config, simulate_study
from .tree_metrics import ted


def _catalog(args) -> object:
    if getattr(args, "catalog", None):
        return load_task_catalog(args.catalog)
    return bundled_catalog()


def _read_program(path: str):
    return parse_program(Path(path).read_text(encoding="utf-8"))


def cmd_run(args) -> int:
    catalog = _catalog(args)
    task = catalog[args.task]
    program = _read_program(args.program)
    report = validate_program(program, task)
    result = execute(program, task.grid, args.step_limit)
    if args.json:
        print(
            json.dumps(
                {
                    "outcome": result.outcome,
                    "steps": result.steps,
                    "trace": [{"action": a, "pose": list(p)} for a, p in result.trace],
                    "violations": [
                        {"kind": v.kind, "message": v.message} for v in report.violations
                    ],
                },
                indent=2,
            )
        )
    else:
        print(f"outcome: {result.outcome}")
        print(f"steps:   {result.steps}")
        for v in report.violations:
            print(f"warning: {v.kind}: {v.message}")
    return 0


def cmd_hint(args) -> int:
    catalog = _catalog(args)
    task = catalog[args.task]
    attempt = _read_program(args.attempt)
    rec = recommend(attempt, task.solution, task.palette)
    payload = render_recommendation(rec, attempt)
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(f"recommendation for {task.id} (distance {rec.distance_to_solution}, "
              f"layer {rec.layers_explored}{', fallback' if rec.via_fallback else ''}):")
        print(payload["recommended_program"]["text"], end="")
    return 0


def cmd_quiz(args) -> int:
    catalog = _catalog(args)
    task = catalog[args.task]
    attempt = _read_program(args.attempt)
    try:
        quiz = build_code_quiz(attempt, task.solution, task, grid_index=args.grid_index)
    except QuizError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    payload = quiz.payload()
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(payload["grid"]["rows"]))
        print()
        print(payload["template"], end="")
        print()
        for i, option in enumerate(payload["options"]):
            print(f"  [{i}] {option}")
    return 0


def cmd_ted(args) -> int:
    a = _read_program(args.a)
    b = _read_program(args.b)
    print(ted(a, b))
    return 0


def cmd_catalog_check(args) -> int:
    try:
        catalog = _catalog(args)
    except CatalogError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"{len(catalog)} tasks OK")
    return 0


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    dataset = simulate_study(config, seed=args.seed, log_dir=args.out)
    where = f", logs in {args.out}" if args.out else ""
    n = sum(len(v) for v in dataset.groups.values())
    print(f"simulated {n} students (seed {dataset.seed}){where}")
    if args.dataset:
        Path(args.dataset).write_text(
            json.dumps(dataset.to_record(), indent=2), encoding="utf-8"
        )
        print(f"dataset written to {args.dataset}")
    return 0


def cmd_analyze(args) -> int:
    if args.logs:
        dataset = dataset_from_logs(args.logs)
    else:
        config = load_config(args.config)
        dataset = simulate_study(config, seed=args.seed)
    report = analyze(dataset)
    if args.report:
        write_report(report, args.report)
        print(f"report written to {args.report}")
    else:
        print(report_to_markdown(report))
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    serve(port=args.port, catalog_path=args.catalog, log_dir=args.log_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maze-mentor")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_catalog(p):
        p.add_argument("--catalog", help="task catalog directory (default: bundled)")

    p = sub.add_parser("run", help="execute a program on a task grid")
    p.add_argument("--task", required=True)
    p.add_argument("--program", required=True, help="path to a .maze file")
    p.add_argument("--step-limit", type=int, default=1000)
    p.add_argument("--json", action="store_true")
    add_catalog(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("hint", help="code-edit recommendation for an attempt")
    p.add_argument("--task", required=True)
    p.add_argument("--attempt", required=True, help="path to a .maze file")
    p.add_argument("--json", action="store_true")
    add_catalog(p)
    p.set_defaults(func=cmd_hint)

    p = sub.add_parser("quiz", help="fill-in-the-gap quiz for an attempt")
    p.add_argument("--task", required=True)
    p.add_argument("--attempt", required=True)
    p.add_argument("--grid-index", type=int, default=0, help="pick the k-th ranked grid")
    p.add_argument("--json", action="store_true")
    add_catalog(p)
    p.set_defaults(func=cmd_quiz)

    p = sub.add_parser("ted", help="tree edit distance between two programs")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_ted)

    p = sub.add_parser("catalog-check", help="validate a task catalog")
    add_catalog(p)
    p.set_defaults(func=cmd_catalog_check)

    p = sub.add_parser("simulate", help="run the synthetic two-phase study")
    p.add_argument("--config", help="study config JSON (default: bundled)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="directory for per-session event logs")
    p.add_argument("--dataset", help="write the assembled dataset JSON here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="statistical report over session logs")
    p.add_argument("--logs", help="directory of .jsonl session logs")
    p.add_argument("--config", help="study config if simulating in-place")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--report", help="output path (.json or .md); default prints markdown")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("serve", help="run the HTTP gateway")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--log-dir", default=None)
    add_catalog(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, CatalogError, KeyError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
