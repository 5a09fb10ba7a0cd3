"""Command-line interface.

Subcommands mirror the library operations: ``validate`` checks a diagram,
``paths`` lists paths from the annotated target to each important
feature, ``gmc`` and ``random`` produce mode files, ``enumerate`` sizes
the clause space of a mode file, ``emit`` re-renders a mode file in
another dialect and ``serve`` starts the HTTP service.

Exit codes: 0 on success, 1 when the input fails to parse or validate,
2 for usage errors. Structured output goes to stdout, diagnostics to
stderr; malformed input never crashes the process.
"""

from __future__ import annotations

import argparse
import sys

from .clausespace import DEFAULT_CAP, enumerate_clauses, report_to_json
from .errors import ERModesError
from .ir import load_diagram, parse_ir
from .model import validate
from .modes import DIALECTS, emit_modes, gmc, parse_modes
from .paths import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_NUM_WALKS,
    Strategy,
    WalkConfig,
    find_paths,
    random_paths,
)


def _write_output(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _config_from_args(args, strategy: Strategy | None = None) -> WalkConfig:
    cfg = WalkConfig(
        strategy=strategy or Strategy.from_wire(args.strategy),
        max_depth=args.max_depth,
        seed=getattr(args, "seed", 0),
        num_walks=getattr(args, "num_walks", DEFAULT_NUM_WALKS),
    )
    cfg.check()
    return cfg


def cmd_validate(args) -> int:
    try:
        with open(args.diagram, encoding="utf-8") as handle:
            parse_ir(handle.read())
    except ERModesError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    print("ok")
    return 0


def cmd_paths(args) -> int:
    diagram = load_diagram(args.diagram)
    if diagram.annotation is None:
        print("diagram has no annotation", file=sys.stderr)
        return 1
    config = _config_from_args(args)
    lines: list[str] = []
    if config.strategy is Strategy.RANDOM:
        for path in random_paths(diagram, diagram.annotation.target, config):
            lines.append(path.render())
    else:
        for ref in diagram.annotation.important:
            found = find_paths(diagram, diagram.annotation.target, ref, config)
            lines.append(f"{ref.display()}:")
            if not found:
                print(f"no path to {ref.display()} within depth "
                      f"{config.max_depth}", file=sys.stderr)
            lines.extend(f"  {path.render()}" for path in found)
    _write_output("\n".join(lines) + "\n", args.output)
    return 0


def _emit_modeset(diagram, config, args) -> int:
    modeset = gmc(diagram, config)
    for warning in modeset.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    _write_output(emit_modes(modeset, args.dialect), args.output)
    return 0


def cmd_gmc(args) -> int:
    diagram = load_diagram(args.diagram)
    return _emit_modeset(diagram, _config_from_args(args), args)


def cmd_random(args) -> int:
    diagram = load_diagram(args.diagram)
    config = _config_from_args(args, strategy=Strategy.RANDOM)
    return _emit_modeset(diagram, config, args)


def cmd_enumerate(args) -> int:
    with open(args.modes, encoding="utf-8") as handle:
        modeset = parse_modes(handle.read())
    result = enumerate_clauses(modeset, args.max_len, args.cap)
    if args.table:
        rows = [("length", "bodies")]
        rows += [(str(k), str(v))
                 for k, v in sorted(result.report.counts_by_length.items())]
        rows.append(("total", str(result.report.total)))
        width = max(len(row[0]) for row in rows)
        lines = [f"{name:<{width}}  {value}" for name, value in rows]
        if result.report.truncated:
            lines.append("(truncated at cap)")
        lines.append("distinct clause bodies per length; a search-space "
                     "proxy, not a hypothesis count")
        _write_output("\n".join(lines) + "\n", args.output)
    else:
        _write_output(report_to_json(result.report) + "\n", args.output)
    return 0


def cmd_emit(args) -> int:
    with open(args.modes, encoding="utf-8") as handle:
        modeset = parse_modes(handle.read())
    _write_output(emit_modes(modeset, args.dialect), args.output)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.store, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _add_diagram_arg(parser) -> None:
    parser.add_argument("--diagram", required=True,
                        help="path to a .erd.json diagram")


def _add_walk_args(parser, strategies) -> None:
    parser.add_argument("--strategy", default="shortest", choices=strategies,
                        help="path search strategy")
    parser.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH,
                        help="maximum relationships per path")
    parser.add_argument("--seed", type=int, default=0,
                        help="random walk seed")
    parser.add_argument("--num-walks", type=int, default=DEFAULT_NUM_WALKS,
                        help="number of random walks")


def _add_output_arg(parser) -> None:
    parser.add_argument("--output", help="write to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ermodes",
        description="Compile annotated entity-relationship diagrams into "
                    "mode declarations for relational learners.")
    sub = parser.add_subparsers(dest="command", required=True)
    strategies = ["shortest", "shortest-all", "all", "random"]

    p = sub.add_parser("validate", help="check a diagram file")
    p.add_argument("diagram", help="path to a .erd.json diagram")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("paths", help="list paths from the target to each "
                                     "important feature")
    _add_diagram_arg(p)
    _add_walk_args(p, strategies)
    _add_output_arg(p)
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("gmc", help="guided mode construction")
    _add_diagram_arg(p)
    _add_walk_args(p, strategies)
    p.add_argument("--dialect", default="generic", choices=DIALECTS)
    _add_output_arg(p)
    p.set_defaults(func=cmd_gmc)

    p = sub.add_parser("random", help="mode construction from random walks")
    _add_diagram_arg(p)
    p.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--num-walks", type=int, default=DEFAULT_NUM_WALKS)
    p.add_argument("--dialect", default="generic", choices=DIALECTS)
    _add_output_arg(p)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("enumerate", help="count clause bodies under a mode file")
    p.add_argument("--modes", required=True, help="generic-dialect mode file")
    p.add_argument("--max-len", type=int, default=3)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--table", action="store_true",
                   help="human-readable table instead of JSON")
    _add_output_arg(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("emit", help="re-render a mode file in a dialect")
    p.add_argument("--modes", required=True, help="generic-dialect mode file")
    p.add_argument("--dialect", default="generic", choices=DIALECTS)
    _add_output_arg(p)
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--store", default="diagrams",
                   help="directory holding .erd.json documents")
    p.add_argument("--ui-dir", default=None,
                   help="static directory with the web editor")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ERModesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
