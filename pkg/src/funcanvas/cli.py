"""Command line entry points: check, render, frames, lint, serve, fmt."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .diagnostics import has_errors
from .evaluator import DEFAULT_FUEL
from .lint import lint_program, load_rubric
from .pipeline import analyze_source, compile_source
from .render import Viewport
from .syntax import parse_source, print_tree


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except FileNotFoundError as exc:
        print(f"error: cannot open {exc.filename}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="funcanvas",
                                     description="Tools for the equational graphics language")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="report diagnostics for a source file")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("render", help="render a drawing program to SVG")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p.add_argument("--size", type=int, default=500, help="output width and height in pixels")
    p.set_defaults(handler=_cmd_render)

    p = sub.add_parser("frames", help="render an animation to numbered SVG frames")
    p.add_argument("file")
    p.add_argument("--fps", type=float, default=10.0)
    p.add_argument("--duration", type=float, default=2.0)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p.add_argument("--size", type=int, default=500)
    p.set_defaults(handler=_cmd_frames)

    p = sub.add_parser("lint", help="score a program against the rubric")
    p.add_argument("file")
    p.add_argument("--rubric", default=None, help="JSON rubric overriding the default points")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--expected", default=None, help="golden SVG to compare the render against")
    p.set_defaults(handler=_cmd_lint)

    p = sub.add_parser("serve", help="run the playground HTTP service")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", default=None, help="directory with the playground bundle")
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p.set_defaults(handler=_cmd_serve)

    p = sub.add_parser("fmt", help="pretty-print a source file in canonical layout")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    p.set_defaults(handler=_cmd_fmt)

    return parser


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _print_diagnostics(diags) -> None:
    for d in diags:
        print(d.render())


def _cmd_check(args) -> int:
    from .analysis import dependency_graph

    _, table, diags = analyze_source(_read(args.file))
    _print_diagnostics(diags)
    if has_errors(diags):
        return 1
    if table is not None:
        _print_diagnostics(dependency_graph(table)[1])
    print("ok")
    return 0


def _cmd_render(args) -> int:
    outcome = compile_source(_read(args.file), mode="draw", fuel=args.fuel,
                             viewport=Viewport(args.size, args.size))
    _print_diagnostics(outcome.diagnostics)
    if not outcome.ok:
        return 1
    if args.output:
        Path(args.output).write_text(outcome.svg, encoding="utf-8")
    else:
        sys.stdout.write(outcome.svg)
    return 0


def _cmd_frames(args) -> int:
    outcome = compile_source(_read(args.file), mode="animate", fuel=args.fuel,
                             fps=args.fps, duration=args.duration,
                             viewport=Viewport(args.size, args.size))
    _print_diagnostics(outcome.diagnostics)
    if not outcome.ok:
        return 1
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(outcome.frames):
        (out_dir / f"frame_{i:04d}.svg").write_text(frame, encoding="utf-8")
    print(f"wrote {len(outcome.frames)} frames to {out_dir}")
    return 0


def _cmd_lint(args) -> int:
    source = _read(args.file)
    tree, table, diags = analyze_source(source)
    _print_diagnostics(diags)
    if has_errors(diags):
        return 1
    rules = load_rubric(_read(args.rubric)) if args.rubric else None
    report = lint_program(tree, table, rules)
    golden_ok = True
    if args.expected:
        outcome = compile_source(source, mode="draw")
        golden = Path(args.expected).read_text(encoding="utf-8")
        golden_ok = outcome.ok and outcome.svg == golden
    if args.json:
        payload = report.to_json()
        if args.expected:
            payload["matches_golden"] = golden_ok
        print(json.dumps(payload, indent=2))
    else:
        print(report.to_text())
        if args.expected:
            print("output matches the golden render" if golden_ok
                  else "output DIFFERS from the golden render")
    return 0 if golden_ok else 1


def _cmd_serve(args) -> int:
    from .service import serve_forever

    port = int(os.environ.get("FUNCANVAS_PORT", args.port))
    return serve_forever(host=args.host, port=port, static_dir=args.static,
                         default_fuel=args.fuel)


def _cmd_fmt(args) -> int:
    tree, diags = parse_source(_read(args.file))
    if has_errors(diags):
        _print_diagnostics(diags)
        return 1
    text = print_tree(tree)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
