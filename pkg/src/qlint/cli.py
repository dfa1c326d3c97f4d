"""Command-line driver.

Usage::

    qlint [OPTIONS] PATH [PATH ...]       # analyze files or directories
    qlint eval [OPTIONS] MANIFEST         # score a labeled corpus

Exit codes for analysis runs: 0 when every file was analyzed and nothing
was found, 1 when at least one diagnostic was emitted, 2 on usage errors,
unreadable input, knowledge-base load failure, or any syntax-error file
(the remaining files are still analyzed and reported).
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .detectors import CATALOG, DETECTOR_IDS
from .evaluation import ManifestError, render_eval_json, render_eval_text, run_corpus
from .extraction import extract
from .frontend import SyntaxErrorReport, load_source, parse_source
from .kb import KBError, KnowledgeBase, default_kb_path, load_kb
from .report import render_introspection, render_json, render_text
from .runner import analyze_paths

_ENV_KB = "QLINT_KB"


def _kb_path(flag_value: str | None) -> Path:
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(_ENV_KB)
    if env:
        return Path(env)
    return default_kb_path()


def _load_kb_or_fail(flag_value: str | None) -> KnowledgeBase | None:
    path = _kb_path(flag_value)
    try:
        return load_kb(path)
    except (KBError, OSError) as exc:
        print(f"qlint: cannot load knowledge base: {exc}", file=sys.stderr)
        return None


def _parse_detectors(raw: str | None) -> set[str] | None:
    if raw is None:
        return None
    chosen = {part.strip() for part in raw.split(",") if part.strip()}
    unknown = chosen - set(DETECTOR_IDS)
    if unknown:
        raise ValueError(f"unknown detector id(s): {', '.join(sorted(unknown))}")
    return chosen


def _list_detectors() -> str:
    lines = []
    for detector in DETECTOR_IDS:
        lines.append(detector)
        for code, description in CATALOG.items():
            if code.startswith(detector + "."):
                lines.append(f"  {code}: {description}")
    return "\n".join(lines) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _analyze_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlint",
        description="Static bug-pattern analyzer for Python-based quantum programs.",
    )
    parser.add_argument("paths", nargs="*", metavar="PATH",
                        help="source files or directories (searched recursively for .py)")
    parser.add_argument("--detectors", metavar="IDS",
                        help="comma-separated detector ids (default: all eight)")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--output", metavar="PATH", help="write the report to a file")
    parser.add_argument("--kb", metavar="PATH",
                        help=f"knowledge base file (overrides ${_ENV_KB} and the bundled default)")
    parser.add_argument("--jobs", type=int, metavar="N", default=None,
                        help="analysis workers (default: logical CPUs)")
    parser.add_argument("--introspect", action="store_true",
                        help="print the extracted binding/call models instead of diagnostics")
    parser.add_argument("--list-detectors", action="store_true",
                        help="print the detector catalog with pattern codes and exit")
    parser.add_argument("--no-timing", action="store_true",
                        help="zero the timing_ms fields so reports are byte-reproducible")
    return parser


def _eval_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlint eval",
        description="Run the evaluation harness over a labeled corpus manifest.",
    )
    parser.add_argument("manifest", metavar="MANIFEST")
    parser.add_argument("--detectors", metavar="IDS")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--output", metavar="PATH")
    parser.add_argument("--kb", metavar="PATH")
    parser.add_argument("--jobs", type=int, metavar="N", default=None)
    return parser


def _introspect(paths: list[str]) -> int:
    code = 0
    blocks: list[str] = []
    for index, path in enumerate(paths):
        try:
            source = load_source(path)
        except OSError as exc:
            print(f"qlint: cannot read {path}: {exc.strerror or exc}", file=sys.stderr)
            code = 2
            continue
        if isinstance(source, SyntaxErrorReport):
            print(f"{source.path}:{source.line}:{source.column} syntax error: {source.message}",
                  file=sys.stderr)
            code = 2
            continue
        tree = parse_source(source)
        if isinstance(tree, SyntaxErrorReport):
            print(f"{tree.path}:{tree.line}:{tree.column} syntax error: {tree.message}",
                  file=sys.stderr)
            code = 2
            continue
        models = extract(tree, source)
        header = f"# {path}\n" if len(paths) > 1 else ""
        blocks.append(header + render_introspection(models))
    sys.stdout.write("\n".join(blocks))
    return code


def _run_analyze(argv: list[str]) -> int:
    parser = _analyze_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.list_detectors:
        sys.stdout.write(_list_detectors())
        return 0
    if not args.paths:
        parser.print_usage(sys.stderr)
        print("qlint: error: at least one input path is required", file=sys.stderr)
        return 2
    try:
        enabled = _parse_detectors(args.detectors)
    except ValueError as exc:
        print(f"qlint: error: {exc}", file=sys.stderr)
        return 2

    if args.introspect:
        from .runner import discover_files

        files = discover_files(args.paths)
        missing = [p for p in files if not p.exists()]
        for path in missing:
            print(f"qlint: cannot read {path}: no such file or directory", file=sys.stderr)
        code = _introspect([str(p) for p in files if p.exists()])
        return 2 if missing else code

    kb = _load_kb_or_fail(args.kb)
    if kb is None:
        return 2
    results, errors = analyze_paths(args.paths, kb, enabled, args.jobs)
    for message in errors:
        print(f"qlint: cannot read {message}", file=sys.stderr)

    if args.format == "json":
        text = render_json(results, include_timing=not args.no_timing) + "\n"
    else:
        text = render_text(results)
    _emit(text, args.output)

    if errors or any(r.syntax_error is not None for r in results):
        return 2
    if any(r.diagnostics for r in results):
        return 1
    return 0


def _run_eval(argv: list[str]) -> int:
    parser = _eval_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    kb = _load_kb_or_fail(args.kb)
    if kb is None:
        return 2
    try:
        enabled = _parse_detectors(args.detectors)
    except ValueError as exc:
        print(f"qlint: error: {exc}", file=sys.stderr)
        return 2
    try:
        report, _, _ = run_corpus(args.manifest, kb, enabled, args.jobs)
    except (ManifestError, FileNotFoundError, OSError) as exc:
        print(f"qlint: eval failed: {exc}", file=sys.stderr)
        return 2
    text = render_eval_json(report) + "\n" if args.format == "json" else render_eval_text(report)
    _emit(text, args.output)
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "eval":
        return _run_eval(argv[1:])
    return _run_analyze(argv)


if __name__ == "__main__":
    sys.exit(main())
