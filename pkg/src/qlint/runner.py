"""File discovery and the per-file analysis pipeline.

Each file runs parse -> extract -> detect independently (pure functions of
the file text and the shared immutable KB), so files are analyzed
concurrently up to a worker bound.  Timing covers parsing, extraction,
and detection only.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from time import perf_counter
from typing import Iterable, Sequence

from .detectors import build_context, run_detectors
from .extraction import extract
from .frontend import SyntaxErrorReport, load_source, parse_source
from .kb import KnowledgeBase
from .report import AnalysisResult


def discover_files(paths: Iterable[str | Path]) -> list[Path]:
    """Expand directories recursively to ``*.py`` files; keep files as given."""
    found: list[Path] = []
    for item in paths:
        path = Path(item)
        if path.is_dir():
            found.extend(sorted(path.rglob("*.py")))
        else:
            found.append(path)
    return found


def analyze_file(path: str | Path, kb: KnowledgeBase,
                 enabled: set[str] | None = None) -> AnalysisResult:
    """Analyze one file; a syntax error gates out extraction and detection."""
    start = perf_counter()
    source = load_source(path)
    if isinstance(source, SyntaxErrorReport):
        return AnalysisResult(str(path), [], source, (perf_counter() - start) * 1000.0)
    tree = parse_source(source)
    if isinstance(tree, SyntaxErrorReport):
        return AnalysisResult(str(path), [], tree, (perf_counter() - start) * 1000.0)
    models = extract(tree, source)
    ctx = build_context(source, models, kb)
    diagnostics = run_detectors(ctx, enabled)
    return AnalysisResult(str(path), diagnostics, None, (perf_counter() - start) * 1000.0)


def analyze_paths(paths: Sequence[str | Path], kb: KnowledgeBase,
                  enabled: set[str] | None = None,
                  jobs: int | None = None) -> tuple[list[AnalysisResult], list[str]]:
    """Analyze all inputs; returns (results sorted by path, I/O error messages)."""
    files = discover_files(paths)
    workers = jobs or os.cpu_count() or 1
    results: list[AnalysisResult] = []
    errors: list[str] = []

    def run_one(path: Path) -> AnalysisResult | None:
        try:
            return analyze_file(path, kb, enabled)
        except OSError as exc:
            errors.append(f"{path}: {exc.strerror or exc}")
            return None

    if workers > 1 and len(files) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_one, files))
    else:
        outcomes = [run_one(path) for path in files]
    results = [r for r in outcomes if r is not None]
    results.sort(key=lambda r: r.file)
    errors.sort()
    return results, errors
