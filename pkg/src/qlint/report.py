"""Render analysis results and extraction models to text and JSON.

The JSON schema is versioned and byte-deterministic: files are sorted by
path, diagnostics are pre-sorted by the detector dispatcher, keys appear
in a fixed order, and the serializer uses compact separators.  Timing can
be suppressed (zeroed) so that reports from separate runs compare equal.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .detectors import DETECTOR_IDS, Diagnostic
from .extraction import ExtractionResult
from .frontend import SyntaxErrorReport

JSON_VERSION = 1
_SEPARATOR = "=" * 42


@dataclass
class AnalysisResult:
    """Outcome of analyzing one file: findings or a syntax error, plus timing."""

    file: str
    diagnostics: list[Diagnostic] = field(default_factory=list)
    syntax_error: SyntaxErrorReport | None = None
    timing_ms: float = 0.0


def render_text(results: Sequence[AnalysisResult]) -> str:
    """One line per diagnostic plus a per-detector summary footer."""
    lines: list[str] = []
    counts: Counter[str] = Counter()
    syntax_errors = 0
    for result in sorted(results, key=lambda r: r.file):
        if result.syntax_error is not None:
            err = result.syntax_error
            lines.append(f"{err.path}:{err.line}:{err.column} syntax error: {err.message}")
            syntax_errors += 1
            continue
        for diag in result.diagnostics:
            lines.append(f"{diag.file}:{diag.line}:{diag.col} "
                         f"[{diag.detector}/{diag.pattern_code}] {diag.message}")
            counts[diag.detector] += 1
    total = sum(counts.values())
    footer = f"{total} diagnostics"
    if total:
        per = ", ".join(f"{d}: {counts[d]}" for d in DETECTOR_IDS if counts[d])
        footer += f" ({per})"
    if syntax_errors:
        footer += f"; {syntax_errors} file(s) with syntax errors"
    lines.append(footer)
    return "\n".join(lines) + "\n"


def render_json(results: Sequence[AnalysisResult], include_timing: bool = True) -> str:
    """Deterministic JSON report; identical inputs yield identical bytes."""
    files = []
    for result in sorted(results, key=lambda r: r.file):
        entry: dict = {
            "path": result.file,
            "timing_ms": round(result.timing_ms, 3) if include_timing else 0.0,
        }
        if result.syntax_error is not None:
            err = result.syntax_error
            entry["syntax_error"] = {"line": err.line, "col": err.column, "message": err.message}
        entry["diagnostics"] = [
            {
                "line": diag.line,
                "col": diag.col,
                "detector": diag.detector,
                "pattern": diag.pattern_code,
                "message": diag.message,
            }
            for diag in result.diagnostics
        ]
        files.append(entry)
    return json.dumps({"version": JSON_VERSION, "files": files}, separators=(",", ":"))


def detector_counts(results: Iterable[AnalysisResult]) -> dict[str, int]:
    counts = {detector: 0 for detector in DETECTOR_IDS}
    for result in results:
        for diag in result.diagnostics:
            counts[diag.detector] += 1
    return counts


def render_introspection(models: ExtractionResult) -> str:
    """The binding-tuple block, a separator, then the call-string block."""
    lines = [f"('{entry.name}', '{entry.value_rendered}')" for entry in models.attributes.entries]
    lines.append(_SEPARATOR)
    lines.extend(f"'{record.call_rendered}'" for record in models.operations.records)
    return "\n".join(lines) + "\n"
