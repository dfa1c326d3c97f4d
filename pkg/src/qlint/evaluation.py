"""Corpus harness: labeled programs in, precision/recall/F1 out.

Manifest format, one entry per line (``#`` comments allowed)::

    RELPATH DETECTOR[ LINES]

where DETECTOR is one of the eight detector ids or NONE (a clean or
statically-undetectable program) and LINES is an optional comma-separated
list of expected line numbers.  Paths resolve against the manifest's
directory, and each file may appear only once.

Scoring follows a one-label-per-file protocol.  For an entry expecting
detector D: a diagnostic from D (on an expected line, when lines are
given) makes the entry a true positive; diagnostics with no such match
make it one false positive; no diagnostics make it a false negative.
Every diagnostic on a NONE entry counts as one false positive.  Files
with both matching and non-matching diagnostics score as TP only
(match-first).
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .detectors import DETECTOR_IDS
from .kb import KnowledgeBase
from .report import AnalysisResult
from .runner import analyze_file

_LABELS = DETECTOR_IDS + ("NONE",)


class ManifestError(ValueError):
    def __init__(self, path: str, line: int, message: str) -> None:
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


@dataclass(frozen=True)
class CorpusEntry:
    file: Path
    expected_detector: str
    expected_lines: tuple[int, ...] | None = None


@dataclass(frozen=True)
class EntryOutcome:
    entry: CorpusEntry
    outcome: str  # "TP" | "FP" | "FN" | "CLEAN"
    fp_count: int = 0


def load_manifest(path: str | Path) -> list[CorpusEntry]:
    path = Path(path)
    base = path.parent
    entries: list[CorpusEntry] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) not in (2, 3):
            raise ManifestError(str(path), lineno, "expected 'RELPATH DETECTOR [LINES]'")
        relpath, label = fields[0], fields[1]
        if label not in _LABELS:
            raise ManifestError(str(path), lineno, f"unknown detector label {label!r}")
        if relpath in seen:
            raise ManifestError(str(path), lineno, f"duplicate file {relpath!r}")
        seen.add(relpath)
        lines: tuple[int, ...] | None = None
        if len(fields) == 3:
            if label == "NONE":
                raise ManifestError(str(path), lineno, "NONE entries cannot carry line numbers")
            try:
                lines = tuple(int(part) for part in fields[2].split(","))
            except ValueError:
                raise ManifestError(str(path), lineno, f"bad line list {fields[2]!r}") from None
        entries.append(CorpusEntry(base / relpath, label, lines))
    return entries


def score_entry(entry: CorpusEntry, result: AnalysisResult) -> EntryOutcome:
    diagnostics = result.diagnostics
    if entry.expected_detector == "NONE":
        return EntryOutcome(entry, "CLEAN", fp_count=len(diagnostics))
    matched = any(
        diag.detector == entry.expected_detector
        and (entry.expected_lines is None or diag.line in entry.expected_lines)
        for diag in diagnostics
    )
    if matched:
        return EntryOutcome(entry, "TP")
    if diagnostics:
        return EntryOutcome(entry, "FP", fp_count=1)
    return EntryOutcome(entry, "FN")


def distribution(outcomes: list[EntryOutcome]) -> dict[str, int]:
    """True positives per detector; values sum to the TP total."""
    counts = {detector: 0 for detector in DETECTOR_IDS}
    for outcome in outcomes:
        if outcome.outcome == "TP":
            counts[outcome.entry.expected_detector] += 1
    return counts


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    precision: float | None
    recall: float | None
    f1: float | None
    per_detector: dict[str, int]
    mean_time_ms: float
    n_files: int

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int,
                    per_detector: dict[str, int] | None = None,
                    mean_time_ms: float = 0.0, n_files: int = 0) -> "EvalReport":
        precision = tp / (tp + fp) if tp + fp > 0 else None
        recall = tp / (tp + fn) if tp + fn > 0 else None
        if precision is None or recall is None or precision + recall == 0:
            f1 = None
        else:
            # algebraically 2*precision*recall/(precision+recall); the count
            # form is exact in floating point when precision == recall
            f1 = 2 * tp / (2 * tp + fp + fn)
        return cls(
            tp=tp, fp=fp, fn=fn,
            precision=precision, recall=recall, f1=f1,
            per_detector=per_detector if per_detector is not None
            else {detector: 0 for detector in DETECTOR_IDS},
            mean_time_ms=mean_time_ms,
            n_files=n_files,
        )


def run_corpus(manifest_path: str | Path, kb: KnowledgeBase,
               enabled: set[str] | None = None,
               jobs: int | None = None) -> tuple[EvalReport, list[EntryOutcome], list[AnalysisResult]]:
    """Score every manifest entry; timing covers analysis only."""
    entries = load_manifest(manifest_path)
    for entry in entries:
        if not entry.file.is_file():
            raise FileNotFoundError(f"manifest entry not found: {entry.file}")
    workers = jobs or os.cpu_count() or 1
    if workers > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda e: analyze_file(e.file, kb, enabled), entries))
    else:
        results = [analyze_file(entry.file, kb, enabled) for entry in entries]
    outcomes = [score_entry(entry, result) for entry, result in zip(entries, results)]
    tp = sum(1 for o in outcomes if o.outcome == "TP")
    fn = sum(1 for o in outcomes if o.outcome == "FN")
    fp = sum(o.fp_count for o in outcomes)
    mean_ms = sum(r.timing_ms for r in results) / len(results) if results else 0.0
    report = EvalReport.from_counts(
        tp, fp, fn,
        per_detector=distribution(outcomes),
        mean_time_ms=mean_ms,
        n_files=len(entries),
    )
    return report, outcomes, results


def evaluate(manifest_path: str | Path, kb: KnowledgeBase,
             enabled: set[str] | None = None, jobs: int | None = None) -> EvalReport:
    report, _, _ = run_corpus(manifest_path, kb, enabled, jobs)
    return report


def _metric(value: float | None) -> str:
    return "undefined" if value is None else f"{value:.3f}"


def render_eval_text(report: EvalReport) -> str:
    per = " ".join(f"{d}={report.per_detector.get(d, 0)}" for d in DETECTOR_IDS)
    lines = [
        f"files: {report.n_files}",
        f"tp: {report.tp}  fp: {report.fp}  fn: {report.fn}",
        f"precision: {_metric(report.precision)}",
        f"recall: {_metric(report.recall)}",
        f"f1: {_metric(report.f1)}",
        f"per-detector TP: {per}",
        f"mean analysis time: {report.mean_time_ms:.1f} ms",
    ]
    return "\n".join(lines) + "\n"


def render_eval_json(report: EvalReport) -> str:
    payload = {
        "tp": report.tp,
        "fp": report.fp,
        "fn": report.fn,
        "precision": report.precision,
        "recall": report.recall,
        "f1": report.f1,
        "per_detector": {d: report.per_detector.get(d, 0) for d in DETECTOR_IDS},
        "mean_time_ms": round(report.mean_time_ms, 3),
        "n_files": report.n_files,
    }
    return json.dumps(payload, separators=(",", ":"))
