"""Shared fixtures and small pipeline helpers for the test suite."""
from __future__ import annotations

from pathlib import Path

from qlint.detectors import Diagnostic, build_context, run_detectors
from qlint.extraction import ExtractionResult, extract
from qlint.frontend import SourceFile, SyntaxErrorReport, SyntaxTree, parse_source
from qlint.kb import KnowledgeBase, load_default_kb

CORPUS = Path(__file__).resolve().parent.parent / "src" / "qlint" / "corpus"
MANIFEST = CORPUS / "manifest.txt"

_DEFAULT_KB: KnowledgeBase | None = None


def default_kb() -> KnowledgeBase:
    global _DEFAULT_KB
    if _DEFAULT_KB is None:
        _DEFAULT_KB = load_default_kb()
    return _DEFAULT_KB


def corpus_file(name: str) -> Path:
    return CORPUS / name


def parse_text(text: str, path: str = "<test>") -> tuple[SyntaxTree, SourceFile]:
    source = SourceFile(path, text)
    tree = parse_source(source)
    assert isinstance(tree, SyntaxTree), f"unexpected syntax error: {tree}"
    return tree, source


def extract_text(text: str, path: str = "<test>") -> ExtractionResult:
    tree, source = parse_text(text, path)
    return extract(tree, source)


def extract_file(path: Path) -> ExtractionResult:
    return extract_text(path.read_text(encoding="utf-8"), str(path))


def diagnostics_for(text: str, kb: KnowledgeBase | None = None,
                    enabled: set[str] | None = None,
                    path: str = "<test>") -> list[Diagnostic]:
    tree, source = parse_text(text, path)
    ctx = build_context(source, extract(tree, source), kb or default_kb())
    return run_detectors(ctx, enabled)


def diagnostics_for_file(path: Path, kb: KnowledgeBase | None = None,
                         enabled: set[str] | None = None) -> list[Diagnostic]:
    return diagnostics_for(path.read_text(encoding="utf-8"), kb, enabled, str(path))
