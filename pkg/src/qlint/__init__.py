"""qlint: static bug-pattern analyzer for Python-based quantum programs.

The pipeline parses each source file, extracts a variable-binding table
and a call-record list from the syntax tree, and runs eight bug-pattern
detector families against them, consulting a file-loaded knowledge base
of framework facts.  An evaluation harness scores the analyzer against a
labeled corpus with precision/recall/F1.
"""
from .detectors import (
    CATALOG,
    DETECTOR_IDS,
    Diagnostic,
    build_circuit_model,
    build_context,
    run_detectors,
)
from .extraction import (
    ExtractionResult,
    QPAttribute,
    QPOperation,
    extract,
    render_canonical,
    resolve_origin,
)
from .frontend import SourceFile, SourceSpan, SyntaxErrorReport, SyntaxTree, load_source, parse_source
from .kb import KnowledgeBase, default_kb_path, load_default_kb, load_kb
from .report import AnalysisResult, render_introspection, render_json, render_text
from .runner import analyze_file, analyze_paths

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "CATALOG",
    "DETECTOR_IDS",
    "Diagnostic",
    "ExtractionResult",
    "KnowledgeBase",
    "QPAttribute",
    "QPOperation",
    "SourceFile",
    "SourceSpan",
    "SyntaxErrorReport",
    "SyntaxTree",
    "__version__",
    "analyze_file",
    "analyze_paths",
    "build_circuit_model",
    "build_context",
    "default_kb_path",
    "extract",
    "load_default_kb",
    "load_kb",
    "load_source",
    "parse_source",
    "render_canonical",
    "render_introspection",
    "render_json",
    "render_text",
    "resolve_origin",
    "run_detectors",
]
