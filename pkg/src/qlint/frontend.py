"""Parsing front end: source files, spans, and the syntax gate.

Source text is parsed with the host Python grammar into a navigable tree.
Files that fail to decode or parse are reported as ``SyntaxErrorReport``
and excluded from every later stage -- nothing downstream ever sees a
broken tree.

Lines and columns in all reported positions are 1-based, and columns count
Unicode scalar values (the parser reports UTF-8 byte offsets internally;
this module converts them).
"""
from __future__ import annotations

import ast
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True, order=True)
class SourceSpan:
    """Region of source text: 1-based start/end lines, 1-based columns.

    ``end_col`` points one past the last character, so slicing a file by a
    span yields exactly the spanned text.
    """

    start_line: int
    start_col: int
    end_line: int
    end_col: int


@dataclass(frozen=True)
class SyntaxErrorReport:
    """A file rejected before analysis (decode failure or parse error)."""

    path: str
    line: int
    column: int
    message: str


class SourceFile:
    """A decoded source file with line-offset bookkeeping.

    ``line_starts`` holds the byte offset (UTF-8) of each line start and
    always begins at 0; it has one entry per line, including a final empty
    line when the text ends with a newline.
    """

    def __init__(self, path: str, text: str) -> None:
        self.path = path
        self.text = text
        self._lines = text.split("\n")
        self._line_bytes = [line.encode("utf-8") for line in self._lines]
        starts = [0]
        for raw in self._line_bytes[:-1]:
            starts.append(starts[-1] + len(raw) + 1)
        self.line_starts = tuple(starts)
        char_starts = [0]
        for line in self._lines[:-1]:
            char_starts.append(char_starts[-1] + len(line) + 1)
        self._char_starts = char_starts

    def line_text(self, line: int) -> str:
        return self._lines[line - 1]

    def char_column(self, line: int, byte_col: int) -> int:
        """Convert a 0-based UTF-8 byte column to a 1-based character column."""
        raw = self._line_bytes[line - 1]
        return len(raw[:byte_col].decode("utf-8", errors="replace")) + 1

    def slice(self, span: SourceSpan) -> str:
        start = self._char_starts[span.start_line - 1] + span.start_col - 1
        end = self._char_starts[span.end_line - 1] + span.end_col - 1
        return self.text[start:end]


@dataclass(frozen=True)
class SyntaxTree:
    """Immutable parse result; ``root`` is never mutated after construction."""

    root: ast.Module
    file: SourceFile

    @property
    def statements(self) -> tuple[ast.stmt, ...]:
        return tuple(self.root.body)


def node_span(file: SourceFile, node: ast.AST) -> SourceSpan:
    """Span of an AST node in 1-based character coordinates."""
    start_line = getattr(node, "lineno", 1)
    end_line = getattr(node, "end_lineno", None) or start_line
    start_col = file.char_column(start_line, getattr(node, "col_offset", 0))
    end_byte = getattr(node, "end_col_offset", None)
    end_col = file.char_column(end_line, end_byte) if end_byte is not None else start_col
    return SourceSpan(start_line, start_col, end_line, end_col)


def load_source(path: str | Path) -> SourceFile | SyntaxErrorReport:
    """Read and decode a file; non-UTF-8 input is rejected as a syntax error.

    I/O errors (missing/unreadable file) propagate as ``OSError``.
    """
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        return SyntaxErrorReport(str(path), 1, 1, f"file is not valid UTF-8 ({exc.reason})")
    return SourceFile(str(path), text)


def parse_source(file: SourceFile) -> SyntaxTree | SyntaxErrorReport:
    """Parse ``file`` or report why it was rejected.

    A file that returns ``SyntaxErrorReport`` is excluded from extraction
    and detection entirely.
    """
    try:
        root = ast.parse(file.text)
    except SyntaxError as exc:
        return SyntaxErrorReport(
            path=file.path,
            line=exc.lineno or 1,
            column=max(1, exc.offset or 1),
            message=exc.msg or "invalid syntax",
        )
    except ValueError as exc:  # e.g. NUL bytes in source
        return SyntaxErrorReport(path=file.path, line=1, column=1, message=str(exc))
    return SyntaxTree(root=root, file=file)
