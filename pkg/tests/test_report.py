from __future__ import annotations

import json

from helpers import corpus_file, default_kb, extract_file
from qlint.frontend import SyntaxErrorReport
from qlint.report import (
    AnalysisResult,
    detector_counts,
    render_introspection,
    render_json,
    render_text,
)
from qlint.runner import analyze_file


def _result(name: str) -> AnalysisResult:
    return analyze_file(corpus_file(name), default_kb())


def test_text_line_format_and_footer():
    text = render_text([_result("measure_then_entangle.py")])
    lines = text.splitlines()
    assert len(lines) == 3
    assert lines[0].endswith("[MI/MI.measured-control] qubit 1 of 'qc' was measured and is "
                             "used here as a control qubit in 'qc.cx(1,2)'")
    assert ":9:" in lines[0] and ":10:" in lines[1]
    assert lines[2] == "2 diagnostics (MI: 2)"


def test_text_empty_results_footer_only():
    assert render_text([]) == "0 diagnostics\n"


def test_text_syntax_error_rendering():
    result = AnalysisResult("bad.py", [], SyntaxErrorReport("bad.py", 1, 11, "'(' was never closed"))
    text = render_text([result])
    lines = text.splitlines()
    assert lines[0] == "bad.py:1:11 syntax error: '(' was never closed"
    assert lines[1] == "0 diagnostics; 1 file(s) with syntax errors"


def test_json_zero_files_golden():
    assert render_json([]) == '{"version":1,"files":[]}'


def test_json_teleport_fixture():
    payload = json.loads(render_json([_result("measure_then_entangle.py")]))
    assert payload["version"] == 1
    diagnostics = payload["files"][0]["diagnostics"]
    assert len(diagnostics) == 2
    assert all(d["detector"] == "MI" for d in diagnostics)
    assert [d["line"] for d in diagnostics] == [9, 10]


def test_json_layout_fixture():
    payload = json.loads(render_json([_result("duplicate_layout.py")]))
    diagnostics = payload["files"][0]["diagnostics"]
    assert len(diagnostics) == 1
    assert diagnostics[0]["detector"] == "PE"
    assert diagnostics[0]["pattern"] == "PE.same-physical-qubit"


def test_json_round_trip_preserves_diagnostic_fields():
    result = _result("measure_then_entangle.py")
    payload = json.loads(render_json([result]))
    rebuilt = payload["files"][0]["diagnostics"]
    for diag, raw in zip(result.diagnostics, rebuilt):
        assert raw == {
            "line": diag.line,
            "col": diag.col,
            "detector": diag.detector,
            "pattern": diag.pattern_code,
            "message": diag.message,
        }


def test_json_key_order_and_determinism():
    results = [_result("measure_then_entangle.py")]
    first = render_json(results)
    second = render_json(results)
    assert first == second
    assert first.startswith('{"version":1,"files":[{"path":')
    assert '"timing_ms":' in first


def test_json_syntax_error_entry():
    result = AnalysisResult("bad.py", [], SyntaxErrorReport("bad.py", 2, 5, "invalid syntax"))
    payload = json.loads(render_json([result]))
    entry = payload["files"][0]
    assert entry["syntax_error"] == {"line": 2, "col": 5, "message": "invalid syntax"}
    assert entry["diagnostics"] == []


def test_json_timing_can_be_zeroed():
    results = [_result("measure_then_entangle.py")]
    stable = render_json(results, include_timing=False)
    assert '"timing_ms":0.0' in stable
    assert render_json(results, include_timing=False) == stable


def test_files_sorted_regardless_of_input_order():
    a = _result("measure_then_entangle.py")
    b = _result("duplicate_layout.py")
    assert render_json([a, b]) == render_json([b, a])
    assert render_text([a, b]) == render_text([b, a])


def test_text_and_json_agree_on_counts():
    results = [_result("measure_then_entangle.py"), _result("duplicate_layout.py")]
    payload = json.loads(render_json(results))
    json_counts: dict[str, int] = {}
    for entry in payload["files"]:
        for diag in entry["diagnostics"]:
            json_counts[diag["detector"]] = json_counts.get(diag["detector"], 0) + 1
    counts = {k: v for k, v in detector_counts(results).items() if v}
    assert counts == json_counts
    footer = render_text(results).splitlines()[-1]
    assert footer == "3 diagnostics (MI: 2, PE: 1)"


def test_introspection_layout():
    models = extract_file(corpus_file("execute_workflow.py"))
    text = render_introspection(models)
    lines = text.splitlines()
    assert lines[0] == "('simulator', 'Aer.get_backend(\"qasm_simulator\")')"
    assert lines[7] == "=" * 42
    assert lines[8] == "'Aer.get_backend(\"qasm_simulator\")'"
    assert lines[-1] == "'print(counts)'"
    assert len(lines) == 7 + 1 + 12
