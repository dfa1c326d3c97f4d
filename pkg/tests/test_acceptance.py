"""Acceptance suite: every gate the artifact must clear, one test each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line
per criterion.
"""
from __future__ import annotations

import json
import random
import subprocess
import sys
import time

import pytest

from helpers import CORPUS, MANIFEST, corpus_file, default_kb, diagnostics_for_file, extract_file
from qlint.detectors import DETECTOR_IDS
from qlint.evaluation import EvalReport, run_corpus
from qlint.report import render_introspection

WORKFLOW_TUPLES = {
    "('simulator', 'Aer.get_backend(\"qasm_simulator\")')",
    "('qreg', 'QuantumRegister(3)')",
    "('creg', 'ClassicalRegister(3)')",
    "('circuit', 'QuantumCircuit(qreg,creg)')",
    "('job', 'execute(circuit,simulator,shots=1000)')",
    "('result', 'job.result()')",
    "('counts', 'result.get_counts(circuit)')",
}
WORKFLOW_CALLS = {
    "'Aer.get_backend(\"qasm_simulator\")'",
    "'QuantumRegister(3)'",
    "'ClassicalRegister(3)'",
    "'QuantumCircuit(qreg,creg)'",
    "'circuit.h(0)'",
    "'circuit.h(2)'",
    "'circuit.cx(0,1)'",
    "'circuit.measure([0,1,2],[0,1,2])'",
    "'execute(circuit,simulator,shots=1000)'",
    "'job.result()'",
    "'result.get_counts(circuit)'",
    "'print(counts)'",
}
CIRQ_TUPLES = {
    ("qubit", 'cirq.NamedQubit("myqubit")'),
    ("circuit", "cirq.Circuit(cirq.H(qubit))"),
    ("result", "cirq.Simulator().simulate(circuit)"),
    ("result2", 'cirq.measure(qubit,key="myqubit")'),
}


def _ok(name: str) -> None:
    print(f"PASS: {name}")


def test_extraction_fidelity():
    start = time.perf_counter()
    text = render_introspection(extract_file(corpus_file("execute_workflow.py")))
    elapsed = time.perf_counter() - start
    lines = text.splitlines()
    separator = lines.index("=" * 42)
    assert set(lines[:separator]) == WORKFLOW_TUPLES
    assert set(lines[separator + 1:]) == WORKFLOW_CALLS
    assert elapsed < 1.0
    _ok(f"extraction fidelity (7 binding tuples, 12 call strings, {elapsed * 1000:.0f} ms)")


def test_buggy_fixture_detections():
    mi = diagnostics_for_file(corpus_file("measure_then_entangle.py"))
    assert [(d.detector, d.line) for d in mi] == [("MI", 9), ("MI", 10)]

    pe = diagnostics_for_file(corpus_file("duplicate_layout.py"))
    assert len(pe) == 1
    assert pe[0].pattern_code == "PE.same-physical-qubit"
    assert "12" in pe[0].message

    cm = diagnostics_for_file(corpus_file("pulse_misnamed_method.py"))
    assert [(d.detector, d.line) for d in cm] == [("CM", 5)]
    assert "shiftphase" in cm[0].message

    ce = diagnostics_for_file(corpus_file("tomography_prep_basis.py"))
    assert [(d.detector, d.line) for d in ce] == [("CE", 8)]
    _ok("fixture detections (2 MI / 1 PE naming 12 / 1 CM / 1 CE, nothing else)")


def test_clean_program_check():
    diags = diagnostics_for_file(corpus_file("execute_workflow.py"))
    # golden: the shipped deprecation table flags exactly the execute() call
    assert [(d.detector, d.pattern_code, d.line) for d in diags] == \
        [("DO", "DO.deprecated-method", 11)]
    non_do = diagnostics_for_file(corpus_file("execute_workflow.py"),
                                  enabled=set(DETECTOR_IDS) - {"DO"})
    assert non_do == []
    _ok("clean program (zero findings outside the shipped deprecation table)")


def test_metrics_engine():
    report = EvalReport.from_counts(tp=15, fp=9, fn=2)
    assert report.precision == pytest.approx(0.625, abs=1e-3)
    assert report.recall == pytest.approx(0.882, abs=1e-3)
    assert report.f1 == pytest.approx(0.731, abs=1e-3)
    _ok(f"metrics engine ({report.precision:.3f}/{report.recall:.3f}/{report.f1:.3f})")


def test_corpus_quality_gate():
    report, outcomes, _ = run_corpus(MANIFEST, default_kb())
    assert report.n_files >= 16
    assert report.recall is not None and report.recall >= 0.85
    assert report.precision is not None and report.precision >= 0.60
    assert all(report.per_detector[d] >= 1 for d in DETECTOR_IDS)
    none_fps = sum(o.fp_count for o in outcomes if o.entry.expected_detector == "NONE")
    assert none_fps == 0
    _ok(f"corpus gate (precision {report.precision:.3f}, recall {report.recall:.3f}, "
        f"all detectors fire, zero FP on NONE files)")


def test_performance():
    start = time.perf_counter()
    report, _, _ = run_corpus(MANIFEST, default_kb())
    wall = time.perf_counter() - start
    assert report.mean_time_ms <= 100.0
    assert wall < 5.0
    _ok(f"performance (mean {report.mean_time_ms:.1f} ms/file, corpus in {wall:.2f} s)")


def test_cirq_extendability():
    models = extract_file(corpus_file("cirq_loop_measure.py"))
    assert set(models.attributes.as_tuples()) == CIRQ_TUPLES
    rendered = models.operations.rendered()
    assert "cirq.Simulator().simulate(circuit)" in rendered
    assert "cirq.Simulator()" in rendered
    _ok("cirq extendability (4 binding tuples, nested simulator constructor recorded)")


def test_projectq_limitation_regression():
    models = extract_file(corpus_file("projectq_pipe_ops.py"))
    rendered = models.operations.rendered()
    assert "MainEngine()" in rendered
    assert "All(Measure)" in rendered
    assert all("|" not in call for call in rendered)
    assert not any(call.startswith(("H(", "H |", "CX(", "CX |")) or call in ("H", "CX")
                   for call in rendered)
    assert models.skipped_constructs >= 2
    _ok(f"projectq limitation (pipe statements absent, {models.skipped_constructs} skipped)")


def test_determinism_over_shuffled_corpus():
    files = sorted(str(p) for p in CORPUS.glob("*.py") if p.name != "__init__.py")
    orders = [list(files), list(files)]
    random.Random(7).shuffle(orders[0])
    random.Random(1234).shuffle(orders[1])
    reports = []
    for order in orders:
        proc = subprocess.run(
            [sys.executable, "-m", "qlint", "--format", "json", "--no-timing", *order],
            capture_output=True,
        )
        assert proc.returncode == 1
        reports.append(proc.stdout)
    assert reports[0] == reports[1]
    payload = json.loads(reports[0])
    assert payload["version"] == 1
    _ok("determinism (byte-identical JSON across shuffled runs)")
