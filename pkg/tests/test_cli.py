from __future__ import annotations

import json

import pytest

from helpers import CORPUS, MANIFEST, corpus_file, default_kb
from qlint.cli import main
from qlint.kb import default_kb_path, dump_kb


@pytest.fixture()
def no_do_kb(tmp_path):
    """Default KB with the deprecation table emptied."""
    text = dump_kb(default_kb())
    start = text.index("[deprecated]")
    end = text.index("[modules]")
    target = tmp_path / "no_do.kb"
    target.write_text(text[:start] + "[deprecated]\n" + text[end:], encoding="utf-8")
    return str(target)


def test_clean_workflow_exits_zero_with_emptied_do_table(no_do_kb, capsys):
    code = main(["--kb", no_do_kb, str(corpus_file("execute_workflow.py"))])
    assert code == 0
    assert "0 diagnostics" in capsys.readouterr().out


def test_workflow_default_kb_reports_the_deprecated_call(capsys):
    code = main([str(corpus_file("execute_workflow.py"))])
    assert code == 1
    out = capsys.readouterr().out
    assert ":11:" in out and "[DO/DO.deprecated-method]" in out


def test_teleport_fixture_exits_one_with_two_mi_lines(capsys):
    code = main([str(corpus_file("measure_then_entangle.py"))])
    assert code == 1
    out = capsys.readouterr().out
    assert out.count("[MI/MI.measured-control]") == 2


def test_detector_filter_hides_other_findings(capsys):
    code = main(["--detectors", "MI", str(corpus_file("duplicate_layout.py"))])
    assert code == 0
    assert "0 diagnostics" in capsys.readouterr().out


def test_unknown_detector_id_is_usage_error(capsys):
    code = main(["--detectors", "XX", str(corpus_file("duplicate_layout.py"))])
    assert code == 2
    assert "unknown detector" in capsys.readouterr().err


def test_no_paths_is_usage_error(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().err.lower()


def test_missing_input_exits_two(capsys):
    assert main(["definitely_missing_file.py"]) == 2


def test_syntax_error_forces_exit_two_but_others_still_reported(tmp_path, capsys):
    broken = tmp_path / "broken.py"
    broken.write_text("circuit.h(0", encoding="utf-8")
    buggy = tmp_path / "buggy.py"
    buggy.write_text("qc = QuantumCircuit(2)\nqc.cx(0)\n", encoding="utf-8")
    code = main([str(broken), str(buggy)])
    assert code == 2
    out = capsys.readouterr().out
    assert "syntax error" in out
    assert "PE.qubit-arity-mismatch" in out


def test_kb_load_failure_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.kb"
    bad.write_text("[gates]\nh one 0 - gate\n", encoding="utf-8")
    code = main(["--kb", str(bad), str(corpus_file("clean_bell.py"))])
    assert code == 2
    assert "knowledge base" in capsys.readouterr().err


def test_env_kb_is_lower_precedence_than_flag(tmp_path, monkeypatch, capsys):
    empty = tmp_path / "empty.kb"
    empty.write_text("", encoding="utf-8")
    monkeypatch.setenv("QLINT_KB", str(empty))
    # the env KB (no deprecation table) applies when no flag is given
    assert main([str(corpus_file("execute_workflow.py"))]) == 0
    capsys.readouterr()
    # an explicit --kb beats the environment
    assert main(["--kb", str(default_kb_path()), str(corpus_file("execute_workflow.py"))]) == 1


def test_json_format_and_output_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code = main(["--format", "json", "--output", str(target),
                 str(corpus_file("measure_then_entangle.py"))])
    assert code == 1
    payload = json.loads(target.read_text(encoding="utf-8"))
    assert payload["version"] == 1
    assert len(payload["files"][0]["diagnostics"]) == 2


def test_directory_run_discovers_recursively(capsys):
    code = main(["--detectors", "MI", str(CORPUS)])
    assert code == 1
    out = capsys.readouterr().out
    assert out.count("[MI/") == 2  # only the teleport fixture fires MI


def test_list_detectors(capsys):
    assert main(["--list-detectors"]) == 0
    out = capsys.readouterr().out
    for detector in ("IG", "MI", "IS", "PE", "CM", "CE", "QE", "DO"):
        assert detector in out
    assert "PE.same-physical-qubit" in out


def test_introspect_workflow(capsys):
    code = main(["--introspect", str(corpus_file("execute_workflow.py"))])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "('simulator', 'Aer.get_backend(\"qasm_simulator\")')"
    assert "=" * 42 in lines
    assert lines[-1] == "'print(counts)'"


def test_introspect_multiple_files_carry_path_headers(capsys):
    code = main(["--introspect", str(corpus_file("execute_workflow.py")),
                 str(corpus_file("cirq_loop_measure.py"))])
    assert code == 0
    out = capsys.readouterr().out
    assert out.count("# ") == 2
    assert "execute_workflow.py" in out and "cirq_loop_measure.py" in out


def test_introspect_syntax_error_exits_two(tmp_path, capsys):
    broken = tmp_path / "broken.py"
    broken.write_text("circuit.h(0", encoding="utf-8")
    assert main(["--introspect", str(broken)]) == 2
    assert "syntax error" in capsys.readouterr().err


def test_eval_subcommand_text(capsys):
    assert main(["eval", str(MANIFEST)]) == 0
    out = capsys.readouterr().out
    assert "tp: 21  fp: 0  fn: 0" in out


def test_eval_subcommand_json(capsys):
    assert main(["eval", str(MANIFEST), "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["tp"] == 21
    assert payload["per_detector"]["PE"] == 5


def test_eval_output_file(tmp_path, capsys):
    target = tmp_path / "eval.json"
    assert main(["eval", str(MANIFEST), "--format", "json", "--output", str(target)]) == 0
    payload = json.loads(target.read_text(encoding="utf-8"))
    assert payload["fn"] == 0


def test_eval_bad_manifest_exits_two(tmp_path, capsys):
    manifest = tmp_path / "m.txt"
    manifest.write_text("x.py NOPE\n", encoding="utf-8")
    assert main(["eval", str(manifest)]) == 2
    assert "eval failed" in capsys.readouterr().err


def test_jobs_flag_accepted(capsys):
    assert main(["--jobs", "2", "--detectors", "MI",
                 str(corpus_file("measure_then_entangle.py")),
                 str(corpus_file("duplicate_layout.py"))]) == 1
