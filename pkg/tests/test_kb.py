from __future__ import annotations

import pytest

from helpers import default_kb
from qlint.kb import KBError, dump_kb, load_kb, parse_kb


def test_default_gate_table_facts():
    kb = default_kb()
    cx = kb.gate("cx")
    assert cx.qubit_arity == 2
    assert cx.control_positions == (0,)
    assert cx.kind == "gate"
    ccx = kb.gate("ccx")
    assert ccx.qubit_arity == 3
    assert ccx.control_positions == (0, 1)
    assert kb.gate("h").qubit_arity == 1
    assert kb.gate("h").angle_params == 0
    assert kb.gate("rx").angle_params == 1
    assert kb.gate("u").angle_params == 3
    assert kb.gate("cswap").qubit_arity == 3
    assert kb.gate("cswap").control_positions == (0,)
    assert kb.gate("measure").qubit_arity is None  # variadic
    assert kb.gate("measure").kind == "op"
    assert kb.gate("nonexistent_gate") is None


def test_default_backend_limits():
    kb = default_kb()
    limits = {l.backend_pattern: l.max_qubits for l in kb.limits}
    assert limits['Aer.get_backend("qasm_simulator")'] == 30
    assert limits['BasicAer.get_backend("qasm_simulator")'] == 24


def test_default_kb_wires_the_other_tables():
    kb = default_kb()
    assert kb.deprecation_for("execute") is not None
    assert "shift_phase" in kb.module_api("pulse").attributes
    assert "shiftphase" not in kb.module_api("pulse").attributes
    assert "QuantumCircuit" in kb.known_imports["qiskit"]
    assert "qasm_simulator" in kb.backend_names
    assert "save_statevector" in kb.non_qasm_exportable
    assert "append" in kb.circuit_methods()


def test_load_dump_roundtrip():
    kb = default_kb()
    assert parse_kb(dump_kb(kb)) == kb


def test_empty_file_gives_empty_kb():
    kb = parse_kb("")
    assert kb.gates == {}
    assert kb.limits == ()
    assert kb.deprecations == ()
    assert kb.modules == {}
    assert kb.known_imports == {}
    assert kb.backend_names == frozenset()
    assert kb.non_qasm_exportable == frozenset()


def test_comments_and_blank_lines_ignored():
    kb = parse_kb("# heading\n\n[gates]\nh 1 0 - gate  # hadamard\n")
    assert kb.gate("h").qubit_arity == 1


def test_duplicate_gate_is_an_error():
    with pytest.raises(KBError) as err:
        parse_kb("[gates]\nh 1 0 - gate\nh 1 0 - gate\n", path="dup.kb")
    assert err.value.line == 3


def test_duplicate_backend_pattern_is_an_error():
    text = '[backend_limits]\nAer.get_backend("x") 3\nAer.get_backend("x") 4\n'
    with pytest.raises(KBError):
        parse_kb(text)


@pytest.mark.parametrize("text,line", [
    ("[nonsense]\n", 1),
    ("h 1 0 - gate\n", 1),                    # record before a section
    ("[gates]\nh one 0 - gate\n", 2),
    ("[gates]\nh 1 0 - gadget\n", 2),
    ("[gates]\nh 0 0 - gate\n", 2),           # gates take at least one qubit
    ("[gates]\ncx 2 0 5 gate\n", 2),          # control position out of range
    ("[backend_limits]\npattern\n", 2),
    ("[deprecated]\nexecute\n", 2),
    ("[modules]\npulse\n", 2),
])
def test_format_errors_carry_line_numbers(text, line):
    with pytest.raises(KBError) as err:
        parse_kb(text, path="bad.kb")
    assert err.value.line == line


def test_deprecation_suffix_matching():
    kb = parse_kb("[deprecated]\nu1 QuantumCircuit.p renamed\nexecute - gone\n")
    assert kb.deprecation_for("qc.u1").replacement == "QuantumCircuit.p"
    assert kb.deprecation_for("execute").replacement == ""
    assert kb.deprecation_for("qc.u11") is None
    assert kb.deprecation_for("u1.extra") is None


def test_load_kb_from_path(tmp_path):
    target = tmp_path / "mini.kb"
    target.write_text("[gates]\nzz 2 1 - gate\n", encoding="utf-8")
    kb = load_kb(target)
    assert kb.gate("zz").angle_params == 1
