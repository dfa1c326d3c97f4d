"""Eight bug-pattern detector families over the extracted program models.

Every detector is a pure function of a :class:`DetectorContext` (the two
extraction models, the import list, the knowledge base, and per-circuit
summaries).  Unknown values disable a check rather than warn: when the
analysis cannot resolve a size, index, or origin, it stays silent.

A variable is considered circuit-typed iff its resolved origin is a
``QuantumCircuit(...)`` construction (directly or through register
arguments); gate-level checks apply only to calls on such receivers.
"""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field

from .extraction import (
    CallRecord,
    ExtractionResult,
    Origin,
    QPAttribute,
    QPOperation,
    UnknownNameError,
    render_canonical,
    resolve_origin,
)
from .frontend import SourceFile, SourceSpan
from .kb import KnowledgeBase

DETECTOR_IDS = ("IG", "MI", "IS", "PE", "CM", "CE", "QE", "DO")

#: Stable pattern codes, one per documented sub-pattern.
CATALOG: dict[str, str] = {
    "IG.unknown-gate": "method on a circuit is neither a known gate nor a circuit method",
    "IG.undefined-custom-gate": "appended custom gate is never defined in the file",
    "IG.not-in-basis": "gate is absent from the basis_gates list given to transpile",
    "MI.measured-control": "measured qubit later used as a control qubit",
    "IS.qubit-index-out-of-range": "qubit index exceeds the declared register size",
    "IS.clbit-index-out-of-range": "classical index exceeds the declared register size",
    "IS.backend-qubit-limit": "circuit measures more qubits than the backend supports",
    "IS.classical-register-too-short": "fewer classical bits than measured qubits",
    "PE.qubit-arity-mismatch": "wrong number of qubit arguments for the gate",
    "PE.non-numeric-angle": "angle parameter has a non-numeric origin",
    "PE.classical-bit-as-qubit": "classical register bit passed where a qubit is required",
    "PE.same-physical-qubit": "two layout entries map to the same physical qubit",
    "PE.coupling-map-not-list": "coupling_map value is not a list of qubit pairs",
    "CM.unknown-module-attribute": "call names a member absent from the module",
    "CM.circuit-not-converted": "circuit appended without to_gate() or decompose()",
    "CM.unused-classical-register": "classical register is bound but never used",
    "CE.unknown-import": "imported symbol is not exported by the package",
    "CE.unknown-backend": "get_backend() names an unknown backend",
    "CE.invalid-preparation-basis": "measurement basis object passed as preparation_basis",
    "QE.missing-qasm-header": "QASM source lacks an OPENQASM version header",
    "QE.non-exportable-instruction": "instruction cannot be exported to QASM for the qasm simulator",
    "DO.deprecated-method": "method has been removed or deprecated",
}

_CIRCUIT_CTOR = "QuantumCircuit"
_QUBIT_REG_CTORS = ("QuantumRegister", "AncillaRegister")
_CLBIT_REG_CTOR = "ClassicalRegister"


@dataclass(frozen=True)
class Diagnostic:
    """One finding: detector id, sub-pattern code, location, message."""

    detector: str
    pattern_code: str
    span: SourceSpan
    message: str
    file: str

    @property
    def line(self) -> int:
        return self.span.start_line

    @property
    def col(self) -> int:
        return self.span.start_col


@dataclass
class CircuitModel:
    """Static summary of one circuit variable."""

    name: str
    declared_qubits: int | None
    declared_clbits: int | None
    measured_qubits: dict[int, int] = field(default_factory=dict)  # qubit -> record ordinal
    used_qubit_indices: set[int] = field(default_factory=set)
    has_measure: bool = False
    measure_unknown: bool = False
    first_measure_ordinal: int | None = None
    binding_span: SourceSpan | None = None


@dataclass
class DetectorContext:
    file: SourceFile
    models: ExtractionResult
    kb: KnowledgeBase
    circuits: dict[str, CircuitModel]

    @property
    def attrs(self) -> QPAttribute:
        return self.models.attributes

    @property
    def ops(self) -> QPOperation:
        return self.models.operations


# --------------------------------------------------------------------------
# origin helpers

def _origin(attrs: QPAttribute, name: str, at_index: int) -> Origin | None:
    try:
        return resolve_origin(name, attrs, at_index)
    except UnknownNameError:
        return None


def _call_path(node: ast.expr) -> str | None:
    """Dotted path of a call's callee when it is a pure name chain."""
    if not isinstance(node, ast.Call):
        return None
    parts: list[str] = []
    cur: ast.expr = node.func
    while isinstance(cur, ast.Attribute):
        parts.append(cur.attr)
        cur = cur.value
    if not isinstance(cur, ast.Name):
        return None
    parts.append(cur.id)
    return ".".join(reversed(parts))


def _origin_ctor(origin: Origin | None) -> str | None:
    """Last path segment of the origin's constructor call, if it is one."""
    if origin is None or origin.node is None:
        return None
    path = _call_path(origin.node)
    if path is None:
        return None
    return path.rpartition(".")[2]


def _value_origin(attrs: QPAttribute, node: ast.expr, at_index: int) -> tuple[ast.expr | None, int]:
    """Chase a name back to the expression it was bound to.

    Returns the final expression node and the binding horizon at which its
    own names resolve; (None, _) when the origin is unknown.
    """
    if isinstance(node, ast.Name):
        origin = _origin(attrs, node.id, at_index)
        if origin is None or origin.node is None or origin.cycle:
            return None, at_index
        return origin.node, at_index
    return node, at_index


def _const_value(attrs: QPAttribute, node: ast.expr, at_index: int):
    """Literal value of an expression, chasing name origins; None if unknown."""
    target, _ = _value_origin(attrs, node, at_index)
    if target is None:
        return None
    if isinstance(target, ast.Constant):
        return target.value
    if isinstance(target, ast.UnaryOp) and isinstance(target.op, (ast.USub, ast.UAdd)) \
            and isinstance(target.operand, ast.Constant):
        value = target.operand.value
        if isinstance(value, (int, float, complex)) and not isinstance(value, bool):
            return -value if isinstance(target.op, ast.USub) else value
    return None


def _const_int(attrs: QPAttribute, node: ast.expr, at_index: int) -> int | None:
    value = _const_value(attrs, node, at_index)
    if isinstance(value, bool) or not isinstance(value, int):
        return None
    return value


def _subscript_index(node: ast.expr) -> int | None:
    if isinstance(node, ast.Subscript) and isinstance(node.slice, ast.Constant) \
            and isinstance(node.slice.value, int) and not isinstance(node.slice.value, bool):
        return node.slice.value
    return None


def _index_value(attrs: QPAttribute, node: ast.expr, at_index: int) -> int | None:
    """A qubit/clbit index argument: plain integer or ``reg[i]`` subscript."""
    direct = _const_int(attrs, node, at_index)
    if direct is not None:
        return direct
    return _subscript_index(node)


def _index_values(attrs: QPAttribute, node: ast.expr, at_index: int) -> list[int] | None:
    """Index arguments that may broadcast: int, reg[i], or a literal list."""
    target, _ = _value_origin(attrs, node, at_index)
    if target is None:
        return None
    if isinstance(target, (ast.List, ast.Tuple)):
        values = []
        for elt in target.elts:
            value = _index_value(attrs, elt, at_index)
            if value is None:
                return None
            values.append(value)
        return values
    single = _index_value(attrs, target, at_index)
    return None if single is None else [single]


def _is_circuit_var(ctx: DetectorContext, name: str | None, at_index: int) -> bool:
    if not name:
        return False
    return _origin_ctor(_origin(ctx.attrs, name, at_index)) == _CIRCUIT_CTOR


def _register_size(attrs: QPAttribute, call: ast.Call, at_index: int) -> int | None:
    for kw in call.keywords:
        if kw.arg == "size":
            return _const_int(attrs, kw.value, at_index)
    if call.args:
        return _const_int(attrs, call.args[0], at_index)
    return None


# --------------------------------------------------------------------------
# circuit models

def build_circuit_model(attrs: QPAttribute, ops: QPOperation,
                        kb: KnowledgeBase | None = None) -> dict[str, CircuitModel]:
    """Summarize every circuit-typed variable in one file.

    Declared sizes come from ``QuantumCircuit(n[, m])`` or from register
    constructions reached through origin tracing; anything non-constant
    leaves the size unknown, which disables size-dependent checks for that
    circuit.  With a knowledge base, gate-call arguments also feed the
    used-qubit-index set.
    """
    circuits: dict[str, CircuitModel] = {}
    for entry in attrs.entries:
        if entry.name in circuits:
            continue
        origin = _origin(attrs, entry.name, entry.binding_index + 1)
        if _origin_ctor(origin) != _CIRCUIT_CTOR or not isinstance(origin.node, ast.Call):
            continue
        qubits, clbits = _circuit_sizes(attrs, origin.node, entry.binding_index)
        circuits[entry.name] = CircuitModel(
            name=entry.name,
            declared_qubits=qubits,
            declared_clbits=clbits,
            binding_span=entry.span,
        )

    for ordinal, record in enumerate(ops.records):
        model = circuits.get(record.receiver or "")
        if model is None:
            continue
        if record.method in ("add_register", "add_bits"):
            # registers attached after construction: stale sizes are worse
            # than unknown ones
            model.declared_qubits = None
            model.declared_clbits = None
        elif record.method == "measure":
            _note_measure(attrs, model, record, ordinal)
        elif record.method in ("measure_all", "measure_active"):
            model.has_measure = True
            if model.first_measure_ordinal is None:
                model.first_measure_ordinal = ordinal
            if model.declared_qubits is not None:
                for q in range(model.declared_qubits):
                    model.measured_qubits.setdefault(q, ordinal)
            else:
                model.measure_unknown = True
        elif kb is not None:
            spec = kb.gate(record.method)
            if spec is not None:
                for arg in _gate_qubit_args(record, spec.angle_params):
                    values = _index_values(attrs, arg.node, record.binding_horizon)
                    model.used_qubit_indices.update(v for v in values or [] if v >= 0)

    for model in circuits.values():
        if model.declared_qubits is not None:
            model.measured_qubits = {
                q: o for q, o in model.measured_qubits.items() if 0 <= q < model.declared_qubits
            }
    return circuits


def _circuit_sizes(attrs: QPAttribute, call: ast.Call, at_index: int) -> tuple[int | None, int | None]:
    qubits = 0
    clbits = 0
    saw_qubits = False
    saw_clbits = False
    int_args = 0
    for arg in call.args:
        value = _const_int(attrs, arg, at_index)
        if value is not None:
            int_args += 1
            if int_args == 1:
                qubits += value
                saw_qubits = True
            elif int_args == 2:
                clbits += value
                saw_clbits = True
            else:
                return None, None
            continue
        target, _ = _value_origin(attrs, arg, at_index)
        ctor = _call_path(target) if target is not None else None
        ctor = ctor.rpartition(".")[2] if ctor else None
        if ctor in _QUBIT_REG_CTORS and isinstance(target, ast.Call):
            size = _register_size(attrs, target, at_index)
            if size is None:
                return None, clbits if saw_clbits else None
            qubits += size
            saw_qubits = True
        elif ctor == _CLBIT_REG_CTOR and isinstance(target, ast.Call):
            size = _register_size(attrs, target, at_index)
            if size is None:
                return qubits if saw_qubits else None, None
            clbits += size
            saw_clbits = True
        else:
            return None, None
    return (qubits if saw_qubits else None), (clbits if saw_clbits else None)


def _note_measure(attrs: QPAttribute, model: CircuitModel, record: CallRecord, ordinal: int) -> None:
    model.has_measure = True
    if model.first_measure_ordinal is None:
        model.first_measure_ordinal = ordinal
    if not record.positional_args:
        model.measure_unknown = True
        return
    arg = record.positional_args[0]
    target, _ = _value_origin(attrs, arg.node, record.binding_horizon)
    ctor = _call_path(target) if target is not None else None
    ctor = ctor.rpartition(".")[2] if ctor else None
    if ctor in _QUBIT_REG_CTORS and isinstance(target, ast.Call):
        size = _register_size(attrs, target, record.binding_horizon)
        if size is None:
            model.measure_unknown = True
            return
        for q in range(size):
            model.measured_qubits.setdefault(q, ordinal)
            model.used_qubit_indices.add(q)
        return
    values = _index_values(attrs, arg.node, record.binding_horizon)
    if values is None:
        model.measure_unknown = True
        return
    for q in values:
        model.measured_qubits.setdefault(q, ordinal)
        model.used_qubit_indices.add(q)


def build_context(file: SourceFile, models: ExtractionResult, kb: KnowledgeBase) -> DetectorContext:
    circuits = build_circuit_model(models.attributes, models.operations, kb)
    return DetectorContext(file=file, models=models, kb=kb, circuits=circuits)


# --------------------------------------------------------------------------
# detectors

def _diag(ctx: DetectorContext, detector: str, code: str, span: SourceSpan, message: str) -> Diagnostic:
    return Diagnostic(detector=detector, pattern_code=code, span=span, message=message, file=ctx.file.path)


def _gate_qubit_args(record: CallRecord, angle_params: int):
    return record.positional_args[angle_params:]


def detect_IG(ctx: DetectorContext) -> list[Diagnostic]:
    """Incorrect gate use: unknown methods, undefined custom gates, basis misses."""
    out: list[Diagnostic] = []
    known_methods = ctx.kb.circuit_methods()
    basis_by_circuit: dict[str, frozenset[str]] = {}
    for record in ctx.ops.records:
        if record.method != "transpile":
            continue
        basis = None
        for kw in record.keyword_args:
            if kw.name == "basis_gates":
                target, _ = _value_origin(ctx.attrs, kw.node, record.binding_horizon)
                if isinstance(target, (ast.List, ast.Tuple)) and all(
                    isinstance(e, ast.Constant) and isinstance(e.value, str) for e in target.elts
                ):
                    basis = frozenset(e.value for e in target.elts)
        if basis is None or not record.positional_args:
            continue
        node = record.positional_args[0].node
        if isinstance(node, ast.Name):
            basis_by_circuit[node.id] = basis

    has_gate_facts = bool(ctx.kb.gates) or bool(known_methods)
    for record in ctx.ops.records:
        if not _is_circuit_var(ctx, record.receiver, record.binding_horizon):
            continue
        spec = ctx.kb.gate(record.method)
        if spec is None and has_gate_facts and record.method not in known_methods:
            out.append(_diag(ctx, "IG", "IG.unknown-gate", record.span,
                             f"'{record.callee_path}' is not a recognized gate or circuit method"))
            continue
        if record.method == "append" and record.positional_args:
            node = record.positional_args[0].node
            if isinstance(node, ast.Name) and node.id not in ctx.models.defined_names:
                out.append(_diag(ctx, "IG", "IG.undefined-custom-gate", record.span,
                                 f"custom gate '{node.id}' is appended but never defined in this file"))
        basis = basis_by_circuit.get(record.receiver or "")
        if basis and spec is not None and spec.kind == "gate" and record.method not in basis:
            listed = ",".join(sorted(basis))
            out.append(_diag(ctx, "IG", "IG.not-in-basis", record.span,
                             f"gate '{record.method}' is not among the basis gates [{listed}]"))
    return out


def detect_MI(ctx: DetectorContext) -> list[Diagnostic]:
    """Measurement misuse: a measured qubit reused as a control qubit."""
    out: list[Diagnostic] = []
    for name, model in ctx.circuits.items():
        if not model.measured_qubits:
            continue
        for ordinal, record in enumerate(ctx.ops.records):
            if record.receiver != name:
                continue
            spec = ctx.kb.gate(record.method)
            if spec is None or spec.kind != "gate" or not spec.control_positions:
                continue
            if spec.qubit_arity is not None and spec.qubit_arity < 2:
                continue
            qargs = _gate_qubit_args(record, spec.angle_params)
            for position in spec.control_positions:
                if position >= len(qargs):
                    continue
                qubit = _index_value(ctx.attrs, qargs[position].node, record.binding_horizon)
                if qubit is None:
                    continue
                measured_at = model.measured_qubits.get(qubit)
                if measured_at is not None and measured_at < ordinal:
                    out.append(_diag(ctx, "MI", "MI.measured-control", record.span,
                                     f"qubit {qubit} of '{name}' was measured and is used here "
                                     f"as a control qubit in '{record.call_rendered}'"))
    return out


def detect_IS(ctx: DetectorContext) -> list[Diagnostic]:
    """Initialization too small for the program's qubit/clbit usage."""
    out: list[Diagnostic] = []
    rendered_calls = {record.call_rendered for record in ctx.ops.records}

    for name, model in ctx.circuits.items():
        for record in ctx.ops.records:
            if record.receiver != name:
                continue
            if record.method == "measure":
                out.extend(_measure_index_diags(ctx, model, record))
                continue
            spec = ctx.kb.gate(record.method)
            if spec is None or model.declared_qubits is None:
                continue
            for arg in _gate_qubit_args(record, spec.angle_params):
                values = _index_values(ctx.attrs, arg.node, record.binding_horizon)
                bad = [v for v in values or [] if v >= model.declared_qubits]
                if bad:
                    out.append(_diag(ctx, "IS", "IS.qubit-index-out-of-range", record.span,
                                     f"qubit index {bad[0]} is out of range for circuit '{name}' "
                                     f"with {model.declared_qubits} qubits"))

        if model.declared_clbits is not None and not model.measure_unknown \
                and len(model.measured_qubits) > model.declared_clbits:
            # report at the measure record where the classical register overflows
            first_ordinals = sorted(model.measured_qubits.values())
            overflow = first_ordinals[model.declared_clbits]
            out.append(_diag(
                ctx, "IS", "IS.classical-register-too-short",
                ctx.ops.records[overflow].span,
                f"circuit '{name}' measures {len(model.measured_qubits)} qubits but declares "
                f"only {model.declared_clbits} classical bits"))

        if model.has_measure and model.declared_qubits is not None:
            for limit in ctx.kb.limits:
                if limit.backend_pattern not in rendered_calls:
                    continue
                if model.declared_qubits >= limit.max_qubits:
                    span = _measure_span(ctx, name) or model.binding_span
                    if span is not None:
                        out.append(_diag(
                            ctx, "IS", "IS.backend-qubit-limit", span,
                            f"circuit '{name}' uses {model.declared_qubits} qubits but backend "
                            f"{limit.backend_pattern} supports fewer than {limit.max_qubits} "
                            f"for measurement"))
    return out


def _measure_index_diags(ctx: DetectorContext, model: CircuitModel, record: CallRecord) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    if model.declared_qubits is not None and record.positional_args:
        values = _index_values(ctx.attrs, record.positional_args[0].node, record.binding_horizon)
        bad = [v for v in values or [] if v >= model.declared_qubits]
        if bad:
            out.append(_diag(ctx, "IS", "IS.qubit-index-out-of-range", record.span,
                             f"qubit index {bad[0]} is out of range for circuit '{model.name}' "
                             f"with {model.declared_qubits} qubits"))
    if model.declared_clbits is not None and len(record.positional_args) > 1:
        values = _index_values(ctx.attrs, record.positional_args[1].node, record.binding_horizon)
        bad = [v for v in values or [] if v >= model.declared_clbits]
        if bad:
            out.append(_diag(ctx, "IS", "IS.clbit-index-out-of-range", record.span,
                             f"classical index {bad[0]} is out of range for circuit '{model.name}' "
                             f"with {model.declared_clbits} classical bits"))
    return out


def _measure_span(ctx: DetectorContext, circuit: str) -> SourceSpan | None:
    for record in ctx.ops.records:
        if record.receiver == circuit and record.method in ("measure", "measure_all", "measure_active"):
            return record.span
    return None


def detect_PE(ctx: DetectorContext) -> list[Diagnostic]:
    """Parameter errors: arity, angle types, classical bits, layouts, coupling maps."""
    out: list[Diagnostic] = []
    for record in ctx.ops.records:
        for kw in record.keyword_args:
            if kw.name != "coupling_map":
                continue
            target, _ = _value_origin(ctx.attrs, kw.node, record.binding_horizon)
            if target is None:
                continue  # unknown origin: stay silent
            if not isinstance(target, (ast.List, ast.Tuple)):
                out.append(_diag(ctx, "PE", "PE.coupling-map-not-list", record.span,
                                 f"coupling_map must be a list of qubit pairs, got '{kw.rendered}'"))

        if not _is_circuit_var(ctx, record.receiver, record.binding_horizon):
            continue
        spec = ctx.kb.gate(record.method)
        if spec is None:
            continue
        qargs = _gate_qubit_args(record, spec.angle_params)
        if spec.qubit_arity is not None and len(qargs) != spec.qubit_arity:
            out.append(_diag(ctx, "PE", "PE.qubit-arity-mismatch", record.span,
                             f"'{record.method}' takes {spec.qubit_arity} qubit argument(s) "
                             f"but got {len(qargs)} in '{record.call_rendered}'"))
        for position in range(min(spec.angle_params, len(record.positional_args))):
            arg = record.positional_args[position]
            value = _const_value(ctx.attrs, arg.node, record.binding_horizon)
            target, _ = _value_origin(ctx.attrs, arg.node, record.binding_horizon)
            non_numeric_literal = isinstance(target, (ast.List, ast.Tuple, ast.Dict, ast.Set))
            if value is not None and (isinstance(value, bool) or not isinstance(value, (int, float, complex))):
                non_numeric_literal = True
            if non_numeric_literal:
                out.append(_diag(ctx, "PE", "PE.non-numeric-angle", record.span,
                                 f"angle parameter {position + 1} of '{record.method}' resolves to "
                                 f"'{arg.resolved}', which is not numeric"))
        if spec.kind != "gate":
            continue  # measure/barrier/reset legitimately take classical operands
        for arg in qargs:
            base = None
            if isinstance(arg.node, ast.Subscript) and isinstance(arg.node.value, ast.Name):
                base = arg.node.value.id
            elif isinstance(arg.node, ast.Name):
                base = arg.node.id
            if base is None:
                continue
            if _origin_ctor(_origin(ctx.attrs, base, record.binding_horizon)) == _CLBIT_REG_CTOR:
                out.append(_diag(ctx, "PE", "PE.classical-bit-as-qubit", record.span,
                                 f"classical bit '{arg.rendered}' is used as a qubit argument "
                                 f"of '{record.method}'"))

    for entry in ctx.attrs.entries:
        if not isinstance(entry.value_node, ast.Dict) or "layout" not in entry.name.lower():
            continue
        by_value: dict[int, list[str]] = {}
        for key, value in zip(entry.value_node.keys, entry.value_node.values):
            if key is None or not isinstance(value, ast.Constant):
                continue
            if isinstance(value.value, bool) or not isinstance(value.value, int):
                continue
            by_value.setdefault(value.value, []).append(render_canonical(key))
        for physical, keys in by_value.items():
            if len(keys) >= 2:
                out.append(_diag(ctx, "PE", "PE.same-physical-qubit", entry.span,
                                 f"physical qubit {physical} is assigned to both '{keys[0]}' and "
                                 f"'{keys[1]}' in '{entry.name}'"))
    return out


def detect_CM(ctx: DetectorContext) -> list[Diagnostic]:
    """Command misuse: wrong module members, raw circuit nesting, dead registers."""
    out: list[Diagnostic] = []
    for record in ctx.ops.records:
        if "." in record.callee_path:
            root, _, _ = record.callee_path.partition(".")
            api = ctx.kb.module_api(root)
            if api is not None and root not in ctx.attrs.index and root != _CIRCUIT_CTOR:
                member = record.callee_path.split(".")[1]
                if member not in api.attributes:
                    out.append(_diag(ctx, "CM", "CM.unknown-module-attribute", record.span,
                                     f"'{record.callee_path}' is not a member of module '{root}'"))
        if record.method == "append" and record.positional_args \
                and _is_circuit_var(ctx, record.receiver, record.binding_horizon):
            node = record.positional_args[0].node
            if isinstance(node, ast.Name) and _is_circuit_var(ctx, node.id, record.binding_horizon):
                converted = any(
                    other.callee_path in (f"{node.id}.to_gate", f"{node.id}.decompose")
                    for other in ctx.ops.records
                )
                if not converted:
                    out.append(_diag(ctx, "CM", "CM.circuit-not-converted", record.span,
                                     f"circuit '{node.id}' is appended directly; convert it with "
                                     f"to_gate() or decompose() first"))

    for entry in ctx.attrs.entries:
        origin = _origin(ctx.attrs, entry.name, entry.binding_index + 1)
        if _origin_ctor(origin) != _CLBIT_REG_CTOR:
            continue
        if not _referenced_later(ctx, entry.name, entry.binding_index):
            out.append(_diag(ctx, "CM", "CM.unused-classical-register", entry.span,
                             f"classical register '{entry.name}' is never used"))
    return out


_STRING_RE = re.compile(r'"(?:\\.|[^"\\])*"')


def _referenced_later(ctx: DetectorContext, name: str, binding_index: int) -> bool:
    word = re.compile(rf"\b{re.escape(name)}\b")
    for record in ctx.ops.records:
        if record.binding_horizon <= binding_index:
            continue
        if word.search(_STRING_RE.sub('""', record.call_rendered)):
            return True
    for entry in ctx.attrs.entries:
        if entry.binding_index <= binding_index or entry.name == name:
            continue
        if word.search(_STRING_RE.sub('""', entry.value_rendered)):
            return True
    return False


def detect_CE(ctx: DetectorContext) -> list[Diagnostic]:
    """Call errors: bad imports, unknown backends, invalid basis bindings."""
    out: list[Diagnostic] = []
    for imp in ctx.models.imports:
        if not imp.is_from or imp.level != 0 or imp.module is None:
            continue
        exported = ctx.kb.known_imports.get(imp.module)
        if exported is None:
            continue  # package not in the KB: no opinion
        for name, _alias in imp.names:
            if name != "*" and name not in exported:
                out.append(_diag(ctx, "CE", "CE.unknown-import", imp.span,
                                 f"cannot import '{name}' from '{imp.module}'"))

    for record in ctx.ops.records:
        if record.method == "get_backend" and record.positional_args and ctx.kb.backend_names:
            value = _const_value(ctx.attrs, record.positional_args[0].node, record.binding_horizon)
            if isinstance(value, str) and value not in ctx.kb.backend_names:
                out.append(_diag(ctx, "CE", "CE.unknown-backend", record.span,
                                 f"unknown backend name '{value}'"))
        for kw in record.keyword_args:
            if kw.name != "preparation_basis":
                continue
            if kw.rendered == "PauliMeasurementBasis()" or kw.resolved == "PauliMeasurementBasis()":
                span = kw.span if isinstance(kw.node, ast.Call) else record.span
                if isinstance(kw.node, ast.Name):
                    entry = ctx.attrs.latest_before(kw.node.id, record.binding_horizon)
                    if entry is not None:
                        span = entry.span
                out.append(_diag(ctx, "CE", "CE.invalid-preparation-basis", span,
                                 "PauliMeasurementBasis() is a measurement basis and is invalid "
                                 "as preparation_basis"))
    return out


_QASM_HEADER_RE = re.compile(r"\s*OPENQASM\s+\d")


def detect_QE(ctx: DetectorContext) -> list[Diagnostic]:
    """QASM issues: header-less from_qasm_str input, non-exportable instructions."""
    out: list[Diagnostic] = []
    for record in ctx.ops.records:
        if record.method != "from_qasm_str" or not record.positional_args:
            continue
        value = _const_value(ctx.attrs, record.positional_args[0].node, record.binding_horizon)
        if isinstance(value, str) and not _QASM_HEADER_RE.match(value):
            out.append(_diag(ctx, "QE", "QE.missing-qasm-header", record.span,
                             "string passed to from_qasm_str() lacks an OPENQASM version header"))

    qasm_backend = False
    for record in ctx.ops.records:
        if record.method != "get_backend" or not record.positional_args:
            continue
        value = _const_value(ctx.attrs, record.positional_args[0].node, record.binding_horizon)
        if isinstance(value, str) and value.endswith("qasm_simulator"):
            qasm_backend = True
            break
    if not qasm_backend:
        return out
    executed: set[str] = set()
    for record in ctx.ops.records:
        if record.method in ("run", "execute", "assemble") and record.positional_args:
            node = record.positional_args[0].node
            if isinstance(node, ast.Name):
                executed.add(node.id)
    for name in executed:
        if name not in ctx.circuits:
            continue
        for record in ctx.ops.records:
            if record.receiver == name and record.method in ctx.kb.non_qasm_exportable:
                out.append(_diag(ctx, "QE", "QE.non-exportable-instruction", record.span,
                                 f"'{record.method}' cannot be exported to QASM for the "
                                 f"qasm simulator"))
    return out


def detect_DO(ctx: DetectorContext) -> list[Diagnostic]:
    """Deprecated or removed methods, with replacement suggestions."""
    out: list[Diagnostic] = []
    for record in ctx.ops.records:
        entry = ctx.kb.deprecation_for(record.callee_path)
        if entry is None:
            continue
        message = f"'{record.callee_path}' is deprecated"
        if entry.replacement:
            message += f"; use {entry.replacement}"
        if entry.note:
            message += f" ({entry.note})"
        out.append(_diag(ctx, "DO", "DO.deprecated-method", record.span, message))
    return out


DETECTORS = {
    "IG": detect_IG,
    "MI": detect_MI,
    "IS": detect_IS,
    "PE": detect_PE,
    "CM": detect_CM,
    "CE": detect_CE,
    "QE": detect_QE,
    "DO": detect_DO,
}


def run_detectors(ctx: DetectorContext, enabled: set[str] | None = None) -> list[Diagnostic]:
    """Union of the enabled detectors' findings, deterministically sorted."""
    active = set(DETECTOR_IDS) if enabled is None else set(enabled)
    findings: list[Diagnostic] = []
    for detector_id, detector in DETECTORS.items():
        if detector_id in active:
            findings.extend(detector(ctx))
    findings.sort(key=lambda d: (d.file, d.span.start_line, d.span.start_col,
                                 d.detector, d.pattern_code, d.message))
    return findings
