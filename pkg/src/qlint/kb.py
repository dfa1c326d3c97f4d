"""Declarative knowledge base: framework API facts the detectors consult.

The KB is loaded from a line-oriented text file so the fact tables can be
edited without touching code.  Grammar (one record per line, ``#`` starts
a comment, blank lines ignored):

    [gates]          NAME QUBITS ANGLES CONTROLS KIND
    [backend_limits] PATTERN MAX_QUBITS
    [deprecated]     CALLEE REPLACEMENT NOTE...
    [modules]        PATH MEMBER[,MEMBER...]
    [imports]        PACKAGE SYMBOL[,SYMBOL...]
    [backends]       NAME
    [non_qasm]       NAME

``QUBITS`` is a fixed qubit-argument count or ``*`` for variadic;
``ANGLES`` counts leading angle/phase parameters; ``CONTROLS`` lists
control positions among the qubit arguments (comma-separated) or ``-``;
``KIND`` is ``gate`` (unitary) or ``op`` (non-unitary circuit operation).
``MAX_QUBITS`` is an exclusive bound: a backend supporting "fewer than 30"
qubits is recorded as 30.  ``REPLACEMENT`` is ``-`` when there is none.

No detector hardcodes a gate arity, a backend limit, a deprecation, or a
module member set; they all go through lookups on this object.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

_SECTIONS = ("gates", "backend_limits", "deprecated", "modules", "imports", "backends", "non_qasm")


class KBError(ValueError):
    """Malformed knowledge-base file."""

    def __init__(self, path: str, line: int, message: str) -> None:
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


@dataclass(frozen=True)
class GateSpec:
    name: str
    qubit_arity: int | None  # None = variadic
    angle_params: int
    control_positions: tuple[int, ...]
    kind: str  # "gate" | "op"


@dataclass(frozen=True)
class BackendLimit:
    backend_pattern: str  # canonical rendering of the backend expression
    max_qubits: int  # exclusive bound


@dataclass(frozen=True)
class DeprecationEntry:
    callee_path: str
    replacement: str  # empty when there is no replacement
    note: str


@dataclass(frozen=True)
class ModuleApi:
    module_path: str
    attributes: frozenset[str]


@dataclass(frozen=True)
class KnowledgeBase:
    gates: dict[str, GateSpec] = field(default_factory=dict)
    limits: tuple[BackendLimit, ...] = ()
    deprecations: tuple[DeprecationEntry, ...] = ()
    modules: dict[str, ModuleApi] = field(default_factory=dict)
    known_imports: dict[str, frozenset[str]] = field(default_factory=dict)
    backend_names: frozenset[str] = frozenset()
    non_qasm_exportable: frozenset[str] = frozenset()

    def gate(self, name: str) -> GateSpec | None:
        return self.gates.get(name)

    def module_api(self, path: str) -> ModuleApi | None:
        return self.modules.get(path)

    def circuit_methods(self) -> frozenset[str]:
        """Non-gate methods that are legal on a circuit object."""
        api = self.modules.get("QuantumCircuit")
        return api.attributes if api else frozenset()

    def deprecation_for(self, callee_path: str) -> DeprecationEntry | None:
        """Match a call path against the deprecation table, suffix-wise.

        An entry matches when its dotted segments equal the trailing
        segments of ``callee_path`` (so ``u1`` matches ``qc.u1``).
        """
        segments = callee_path.split(".")
        for entry in self.deprecations:
            pattern = entry.callee_path.split(".")
            if segments[-len(pattern):] == pattern:
                return entry
        return None


def _parse_gate(path: str, lineno: int, fields: list[str]) -> GateSpec:
    if len(fields) != 5:
        raise KBError(path, lineno, f"gate rows need 5 fields, got {len(fields)}")
    name, qubits, angles, controls, kind = fields
    if qubits == "*":
        arity: int | None = None
    else:
        try:
            arity = int(qubits)
        except ValueError:
            raise KBError(path, lineno, f"bad qubit count {qubits!r}") from None
        if arity < 1:
            raise KBError(path, lineno, f"gate {name!r} must take at least one qubit")
    try:
        angle_params = int(angles)
    except ValueError:
        raise KBError(path, lineno, f"bad angle count {angles!r}") from None
    if controls == "-":
        positions: tuple[int, ...] = ()
    else:
        try:
            positions = tuple(int(p) for p in controls.split(","))
        except ValueError:
            raise KBError(path, lineno, f"bad control positions {controls!r}") from None
        if arity is not None and any(p < 0 or p >= arity for p in positions):
            raise KBError(path, lineno, f"control positions of {name!r} out of range")
    if kind not in ("gate", "op"):
        raise KBError(path, lineno, f"gate kind must be 'gate' or 'op', got {kind!r}")
    return GateSpec(name, arity, angle_params, positions, kind)


def parse_kb(text: str, path: str = "<kb>") -> KnowledgeBase:
    gates: dict[str, GateSpec] = {}
    limits: list[BackendLimit] = []
    deprecations: list[DeprecationEntry] = []
    modules: dict[str, ModuleApi] = {}
    imports: dict[str, frozenset[str]] = {}
    backends: set[str] = set()
    non_qasm: set[str] = set()
    section: str | None = None

    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SECTIONS:
                raise KBError(path, lineno, f"unknown section {section!r}")
            continue
        if section is None:
            raise KBError(path, lineno, "record before any section header")
        fields = line.split()
        if section == "gates":
            spec = _parse_gate(path, lineno, fields)
            if spec.name in gates:
                raise KBError(path, lineno, f"duplicate gate {spec.name!r}")
            gates[spec.name] = spec
        elif section == "backend_limits":
            if len(fields) != 2:
                raise KBError(path, lineno, "backend_limits rows need PATTERN MAX")
            pattern, raw_max = fields
            try:
                max_qubits = int(raw_max)
            except ValueError:
                raise KBError(path, lineno, f"bad qubit limit {raw_max!r}") from None
            if max_qubits < 1:
                raise KBError(path, lineno, "qubit limit must be >= 1")
            if any(limit.backend_pattern == pattern for limit in limits):
                raise KBError(path, lineno, f"duplicate backend pattern {pattern!r}")
            limits.append(BackendLimit(pattern, max_qubits))
        elif section == "deprecated":
            if len(fields) < 2:
                raise KBError(path, lineno, "deprecated rows need CALLEE REPLACEMENT [NOTE]")
            callee, replacement = fields[0], fields[1]
            note = " ".join(fields[2:])
            deprecations.append(DeprecationEntry(callee, "" if replacement == "-" else replacement, note))
        elif section == "modules":
            if len(fields) != 2:
                raise KBError(path, lineno, "modules rows need PATH MEMBERS")
            members = frozenset(m for m in fields[1].split(",") if m)
            if not members:
                raise KBError(path, lineno, f"module {fields[0]!r} has no members")
            if fields[0] in modules:
                raise KBError(path, lineno, f"duplicate module {fields[0]!r}")
            modules[fields[0]] = ModuleApi(fields[0], members)
        elif section == "imports":
            if len(fields) != 2:
                raise KBError(path, lineno, "imports rows need PACKAGE SYMBOLS")
            if fields[0] in imports:
                raise KBError(path, lineno, f"duplicate package {fields[0]!r}")
            imports[fields[0]] = frozenset(s for s in fields[1].split(",") if s)
        elif section == "backends":
            if len(fields) != 1:
                raise KBError(path, lineno, "backends rows hold a single name")
            backends.add(fields[0])
        elif section == "non_qasm":
            if len(fields) != 1:
                raise KBError(path, lineno, "non_qasm rows hold a single name")
            non_qasm.add(fields[0])

    return KnowledgeBase(
        gates=gates,
        limits=tuple(limits),
        deprecations=tuple(deprecations),
        modules=modules,
        known_imports=imports,
        backend_names=frozenset(backends),
        non_qasm_exportable=frozenset(non_qasm),
    )


def load_kb(path: str | Path) -> KnowledgeBase:
    """Load a knowledge base file; raises :class:`KBError` on format problems."""
    return parse_kb(Path(path).read_text(encoding="utf-8"), str(path))


def dump_kb(kb: KnowledgeBase) -> str:
    """Serialize a KB in the canonical file format (round-trips via parse_kb)."""
    lines = ["[gates]"]
    for spec in kb.gates.values():
        qubits = "*" if spec.qubit_arity is None else str(spec.qubit_arity)
        controls = ",".join(str(p) for p in spec.control_positions) or "-"
        lines.append(f"{spec.name} {qubits} {spec.angle_params} {controls} {spec.kind}")
    lines.append("[backend_limits]")
    for limit in kb.limits:
        lines.append(f"{limit.backend_pattern} {limit.max_qubits}")
    lines.append("[deprecated]")
    for entry in kb.deprecations:
        replacement = entry.replacement or "-"
        lines.append(f"{entry.callee_path} {replacement} {entry.note}".rstrip())
    lines.append("[modules]")
    for api in kb.modules.values():
        lines.append(f"{api.module_path} {','.join(sorted(api.attributes))}")
    lines.append("[imports]")
    for package in kb.known_imports:
        lines.append(f"{package} {','.join(sorted(kb.known_imports[package]))}")
    lines.append("[backends]")
    lines.extend(sorted(kb.backend_names))
    lines.append("[non_qasm]")
    lines.extend(sorted(kb.non_qasm_exportable))
    return "\n".join(lines) + "\n"


def default_kb_path() -> Path:
    return Path(__file__).parent / "data" / "default.kb"


def load_default_kb() -> KnowledgeBase:
    return load_kb(default_kb_path())
