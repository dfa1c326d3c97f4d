"""Tree walker that builds the two program models used by every detector.

From one parsed file it collects:

* ``QPAttribute`` -- every variable binding, in source order, with a
  canonical rendering of the bound expression.  Rebindings are preserved;
  the table doubles as the substrate for origin tracing
  (:func:`resolve_origin`).
* ``QPOperation`` -- every function call in the file, outermost call first
  with nested calls emitted immediately after their enclosing call.

Canonical renderings are deterministic: no space after commas or around
parentheses, string literals double-quoted, keyword arguments as
``name=value``, subscripts as ``base[index]``.

Statements the walker does not model (class definitions, try blocks,
operator-only expression statements such as overloaded ``|`` pipelines)
are skipped silently and counted in the extraction coverage statistic.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass, field

from .frontend import SourceFile, SourceSpan, SyntaxTree, node_span

VALUE_KINDS = ("constant", "name-ref", "call-result", "container", "other")


class UnknownNameError(KeyError):
    """Origin requested for a name with no prior binding."""


# --------------------------------------------------------------------------
# canonical expression rendering

_BIN_OPS = {
    ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.MatMult: "@", ast.Div: "/",
    ast.Mod: "%", ast.Pow: "**", ast.LShift: "<<", ast.RShift: ">>",
    ast.BitOr: "|", ast.BitXor: "^", ast.BitAnd: "&", ast.FloorDiv: "//",
}
_BIN_PREC = {
    ast.BitOr: 7, ast.BitXor: 8, ast.BitAnd: 9, ast.LShift: 10, ast.RShift: 10,
    ast.Add: 11, ast.Sub: 11, ast.Mult: 12, ast.MatMult: 12, ast.Div: 12,
    ast.FloorDiv: 12, ast.Mod: 12, ast.Pow: 14,
}
_UNARY_OPS = {ast.Invert: "~", ast.Not: "not ", ast.UAdd: "+", ast.USub: "-"}
_CMP_OPS = {
    ast.Eq: "==", ast.NotEq: "!=", ast.Lt: "<", ast.LtE: "<=", ast.Gt: ">",
    ast.GtE: ">=", ast.Is: " is ", ast.IsNot: " is not ", ast.In: " in ",
    ast.NotIn: " not in ",
}


def _precedence(node: ast.expr) -> int:
    if isinstance(node, ast.Lambda):
        return 1
    if isinstance(node, ast.IfExp):
        return 2
    if isinstance(node, ast.BoolOp):
        return 3 if isinstance(node.op, ast.Or) else 4
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.Not):
        return 5
    if isinstance(node, ast.Compare):
        return 6
    if isinstance(node, ast.BinOp):
        return _BIN_PREC[type(node.op)]
    if isinstance(node, ast.UnaryOp):
        return 13
    return 18


def _quote(text: str) -> str:
    out = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 32 or ord(ch) == 127:
            out.append(f"\\x{ord(ch):02x}")
        else:
            out.append(ch)
    return '"' + "".join(out) + '"'


def _operand(node: ast.expr, min_prec: int) -> str:
    text = render_canonical(node)
    if _precedence(node) < min_prec:
        return f"({text})"
    return text


def _render_slice(node: ast.expr) -> str:
    if isinstance(node, ast.Slice):
        lower = render_canonical(node.lower) if node.lower else ""
        upper = render_canonical(node.upper) if node.upper else ""
        text = f"{lower}:{upper}"
        if node.step is not None:
            text += f":{render_canonical(node.step)}"
        return text
    if isinstance(node, ast.Tuple) and node.elts:
        return ",".join(_render_slice(elt) for elt in node.elts)
    return render_canonical(node)


def _render_comprehension(gen: ast.comprehension) -> str:
    # the iterable and conditions sit where the grammar forbids a bare
    # conditional expression or lambda
    text = f" for {render_canonical(gen.target)} in {_operand(gen.iter, 3)}"
    for cond in gen.ifs:
        text += f" if {_operand(cond, 3)}"
    return text


def _render_fstring(node: ast.JoinedStr) -> str:
    # expression parts of an f-string may not contain backslashes or reuse
    # the enclosing quote; fall back to the stock unparser when they would
    literals: list[str] = []
    expressions: list[str] = []
    pieces: list[tuple[bool, str]] = []
    for value in node.values:
        if isinstance(value, ast.Constant) and isinstance(value.value, str):
            pieces.append((True, value.value))
            literals.append(value.value)
        elif isinstance(value, ast.FormattedValue):
            inner = render_canonical(value.value)
            if value.conversion != -1:
                inner += f"!{chr(value.conversion)}"
            if value.format_spec is not None:
                spec = "".join(
                    v.value if isinstance(v, ast.Constant) else "{" + render_canonical(v.value) + "}"
                    for v in value.format_spec.values
                )
                inner += f":{spec}"
            text = "{" + inner + "}"
            pieces.append((False, text))
            expressions.append(text)
    if any("\\" in text for text in expressions):
        return ast.unparse(node)
    quote = '"'
    if any('"' in text for text in expressions):
        if any("'" in text for text in expressions):
            return ast.unparse(node)
        quote = "'"
    out = ["f", quote]
    for is_literal, text in pieces:
        if is_literal:
            escaped = _quote(text.replace("{", "{{").replace("}", "}}"))[1:-1]
            if quote == "'":
                escaped = escaped.replace('\\"', '"').replace("'", "\\'")
            out.append(escaped)
        else:
            out.append(text)
    out.append(quote)
    return "".join(out)


def render_canonical(node: ast.expr) -> str:
    """Deterministic canonical rendering of an expression node."""
    if isinstance(node, ast.Constant):
        value = node.value
        if value is Ellipsis:
            return "..."
        if isinstance(value, str):
            return _quote(value)
        if isinstance(value, bytes):
            return repr(value)  # bytes literals may not hold raw non-ASCII
        return repr(value)
    if isinstance(node, ast.Name):
        return node.id
    if isinstance(node, ast.Attribute):
        base = _operand(node.value, 17)
        if isinstance(node.value, ast.Constant) and isinstance(node.value.value, (int, float)):
            base = f"({render_canonical(node.value)})"
        return f"{base}.{node.attr}"
    if isinstance(node, ast.Call):
        parts = [render_canonical(arg) for arg in node.args]
        for kw in node.keywords:
            if kw.arg is None:
                parts.append(f"**{render_canonical(kw.value)}")
            else:
                parts.append(f"{kw.arg}={render_canonical(kw.value)}")
        return f"{_operand(node.func, 17)}({','.join(parts)})"
    if isinstance(node, ast.Subscript):
        return f"{_operand(node.value, 17)}[{_render_slice(node.slice)}]"
    if isinstance(node, ast.Starred):
        return f"*{_operand(node.value, 7)}"  # starred items take or_expr
    if isinstance(node, ast.List):
        return "[" + ",".join(render_canonical(e) for e in node.elts) + "]"
    if isinstance(node, ast.Tuple):
        inner = ",".join(render_canonical(e) for e in node.elts)
        if len(node.elts) == 1:
            inner += ","
        return f"({inner})"
    if isinstance(node, ast.Set):
        return "{" + ",".join(render_canonical(e) for e in node.elts) + "}"
    if isinstance(node, ast.Dict):
        parts = []
        for key, value in zip(node.keys, node.values):
            if key is None:
                parts.append(f"**{_operand(value, 7)}")  # dict splats take or_expr
            else:
                parts.append(f"{render_canonical(key)}:{render_canonical(value)}")
        return "{" + ",".join(parts) + "}"
    if isinstance(node, ast.BinOp):
        prec = _BIN_PREC[type(node.op)]
        if isinstance(node.op, ast.Pow):  # right-associative
            return f"{_operand(node.left, 15)}**{_operand(node.right, 14)}"
        return f"{_operand(node.left, prec)}{_BIN_OPS[type(node.op)]}{_operand(node.right, prec + 1)}"
    if isinstance(node, ast.UnaryOp):
        prec = _precedence(node)
        return f"{_UNARY_OPS[type(node.op)]}{_operand(node.operand, prec)}"
    if isinstance(node, ast.BoolOp):
        prec = _precedence(node)
        joiner = " or " if isinstance(node.op, ast.Or) else " and "
        # same-precedence children keep their parentheses so explicitly
        # nested and/or chains round-trip structurally
        return joiner.join(_operand(v, prec + 1) for v in node.values)
    if isinstance(node, ast.Compare):
        text = _operand(node.left, 7)
        for op, comparator in zip(node.ops, node.comparators):
            text += f"{_CMP_OPS[type(op)]}{_operand(comparator, 7)}"
        return text
    if isinstance(node, ast.IfExp):
        return f"{_operand(node.body, 3)} if {_operand(node.test, 3)} else {_operand(node.orelse, 2)}"
    if isinstance(node, ast.Lambda):
        args = node.args
        names = [a.arg for a in args.posonlyargs + args.args]
        defaults = list(args.defaults)
        rendered = []
        plain = len(names) - len(defaults)
        for i, name in enumerate(names):
            if i < plain:
                rendered.append(name)
            else:
                rendered.append(f"{name}={render_canonical(defaults[i - plain])}")
        if args.vararg:
            rendered.append(f"*{args.vararg.arg}")
        for kwarg, default in zip(args.kwonlyargs, args.kw_defaults):
            rendered.append(kwarg.arg if default is None else f"{kwarg.arg}={render_canonical(default)}")
        if args.kwarg:
            rendered.append(f"**{args.kwarg.arg}")
        head = "lambda " + ",".join(rendered) if rendered else "lambda"
        return f"{head}:{render_canonical(node.body)}"
    if isinstance(node, (ast.ListComp, ast.SetComp, ast.GeneratorExp)):
        open_c, close_c = {"ListComp": "[]", "SetComp": "{}", "GeneratorExp": "()"}[type(node).__name__]
        body = render_canonical(node.elt) + "".join(_render_comprehension(g) for g in node.generators)
        return f"{open_c}{body}{close_c}"
    if isinstance(node, ast.DictComp):
        body = f"{render_canonical(node.key)}:{render_canonical(node.value)}"
        body += "".join(_render_comprehension(g) for g in node.generators)
        return "{" + body + "}"
    if isinstance(node, ast.JoinedStr):
        return _render_fstring(node)
    if isinstance(node, ast.NamedExpr):
        # self-parenthesized: a bare walrus is not a valid expression
        return f"({render_canonical(node.target)}:={render_canonical(node.value)})"
    return ast.unparse(node)


# --------------------------------------------------------------------------
# models

@dataclass(frozen=True)
class QPAttributeEntry:
    """One variable binding: name, canonical value, kind, position."""

    name: str
    value_rendered: str
    value_kind: str
    span: SourceSpan
    binding_index: int
    value_node: ast.expr = field(repr=False, compare=False)

    def as_tuple(self) -> tuple[str, str]:
        return (self.name, self.value_rendered)


class QPAttribute:
    """Ordered binding table; names index their bindings in source order."""

    def __init__(self) -> None:
        self._entries: list[QPAttributeEntry] = []
        self._index: dict[str, list[QPAttributeEntry]] = {}

    def _append(self, entry: QPAttributeEntry) -> None:
        self._entries.append(entry)
        self._index.setdefault(entry.name, []).append(entry)

    @property
    def entries(self) -> tuple[QPAttributeEntry, ...]:
        return tuple(self._entries)

    @property
    def index(self) -> dict[str, tuple[QPAttributeEntry, ...]]:
        return {name: tuple(entries) for name, entries in self._index.items()}

    def bindings(self, name: str) -> tuple[QPAttributeEntry, ...]:
        return tuple(self._index.get(name, ()))

    def latest_before(self, name: str, at_index: int) -> QPAttributeEntry | None:
        best = None
        for entry in self._index.get(name, ()):
            if entry.binding_index < at_index:
                best = entry
            else:
                break
        return best

    def as_tuples(self) -> list[tuple[str, str]]:
        return [entry.as_tuple() for entry in self._entries]

    def __len__(self) -> int:
        return len(self._entries)


@dataclass(frozen=True)
class Origin:
    """Result of tracing a name back to its initial value."""

    rendered: str
    kind: str
    cycle: bool = False
    node: ast.expr | None = field(default=None, repr=False, compare=False)


def resolve_origin(name: str, attrs: QPAttribute, at_index: int) -> Origin:
    """Trace ``name`` through name-to-name bindings visible before ``at_index``.

    Follows name-ref bindings transitively until a binding whose value is
    not a bare name, and returns that binding's canonical rendering.  A
    reference cycle terminates at the name where the walk closes, with the
    ``cycle`` flag set.  Raises :class:`UnknownNameError` when ``name`` has
    no binding before ``at_index`` at all.
    """
    seen: set[str] = set()
    current = name
    first = True
    while True:
        entry = attrs.latest_before(current, at_index)
        if entry is None:
            if first:
                raise UnknownNameError(name)
            return Origin(rendered=current, kind="name-ref")
        if entry.value_kind != "name-ref":
            return Origin(rendered=entry.value_rendered, kind=entry.value_kind, node=entry.value_node)
        seen.add(current)
        referent = entry.value_rendered
        if referent in seen:
            return Origin(rendered=referent, kind="name-ref", cycle=True)
        current = referent
        first = False


@dataclass(frozen=True)
class CallArg:
    rendered: str
    resolved: str
    span: SourceSpan
    node: ast.expr = field(repr=False, compare=False)


@dataclass(frozen=True)
class CallKwarg:
    name: str  # "**" for a splatted mapping
    rendered: str
    resolved: str
    span: SourceSpan
    node: ast.expr = field(repr=False, compare=False)


@dataclass(frozen=True)
class CallRecord:
    """One call site: canonical string, callee path, arguments, position."""

    call_rendered: str
    callee_path: str
    receiver: str | None
    positional_args: tuple[CallArg, ...]
    keyword_args: tuple[CallKwarg, ...]
    span: SourceSpan
    nesting_depth: int
    binding_horizon: int  # bindings visible to this call (for origin lookups)
    node: ast.Call = field(repr=False, compare=False)

    @property
    def method(self) -> str:
        return self.callee_path.rpartition(".")[2]


class QPOperation:
    """Ordered call-record list covering every call node in the file."""

    def __init__(self) -> None:
        self._records: list[CallRecord] = []

    def _append(self, record: CallRecord) -> None:
        self._records.append(record)

    @property
    def records(self) -> tuple[CallRecord, ...]:
        return tuple(self._records)

    def rendered(self) -> list[str]:
        return [record.call_rendered for record in self._records]

    def __len__(self) -> int:
        return len(self._records)


@dataclass(frozen=True)
class ImportRecord:
    module: str | None  # None for plain ``import x`` statements
    names: tuple[tuple[str, str | None], ...]  # (name, alias)
    is_from: bool
    level: int
    span: SourceSpan


@dataclass(frozen=True)
class ExtractionResult:
    attributes: QPAttribute
    operations: QPOperation
    imports: tuple[ImportRecord, ...]
    defined_names: frozenset[str]
    skipped_constructs: int
    skipped_spans: tuple[SourceSpan, ...]


# --------------------------------------------------------------------------
# the walker

_NOOP_STMTS = (ast.Pass, ast.Break, ast.Continue, ast.Global, ast.Nonlocal)


def _target_names(node: ast.expr) -> list[str]:
    if isinstance(node, ast.Name):
        return [node.id]
    if isinstance(node, (ast.Tuple, ast.List)):
        names: list[str] = []
        for elt in node.elts:
            names.extend(_target_names(elt))
        return names
    if isinstance(node, ast.Starred):
        return _target_names(node.value)
    return []


def _value_kind(node: ast.expr) -> str:
    if isinstance(node, ast.Constant):
        return "constant"
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)) \
            and isinstance(node.operand, ast.Constant):
        return "constant"
    if isinstance(node, ast.Name):
        return "name-ref"
    if isinstance(node, ast.Call):
        return "call-result"
    if isinstance(node, (ast.Dict, ast.List, ast.Tuple, ast.Set)):
        return "container"
    return "other"


def _expr_children(node: ast.AST):
    # Source order matters for dict literals and conditional expressions,
    # where the field order of the node differs from the text.
    if isinstance(node, ast.Dict):
        for key, value in zip(node.keys, node.values):
            if key is not None:
                yield key
            yield value
        return
    if isinstance(node, ast.IfExp):
        yield node.body
        yield node.test
        yield node.orelse
        return
    yield from ast.iter_child_nodes(node)


class _Walker:
    def __init__(self, file: SourceFile) -> None:
        self.file = file
        self.attrs = QPAttribute()
        self.ops = QPOperation()
        self.imports: list[ImportRecord] = []
        self.defined: set[str] = set()
        self.skipped: list[SourceSpan] = []
        self._binding_count = 0

    # -- statements -------------------------------------------------------

    def walk(self, module: ast.Module) -> None:
        for stmt in module.body:
            self._statement(stmt)

    def _statement(self, stmt: ast.stmt) -> None:
        if isinstance(stmt, ast.Assign):
            for target in stmt.targets:
                if not isinstance(target, ast.Name):
                    self._calls(target, 0)
            self._calls(stmt.value, 0)
            self._bind_targets(stmt.targets, stmt.value, stmt)
        elif isinstance(stmt, ast.AnnAssign):
            if stmt.value is not None:
                self._calls(stmt.value, 0)
                if isinstance(stmt.target, ast.Name):
                    self._bind(stmt.target.id, render_canonical(stmt.value),
                               _value_kind(stmt.value), stmt, stmt.value)
        elif isinstance(stmt, ast.AugAssign):
            self._calls(stmt.value, 0)
            if isinstance(stmt.target, ast.Name):
                rendered = f"{stmt.target.id}{_BIN_OPS[type(stmt.op)]}{render_canonical(stmt.value)}"
                self._bind(stmt.target.id, rendered, "other", stmt, stmt.value)
        elif isinstance(stmt, ast.Expr):
            if isinstance(stmt.value, ast.Constant):  # docstring or stray literal
                return
            if self._calls(stmt.value, 0) == 0:
                self._skip(stmt)
        elif isinstance(stmt, ast.Import):
            names = tuple((alias.name, alias.asname) for alias in stmt.names)
            for alias in stmt.names:
                self.defined.add((alias.asname or alias.name).split(".")[0])
            self.imports.append(ImportRecord(None, names, False, 0, self._span(stmt)))
        elif isinstance(stmt, ast.ImportFrom):
            names = tuple((alias.name, alias.asname) for alias in stmt.names)
            for alias in stmt.names:
                if alias.name != "*":
                    self.defined.add(alias.asname or alias.name)
            self.imports.append(ImportRecord(stmt.module, names, True, stmt.level, self._span(stmt)))
        elif isinstance(stmt, ast.FunctionDef):
            self.defined.add(stmt.name)
            for decorator in stmt.decorator_list:
                self._calls(decorator, 0)
            args = stmt.args
            for default in list(args.defaults) + [d for d in args.kw_defaults if d is not None]:
                self._calls(default, 0)
            for arg in args.posonlyargs + args.args + args.kwonlyargs:
                self.defined.add(arg.arg)
            if args.vararg:
                self.defined.add(args.vararg.arg)
            if args.kwarg:
                self.defined.add(args.kwarg.arg)
            for inner in stmt.body:
                self._statement(inner)
        elif isinstance(stmt, ast.For):
            self._calls(stmt.iter, 0)
            self.defined.update(_target_names(stmt.target))
            for inner in stmt.body:
                self._statement(inner)
            for inner in stmt.orelse:
                self._statement(inner)
        elif isinstance(stmt, (ast.While, ast.If)):
            self._calls(stmt.test, 0)
            for inner in stmt.body:
                self._statement(inner)
            for inner in stmt.orelse:
                self._statement(inner)
        elif isinstance(stmt, ast.With):
            for item in stmt.items:
                self._calls(item.context_expr, 0)
                if item.optional_vars is not None:
                    self.defined.update(_target_names(item.optional_vars))
            for inner in stmt.body:
                self._statement(inner)
        elif isinstance(stmt, ast.Return):
            if stmt.value is not None:
                self._calls(stmt.value, 0)
        elif isinstance(stmt, _NOOP_STMTS):
            pass
        else:
            # class defs, try blocks, match, async constructs, asserts, ...
            self._skip(stmt)

    def _bind_targets(self, targets: list[ast.expr], value: ast.expr, stmt: ast.stmt) -> None:
        kind = _value_kind(value)
        rendered = render_canonical(value)
        for target in targets:
            if isinstance(target, ast.Name):
                self._bind(target.id, rendered, kind, stmt, value)
            elif isinstance(target, (ast.Tuple, ast.List, ast.Starred)):
                for name in _target_names(target):
                    self._bind(name, rendered, "other", stmt, value)

    def _bind(self, name: str, rendered: str, kind: str, stmt: ast.stmt, value: ast.expr) -> None:
        entry = QPAttributeEntry(
            name=name,
            value_rendered=rendered,
            value_kind=kind,
            span=self._span(stmt),
            binding_index=self._binding_count,
            value_node=value,
        )
        self.attrs._append(entry)
        self._binding_count += 1
        self.defined.add(name)

    # -- expressions ------------------------------------------------------

    def _calls(self, node: ast.AST, depth: int) -> int:
        """Emit call records in source order; returns how many were emitted."""
        if isinstance(node, ast.Call):
            self._record(node, depth)
            count = 1
            count += self._calls(node.func, depth + 1)
            for arg in node.args:
                count += self._calls(arg, depth + 1)
            for kw in node.keywords:
                count += self._calls(kw.value, depth + 1)
            return count
        count = 0
        for child in _expr_children(node):
            count += self._calls(child, depth)
        return count

    def _record(self, call: ast.Call, depth: int) -> None:
        func = call.func
        receiver: str | None = None
        if isinstance(func, ast.Name):
            callee = func.id
        elif isinstance(func, ast.Attribute):
            prefix = render_canonical(func.value)
            callee = f"{prefix}.{func.attr}"
            if isinstance(func.value, ast.Name):
                receiver = func.value.id
        else:
            callee = render_canonical(func)
        positional = tuple(
            CallArg(
                rendered=render_canonical(arg),
                resolved=self._resolved(arg),
                span=self._span(arg),
                node=arg,
            )
            for arg in call.args
        )
        keywords = tuple(
            CallKwarg(
                name=kw.arg or "**",
                rendered=render_canonical(kw.value),
                resolved=self._resolved(kw.value),
                span=self._span(kw.value),
                node=kw.value,
            )
            for kw in call.keywords
        )
        self.ops._append(CallRecord(
            call_rendered=render_canonical(call),
            callee_path=callee,
            receiver=receiver,
            positional_args=positional,
            keyword_args=keywords,
            span=self._span(call),
            nesting_depth=depth,
            binding_horizon=self._binding_count,
            node=call,
        ))

    def _resolved(self, node: ast.expr) -> str:
        if isinstance(node, ast.Name):
            try:
                return resolve_origin(node.id, self.attrs, self._binding_count).rendered
            except UnknownNameError:
                return node.id
        return render_canonical(node)

    def _span(self, node: ast.AST) -> SourceSpan:
        return node_span(self.file, node)

    def _skip(self, stmt: ast.stmt) -> None:
        self.skipped.append(self._span(stmt))


def extract(tree: SyntaxTree, file: SourceFile) -> ExtractionResult:
    """Build both models for one parsed file.

    Pure function of the tree: identical trees yield identical models.
    Statements inside function definitions, loops, conditionals, and with
    blocks contribute once per lexical occurrence.
    """
    walker = _Walker(file)
    walker.walk(tree.root)
    return ExtractionResult(
        attributes=walker.attrs,
        operations=walker.ops,
        imports=tuple(walker.imports),
        defined_names=frozenset(walker.defined),
        skipped_constructs=len(walker.skipped),
        skipped_spans=tuple(walker.skipped),
    )
