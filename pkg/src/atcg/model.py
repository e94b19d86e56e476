"""Design-model domain types (classes, sequences, fragments) and validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from .exprs import Expr, Atom, free_vars, IDENT_RE

FRAGMENT_OPERATORS = ("alt", "opt", "loop", "break", "par")


@dataclass
class OperationDef:
    name: str
    params: List[Tuple[str, str]] = field(default_factory=list)  # (name, typeName)
    pre: Optional[Expr] = None
    post: Optional[Expr] = None


@dataclass
class ClassDef:
    name: str
    attributes: List[Tuple[str, str]] = field(default_factory=list)
    operations: List[OperationDef] = field(default_factory=list)

    def operation(self, name: str) -> Optional[OperationDef]:
        for op in self.operations:
            if op.name == name:
                return op
        return None


@dataclass
class Association:
    from_class: str
    to_class: str
    label: Optional[str] = None


@dataclass
class ClassModel:
    classes: List[ClassDef] = field(default_factory=list)
    associations: List[Association] = field(default_factory=list)

    def class_def(self, name: str) -> Optional[ClassDef]:
        for c in self.classes:
            if c.name == name:
                return c
        return None


@dataclass
class Lifeline:
    id: str
    display_name: str
    class_name: str


@dataclass
class Message:
    id: str
    from_lifeline: str
    to_lifeline: str
    operation_name: str
    args: List[Atom] = field(default_factory=list)


@dataclass
class Operand:
    guard: Optional[Expr]
    body: List["SeqElement"] = field(default_factory=list)


@dataclass
class CombinedFragment:
    id: str
    operator: str  # one of FRAGMENT_OPERATORS
    operands: List[Operand] = field(default_factory=list)
    loop_min: Optional[int] = None
    loop_max: Optional[int] = None


SeqElement = Union[Message, CombinedFragment]


@dataclass
class SequenceModel:
    name: str
    lifelines: List[Lifeline] = field(default_factory=list)
    body: List[SeqElement] = field(default_factory=list)


@dataclass
class Finding:
    code: str
    location: str
    message: str


@dataclass
class ValidationReport:
    errors: List[Finding] = field(default_factory=list)
    warnings: List[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error(self, code, location, message):
        self.errors.append(Finding(code, location, message))

    def warning(self, code, location, message):
        self.warnings.append(Finding(code, location, message))

    def lines(self) -> List[str]:
        out = []
        for f in self.errors:
            out.append("error %s [%s]: %s" % (f.code, f.location, f.message))
        for f in self.warnings:
            out.append("warning %s [%s]: %s" % (f.code, f.location, f.message))
        return out


def _check_unique(names, code, location, what, report):
    seen = set()
    for n in names:
        if n in seen:
            report.error(code, location, "duplicate %s %r" % (what, n))
        seen.add(n)


def _iter_messages(body):
    for el in body:
        if isinstance(el, Message):
            yield el
        else:
            for op in el.operands:
                yield from _iter_messages(op.body)


def _iter_fragments(body):
    for el in body:
        if isinstance(el, CombinedFragment):
            yield el
            for op in el.operands:
                yield from _iter_fragments(op.body)


def validate_model(cm: ClassModel, sm: SequenceModel) -> ValidationReport:
    """Cross-check a class model and a sequence model against all structural
    invariants. Violations are returned as data, never raised."""
    report = ValidationReport()

    _check_unique([c.name for c in cm.classes], "duplicate-class",
                  "classes", "class", report)
    for c in cm.classes:
        loc = "class %s" % c.name
        _check_unique([a[0] for a in c.attributes], "duplicate-attribute",
                      loc, "attribute", report)
        _check_unique([o.name for o in c.operations], "duplicate-operation",
                      loc, "operation", report)
        attr_names = {a[0] for a in c.attributes}
        for op in c.operations:
            oploc = "%s.%s" % (c.name, op.name)
            _check_unique([p[0] for p in op.params], "duplicate-param",
                          oploc, "param", report)
            if op.pre is not None:
                allowed = {p[0] for p in op.params} | attr_names
                loose = free_vars(op.pre) - allowed
                if loose:
                    report.error(
                        "pre-free-variable", oploc,
                        "pre references %s outside params/attributes"
                        % ", ".join(sorted(loose)))

    class_names = {c.name for c in cm.classes}
    for a in cm.associations:
        loc = "association %s-%s" % (a.from_class, a.to_class)
        for end in (a.from_class, a.to_class):
            if end not in class_names:
                report.error("unknown-association-endpoint", loc,
                             "class %r does not exist" % end)
        if a.from_class == a.to_class and not a.label:
            report.error("unlabeled-self-association", loc,
                         "self-association must be labeled")

    _check_unique([l.id for l in sm.lifelines], "duplicate-lifeline",
                  "sequence %s" % sm.name, "lifeline", report)
    lifelines = {l.id: l for l in sm.lifelines}
    for l in sm.lifelines:
        if l.class_name not in class_names:
            report.error("unknown-lifeline-class", "lifeline %s" % l.id,
                         "class %r does not exist" % l.class_name)

    if not sm.body:
        report.error("empty-body", "sequence %s" % sm.name,
                     "sequence body is empty")

    associated = set()
    for a in cm.associations:
        associated.add((a.from_class, a.to_class))
        associated.add((a.to_class, a.from_class))

    for msg in _iter_messages(sm.body):
        loc = "message %s" % msg.id
        sender = lifelines.get(msg.from_lifeline)
        receiver = lifelines.get(msg.to_lifeline)
        if sender is None:
            report.error("unknown-lifeline", loc,
                         "lifeline %r does not exist" % msg.from_lifeline)
        if receiver is None:
            report.error("unknown-lifeline", loc,
                         "lifeline %r does not exist" % msg.to_lifeline)
        if receiver is not None:
            cdef = cm.class_def(receiver.class_name)
            op = cdef.operation(msg.operation_name) if cdef else None
            if op is None:
                report.error("unknown-operation", loc,
                             "no operation %r on class %r"
                             % (msg.operation_name, receiver.class_name))
            elif len(msg.args) != len(op.params):
                report.error("arity-mismatch", loc,
                             "%s expects %d args, got %d"
                             % (op.name, len(op.params), len(msg.args)))
        if sender is not None and receiver is not None:
            # A self-directed message needs no association.
            if (sender.class_name != receiver.class_name
                    and (sender.class_name, receiver.class_name) not in associated):
                report.warning("unassociated-message", loc,
                               "classes %s and %s share no association"
                               % (sender.class_name, receiver.class_name))

    for frag in _iter_fragments(sm.body):
        loc = "fragment %s" % frag.id
        n = len(frag.operands)
        if frag.operator in ("opt", "loop", "break") and n != 1:
            report.error("bad-operand-count", loc,
                         "%s needs exactly 1 operand, got %d"
                         % (frag.operator, n))
        if frag.operator in ("alt", "par") and n < 2:
            report.error("bad-operand-count", loc,
                         "%s needs at least 2 operands, got %d"
                         % (frag.operator, n))
        if frag.operator == "alt":
            unguarded = [op for op in frag.operands if op.guard is None]
            if len(unguarded) > 1:
                report.error("multiple-else-operands", loc,
                             "at most one alt operand may omit its guard")
        if (frag.loop_min is not None and frag.loop_max is not None
                and frag.loop_min > frag.loop_max):
            report.error("bad-loop-bounds", loc,
                         "loopMin %d > loopMax %d"
                         % (frag.loop_min, frag.loop_max))
        for i, op in enumerate(frag.operands):
            if op.body:
                continue
            # The one tolerated empty body is an alt else operand.
            if frag.operator == "alt" and op.guard is None:
                continue
            report.error("empty-operand-body", "%s operand %d" % (loc, i + 1),
                         "operand body is empty")

    return report
