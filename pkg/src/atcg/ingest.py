"""Reader for the ATCG-XML design-model interchange format.

The schema (attributes required unless suffixed with ``?``)::

    <model name>
      <classes>
        <class name>
          <attribute name type?/>*
          <operation name>
            <param name type?/>*
            <pre>EXPR</pre>?  <post>EXPR</post>?
          </operation>*
        </class>+
      </classes>
      <associations> <association from to label?/>* </associations>
      <sequence name>
        <lifeline id name class/>+
        (  <message id from to operation> <arg>ATOM</arg>* </message>
         | <fragment id operator loopMin? loopMax?>
             <operand guard?> SEQ-ELEMENTS </operand>+
           </fragment> )+
      </sequence>
    </model>
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import Tuple

from .exprs import ExprError, parse_atom, parse_expr
from .model import (Association, ClassDef, ClassModel, CombinedFragment,
                    Lifeline, Message, Operand, OperationDef, SequenceModel,
                    FRAGMENT_OPERATORS)


class IngestError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__("%s: %s" % (code, message))
        self.code = code


def _attr(el, name, code="missing-attribute"):
    if name not in el.attrib:
        raise IngestError(code, "<%s> lacks required attribute %r"
                          % (el.tag, name))
    return el.attrib[name]


def _reject_unknown_attrs(el, allowed):
    for key in el.attrib:
        if key not in allowed:
            raise IngestError("unknown-attribute",
                              "<%s> has unexpected attribute %r" % (el.tag, key))


def _expr(el):
    try:
        return parse_expr(el.text or "")
    except ExprError as exc:
        raise IngestError("bad-expression",
                          "in <%s>: %s" % (el.tag, exc)) from exc


def _parse_operation(el) -> OperationDef:
    _reject_unknown_attrs(el, {"name"})
    op = OperationDef(name=_attr(el, "name"))
    for child in el:
        if child.tag == "param":
            _reject_unknown_attrs(child, {"name", "type"})
            op.params.append((_attr(child, "name"), child.get("type", "")))
        elif child.tag == "pre":
            op.pre = _expr(child)
        elif child.tag == "post":
            op.post = _expr(child)
        else:
            raise IngestError("unknown-element",
                              "<%s> inside <operation>" % child.tag)
    return op


def _parse_class(el) -> ClassDef:
    _reject_unknown_attrs(el, {"name"})
    cdef = ClassDef(name=_attr(el, "name"))
    for child in el:
        if child.tag == "attribute":
            _reject_unknown_attrs(child, {"name", "type"})
            cdef.attributes.append((_attr(child, "name"), child.get("type", "")))
        elif child.tag == "operation":
            cdef.operations.append(_parse_operation(child))
        else:
            raise IngestError("unknown-element",
                              "<%s> inside <class>" % child.tag)
    return cdef


def _parse_seq_elements(parent, seen_ids):
    body = []
    for child in parent:
        if child.tag == "message":
            _reject_unknown_attrs(child, {"id", "from", "to", "operation"})
            mid = _attr(child, "id")
            if mid in seen_ids:
                raise IngestError("duplicate-id", "duplicate id %r" % mid)
            seen_ids.add(mid)
            args = []
            for arg in child:
                if arg.tag != "arg":
                    raise IngestError("unknown-element",
                                      "<%s> inside <message>" % arg.tag)
                try:
                    args.append(parse_atom(arg.text or ""))
                except ExprError as exc:
                    raise IngestError("bad-atom",
                                      "message %s: %s" % (mid, exc)) from exc
            body.append(Message(id=mid,
                                from_lifeline=_attr(child, "from"),
                                to_lifeline=_attr(child, "to"),
                                operation_name=_attr(child, "operation"),
                                args=args))
        elif child.tag == "fragment":
            _reject_unknown_attrs(child, {"id", "operator", "loopMin", "loopMax"})
            fid = _attr(child, "id")
            if fid in seen_ids:
                raise IngestError("duplicate-id", "duplicate id %r" % fid)
            seen_ids.add(fid)
            operator = _attr(child, "operator")
            if operator not in FRAGMENT_OPERATORS:
                raise IngestError("bad-operator",
                                  "fragment %s: unknown operator %r"
                                  % (fid, operator))
            frag = CombinedFragment(id=fid, operator=operator)
            for bound in ("loopMin", "loopMax"):
                raw = child.get(bound)
                if raw is None:
                    continue
                if operator != "loop":
                    raise IngestError("bad-attribute",
                                      "%s only applies to loop fragments" % bound)
                if not raw.isdigit():
                    raise IngestError("bad-attribute",
                                      "%s must be a non-negative integer" % bound)
                setattr(frag, "loop_min" if bound == "loopMin" else "loop_max",
                        int(raw))
            for op_el in child:
                if op_el.tag != "operand":
                    raise IngestError("unknown-element",
                                      "<%s> inside <fragment>" % op_el.tag)
                _reject_unknown_attrs(op_el, {"guard"})
                guard = None
                if op_el.get("guard") is not None:
                    try:
                        guard = parse_expr(op_el.get("guard"))
                    except ExprError as exc:
                        raise IngestError("bad-expression",
                                          "fragment %s guard: %s"
                                          % (fid, exc)) from exc
                frag.operands.append(
                    Operand(guard=guard,
                            body=_parse_seq_elements(op_el, seen_ids)))
            if not frag.operands:
                raise IngestError("missing-operand",
                                  "fragment %s has no operands" % fid)
            body.append(frag)
        elif child.tag == "lifeline":
            raise IngestError("unknown-element",
                              "<lifeline> must precede messages")
        else:
            raise IngestError("unknown-element",
                              "<%s> inside sequence body" % child.tag)
    return body


def model_name(data: bytes) -> str:
    """Return the <model> name attribute without a full parse."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise IngestError("xml-syntax", str(exc)) from exc
    if root.tag != "model":
        raise IngestError("unknown-element", "root element must be <model>")
    return _attr(root, "name")


def parse_model_xml(data: bytes) -> Tuple[ClassModel, SequenceModel]:
    """Parse ATCG-XML bytes into in-memory models. Strict: unknown elements
    or attributes and missing required parts are rejected."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise IngestError("xml-syntax",
                          "XML error at line %d column %d: %s"
                          % (exc.position[0], exc.position[1], exc.msg
                             if hasattr(exc, "msg") else exc)) from exc

    if root.tag != "model":
        raise IngestError("unknown-element", "root element must be <model>")
    _reject_unknown_attrs(root, {"name"})
    _attr(root, "name")

    cm = ClassModel()
    sm = None
    saw_classes = False
    for section in root:
        if section.tag == "classes":
            saw_classes = True
            for cl in section:
                if cl.tag != "class":
                    raise IngestError("unknown-element",
                                      "<%s> inside <classes>" % cl.tag)
                cm.classes.append(_parse_class(cl))
        elif section.tag == "associations":
            for assoc in section:
                if assoc.tag != "association":
                    raise IngestError("unknown-element",
                                      "<%s> inside <associations>" % assoc.tag)
                _reject_unknown_attrs(assoc, {"from", "to", "label"})
                cm.associations.append(Association(
                    from_class=_attr(assoc, "from"),
                    to_class=_attr(assoc, "to"),
                    label=assoc.get("label")))
        elif section.tag == "sequence":
            _reject_unknown_attrs(section, {"name"})
            sm = SequenceModel(name=_attr(section, "name"))
            seen_ids = set()
            body_start = []
            for child in section:
                if child.tag == "lifeline":
                    _reject_unknown_attrs(child, {"id", "name", "class"})
                    sm.lifelines.append(Lifeline(
                        id=_attr(child, "id"),
                        display_name=_attr(child, "name"),
                        class_name=_attr(child, "class")))
                else:
                    body_start.append(child)
            sm.body = _parse_seq_elements(body_start, seen_ids)
        else:
            raise IngestError("unknown-element",
                              "<%s> inside <model>" % section.tag)

    if not saw_classes or not cm.classes:
        raise IngestError("missing-classes", "no <classes> section with classes")
    if sm is None:
        raise IngestError("missing-sequence", "no <sequence> element")
    return cm, sm
