"""Reader/writer for the PrT-net PNML dialect used as the interchange format.

The on-disk form is ISO-8859-1 XML: a ``pnml`` root with one ``net`` of type
"PrT net" holding a Default tokenclass, an optional INIT label summarizing
non-Default initial tokens, then place/transition/arc elements sorted by id.
Transition, arc, guard, and inscription elements extend the place-only
excerpt shape in the same nested-value style.

Note: a bare identifier in an arc inscription always denotes a variable, so
symbolic *constants* are not representable in inscriptions (they are in
markings, where everything is a constant).
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from typing import List, Tuple

from .exprs import (ExprError, IDENT_RE, Sym, Token, format_atom, format_expr,
                    parse_atom, parse_expr, token_key)
from .petri import Arc, Place, PrTNet, Transition, natural_key

ENCODING = "iso-8859-1"


class PnmlError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__("%s: %s" % (code, message))
        self.code = code


def _esc(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;"))


def _esc_attr(text: str) -> str:
    return _esc(text).replace('"', "&quot;")


def _format_token(token: Token) -> str:
    if not token:
        return "Default"
    return "(%s)" % ",".join(format_atom(a) for a in token)


def _format_inscription_item(item) -> str:
    return item if isinstance(item, str) else format_atom(item)


# ---------------------------------------------------------------------------
# Writer


def write_pnml(net: PrTNet) -> bytes:
    lines = ['<?xml version="1.0" encoding="ISO-8859-1"?>',
             "<pnml>",
             '  <net type="PrT net" id="%s">' % _esc_attr(net.id),
             '    <tokenclass id="Default" blue="0" green="0" red="0"'
             ' enabled="true"/>']

    per_place = {}
    for pid, token in net.init_decl:
        per_place.setdefault(pid, []).append(token)

    init_entries = []
    for pid in sorted(per_place, key=natural_key):
        for token in sorted((t for t in per_place[pid] if t), key=token_key):
            init_entries.append(
                "%s(%s)" % (pid, ",".join(format_atom(a) for a in token)))
    if init_entries:
        lines.append('    <labels border="true" height="13" width="539"'
                     ' y="316" x="83">')
        lines.append("      <text>%s</text>" % _esc("INIT " +
                                                    ", ".join(init_entries)))
        lines.append("    </labels>")

    for place in sorted(net.places, key=lambda p: natural_key(p.id)):
        tokens = per_place.get(place.id, [])
        defaults = [t for t in tokens if not t]
        data = sorted((t for t in tokens if t), key=token_key)
        marking = "".join("Default," for _ in defaults)
        marking += "".join(_format_token(t) + "," for t in data)
        lines += [
            '    <place id="%s">' % _esc_attr(place.id),
            "      <graphics>",
            '        <position y="%.1f" x="%.1f"/>' % (place.position[1],
                                                       place.position[0]),
            "      </graphics>",
            "      <name>",
            "        <value>%s</value>" % _esc(place.name),
            "      </name>",
            "      <initialMarking>",
            "        <value>%s</value>" % _esc(marking),
            "      </initialMarking>",
            "      <capacity>",
            "        <value>%d</value>" % place.capacity,
            "      </capacity>",
            "    </place>",
        ]

    for t in sorted(net.transitions, key=lambda t: natural_key(t.id)):
        silent = ' silent="true"' if t.silent else ""
        lines += [
            '    <transition id="%s"%s>' % (_esc_attr(t.id), silent),
            "      <graphics>",
            '        <position y="%.1f" x="%.1f"/>' % (t.position[1],
                                                       t.position[0]),
            "      </graphics>",
            "      <name>",
            "        <value>%s</value>" % _esc(t.name),
            "      </name>",
            "      <guard>",
            "        <value>%s</value>"
            % _esc(format_expr(t.guard) if t.guard is not None else ""),
            "      </guard>",
        ]
        if t.annotation is not None:
            lines += [
                "      <annotation>",
                "        <value>%s</value>" % _esc(t.annotation),
                "      </annotation>",
            ]
        lines.append("    </transition>")

    for a in sorted(net.arcs, key=lambda a: natural_key(a.id)):
        lines += [
            '    <arc id="%s" source="%s" target="%s">'
            % (_esc_attr(a.id), _esc_attr(a.source), _esc_attr(a.target)),
            "      <inscription>",
            "        <value>%s</value>" % _esc(",".join(
                _format_inscription_item(x) for x in a.inscription)),
            "      </inscription>",
            "    </arc>",
        ]

    lines += ["  </net>", "</pnml>", ""]
    return "\n".join(lines).encode(ENCODING)


# ---------------------------------------------------------------------------
# Reader helpers


def _split_top(text: str) -> List[str]:
    """Split on commas outside quotes and parentheses."""
    parts, buf, depth, in_str = [], [], 0, False
    for ch in text:
        if in_str:
            buf.append(ch)
            if ch == '"':
                in_str = False
            continue
        if ch == '"':
            in_str = True
            buf.append(ch)
        elif ch == "(":
            depth += 1
            buf.append(ch)
        elif ch == ")":
            depth -= 1
            buf.append(ch)
        elif ch == "," and depth == 0:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    if buf:
        parts.append("".join(buf))
    return parts


def _parse_marking(text: str, where: str) -> List[Token]:
    tokens = []
    for part in _split_top(text or ""):
        s = part.strip()
        if not s:
            continue
        if s == "Default":
            tokens.append(())
        elif s.startswith("(") and s.endswith(")"):
            inner = s[1:-1].strip()
            atoms = []
            if inner:
                for x in _split_top(inner):
                    try:
                        atoms.append(parse_atom(x))
                    except ExprError as exc:
                        raise PnmlError("bad-marking",
                                        "%s: %s" % (where, exc)) from exc
            tokens.append(tuple(atoms))
        else:
            raise PnmlError("bad-marking",
                            "%s: unrecognized token %r" % (where, s))
    return tokens


def _parse_inscription(text: str, where: str):
    items = []
    for part in _split_top(text or ""):
        s = part.strip()
        if not s:
            continue
        if IDENT_RE.fullmatch(s) and s not in ("true", "false"):
            items.append(s)  # variable
        else:
            try:
                atom = parse_atom(s)
            except ExprError as exc:
                raise PnmlError("bad-inscription",
                                "%s: %s" % (where, exc)) from exc
            if isinstance(atom, Sym):
                items.append(atom.name)
            else:
                items.append(atom)
    return tuple(items)


_INIT_ENTRY_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\((.*)\)$")


def _parse_init_label(text: str) -> List[Tuple[str, Token]]:
    s = (text or "").strip()
    if not s.startswith("INIT"):
        raise PnmlError("bad-init-line", "label must start with INIT")
    body = s[4:].strip()
    entries = []
    if not body:
        return entries
    for part in _split_top(body):
        part = part.strip()
        m = _INIT_ENTRY_RE.match(part)
        if m is None:
            raise PnmlError("bad-init-line", "bad INIT entry %r" % part)
        pid, inner = m.group(1), m.group(2).strip()
        atoms = []
        if inner:
            for x in _split_top(inner):
                try:
                    atoms.append(parse_atom(x))
                except ExprError as exc:
                    raise PnmlError("bad-init-line",
                                    "bad atom in INIT entry %r" % part) from exc
        entries.append((pid, tuple(atoms)))
    return entries


def _position_of(el) -> Tuple[int, int]:
    pos = el.find("position")
    if pos is None:
        return (0, 0)
    try:
        return (int(float(pos.get("x", "0"))), int(float(pos.get("y", "0"))))
    except ValueError as exc:
        raise PnmlError("bad-position", str(exc)) from exc


# ---------------------------------------------------------------------------
# Reader


def read_pnml(doc: bytes) -> PrTNet:
    """Inverse of write_pnml. Unknown sibling elements are rejected; the
    INIT label must agree with the places' data tokens."""
    try:
        root = ET.fromstring(doc)
    except ET.ParseError as exc:
        raise PnmlError("xml-syntax", str(exc)) from exc
    if root.tag != "pnml":
        raise PnmlError("unknown-element", "root element must be <pnml>")
    nets = list(root)
    if len(nets) != 1 or nets[0].tag != "net":
        raise PnmlError("unknown-element", "expected exactly one <net>")
    net_el = nets[0]
    if net_el.get("type") != "PrT net":
        raise PnmlError("bad-net-type", "net type must be \"PrT net\"")
    net = PrTNet(id=net_el.get("id", ""))

    init_label = None
    init_decl: List[Tuple[str, Token]] = []

    for el in net_el:
        if el.tag == "tokenclass":
            if el.get("id") != "Default":
                raise PnmlError("unknown-element",
                                "tokenclass id must be Default")
        elif el.tag == "labels":
            text_el = el.find("text")
            init_label = text_el.text if text_el is not None else ""
        elif el.tag == "place":
            pid = el.get("id")
            if pid is None:
                raise PnmlError("missing-attribute", "place without id")
            name = pid
            capacity = 0
            position = (0, 0)
            tokens: List[Token] = []
            for child in el:
                if child.tag == "graphics":
                    position = _position_of(child)
                elif child.tag == "name":
                    v = child.find("value")
                    name = (v.text or "") if v is not None else pid
                elif child.tag == "initialMarking":
                    v = child.find("value")
                    tokens = _parse_marking(v.text if v is not None else "",
                                            "place %s" % pid)
                elif child.tag == "capacity":
                    v = child.find("value")
                    raw = (v.text or "0") if v is not None else "0"
                    try:
                        capacity = int(raw.strip() or "0")
                    except ValueError as exc:
                        raise PnmlError("bad-capacity",
                                        "place %s: %r" % (pid, raw)) from exc
                else:
                    raise PnmlError("unknown-element",
                                    "<%s> inside <place>" % child.tag)
            net.places.append(Place(id=pid, name=name, capacity=capacity,
                                    position=position))
            init_decl += [(pid, t) for t in tokens]
        elif el.tag == "transition":
            tid = el.get("id")
            if tid is None:
                raise PnmlError("missing-attribute", "transition without id")
            name = tid
            guard = None
            silent = el.get("silent") == "true"
            position = (0, 0)
            annotation = None
            for child in el:
                if child.tag == "graphics":
                    position = _position_of(child)
                elif child.tag == "name":
                    v = child.find("value")
                    name = (v.text or "") if v is not None else tid
                elif child.tag == "guard":
                    v = child.find("value")
                    text = (v.text or "") if v is not None else ""
                    if text.strip():
                        try:
                            guard = parse_expr(text)
                        except ExprError as exc:
                            raise PnmlError("bad-guard",
                                            "transition %s: %s"
                                            % (tid, exc)) from exc
                elif child.tag == "annotation":
                    v = child.find("value")
                    annotation = (v.text or "") if v is not None else None
                else:
                    raise PnmlError("unknown-element",
                                    "<%s> inside <transition>" % child.tag)
            net.transitions.append(Transition(id=tid, name=name, guard=guard,
                                              silent=silent, position=position,
                                              annotation=annotation))
        elif el.tag == "arc":
            aid = el.get("id")
            source = el.get("source")
            target = el.get("target")
            if aid is None or source is None or target is None:
                raise PnmlError("missing-attribute",
                                "arc needs id, source, target")
            inscription = ()
            for child in el:
                if child.tag == "inscription":
                    v = child.find("value")
                    inscription = _parse_inscription(
                        (v.text or "") if v is not None else "",
                        "arc %s" % aid)
                else:
                    raise PnmlError("unknown-element",
                                    "<%s> inside <arc>" % child.tag)
            net.arcs.append(Arc(id=aid, source=source, target=target,
                                inscription=inscription))
        else:
            raise PnmlError("unknown-element", "<%s> inside <net>" % el.tag)

    net.init_decl = init_decl

    if init_label is not None:
        entries = _parse_init_label(init_label)
        place_ids = {p.id for p in net.places}
        for pid, _ in entries:
            if pid not in place_ids:
                raise PnmlError("bad-init-line",
                                "INIT names nonexistent place %r" % pid)
        declared = sorted(((pid, token_key(t)) for pid, t in entries))
        from_places = sorted(((pid, token_key(t)) for pid, t in init_decl
                              if t))
        if declared != from_places:
            raise PnmlError("bad-init-line",
                            "INIT label disagrees with place markings")
    return net
