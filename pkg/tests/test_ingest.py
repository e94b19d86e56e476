"""ATCG-XML parsing: strict schema, determinism, whitespace insensitivity."""

import xml.etree.ElementTree as ET

import pytest

from conftest import fixture_bytes

from atcg.exprs import Int, Sym
from atcg.ingest import IngestError, model_name, parse_model_xml
from atcg.model import CombinedFragment, Message


def test_login_fixture_shape():
    cm, sm = parse_model_xml(fixture_bytes("login.xml"))
    assert [c.name for c in cm.classes] == ["login"]
    assert [o.name for o in cm.classes[0].operations] == \
        ["enterName", "enterPassword", "login"]
    assert len(sm.body) == 3
    assert all(isinstance(el, Message) for el in sm.body)
    assert sm.body[2].args == [Sym("UID"), Sym("PSWD")]
    assert model_name(fixture_bytes("login.xml")) == "login"


def test_missing_sequence():
    doc = b'<model name="m"><classes><class name="c"/></classes></model>'
    with pytest.raises(IngestError) as exc:
        parse_model_xml(doc)
    assert exc.value.code == "missing-sequence"


def test_alt_fixture_against_independent_walker():
    """Cross-check the parsed alt fixture against a second, ad-hoc
    ElementTree walk of the same bytes."""
    data = fixture_bytes("alt.xml")
    cm, sm = parse_model_xml(data)

    root = ET.fromstring(data)
    frag_el = root.find("sequence/fragment")
    assert frag_el is not None

    frag = sm.body[0]
    assert isinstance(frag, CombinedFragment)
    assert frag.operator == frag_el.get("operator") == "alt"
    assert len(frag.operands) == len(frag_el.findall("operand")) == 2
    # Guard presence and message ids line up operand by operand.
    for operand, op_el in zip(frag.operands, frag_el.findall("operand")):
        assert (operand.guard is not None) == (op_el.get("guard") is not None)
        assert [m.id for m in operand.body] == \
            [m.get("id") for m in op_el.findall("message")]
    # Integer args parse as Int atoms.
    assert frag.operands[0].body[0].args == [Int(1)]


def test_whitespace_insensitive():
    data = fixture_bytes("login.xml")
    spaced = data.replace(b"<message", b"\n\n    <message")
    assert parse_model_xml(data) == parse_model_xml(spaced)


def test_deterministic():
    data = fixture_bytes("par.xml")
    assert parse_model_xml(data) == parse_model_xml(data)


def test_duplicate_id():
    doc = b"""<model name="m"><classes><class name="c">
      <operation name="f"/></class></classes>
      <sequence name="s"><lifeline id="l" name="l" class="c"/>
        <message id="m1" from="l" to="l" operation="f"/>
        <message id="m1" from="l" to="l" operation="f"/>
      </sequence></model>"""
    with pytest.raises(IngestError) as exc:
        parse_model_xml(doc)
    assert exc.value.code == "duplicate-id"


def test_unknown_element():
    doc = b"""<model name="m"><classes><class name="c"><banana/></class>
      </classes><sequence name="s"><lifeline id="l" name="l" class="c"/>
      <message id="m1" from="l" to="l" operation="f"/></sequence></model>"""
    with pytest.raises(IngestError) as exc:
        parse_model_xml(doc)
    assert exc.value.code == "unknown-element"


def test_unknown_attribute():
    doc = b"""<model name="m" extra="x"><classes><class name="c"/></classes>
      <sequence name="s"><lifeline id="l" name="l" class="c"/>
      <message id="m1" from="l" to="l" operation="f"/></sequence></model>"""
    with pytest.raises(IngestError) as exc:
        parse_model_xml(doc)
    assert exc.value.code == "unknown-attribute"


def test_missing_attribute():
    doc = b"""<model name="m"><classes><class/></classes>
      <sequence name="s"><lifeline id="l" name="l" class="c"/>
      <message id="m1" from="l" to="l" operation="f"/></sequence></model>"""
    with pytest.raises(IngestError) as exc:
        parse_model_xml(doc)
    assert exc.value.code == "missing-attribute"


def test_xml_syntax_error():
    with pytest.raises(IngestError) as exc:
        parse_model_xml(b"<model name='m'>")
    assert exc.value.code == "xml-syntax"


def test_bad_expression():
    doc = b"""<model name="m"><classes><class name="c">
      <operation name="f"><pre>x ></pre></operation></class></classes>
      <sequence name="s"><lifeline id="l" name="l" class="c"/>
      <message id="m1" from="l" to="l" operation="f"/></sequence></model>"""
    with pytest.raises(IngestError) as exc:
        parse_model_xml(doc)
    assert exc.value.code == "bad-expression"
