import json

import pytest
from hypothesis import given, settings, strategies as st

from simplepoly.catalog import NAMES, catalog
from simplepoly.codec.report import emit_report_json, parse_report_json
from simplepoly.codec.spoly import ParseError, emit_spoly, load_spoly, parse_spoly
from simplepoly.codec.tri3 import emit_tri3, parse_tri3
from simplepoly.decisions import analyze
from simplepoly.errors import InvalidInput
from simplepoly.model import SimplePolyhedron
from simplepoly.thickening.build import thicken

from .conftest import COMPATIBLE, annulus, klein, mobius, torus


@pytest.mark.parametrize("name", NAMES)
def test_spoly_round_trip(name):
    p = catalog(name)
    text = emit_spoly(p)
    q = parse_spoly(text)
    assert q == p
    assert emit_spoly(q) == text


@pytest.mark.parametrize("make", [annulus, mobius, torus, klein])
def test_surface_round_trip(make):
    p = make()
    assert parse_spoly(emit_spoly(p)) == p


def test_disc_text():
    text = emit_spoly(catalog("disc"))
    assert text.count("\nregion ") == 1
    assert text.count("boundary free") == 1


def test_bing_house_text_declares_two_vertices():
    lines = emit_spoly(catalog("bing_house")).splitlines()
    assert sum(1 for l in lines if l.startswith("vertex ")) == 2


def test_emission_is_canonical():
    p = catalog("two_crossings")
    shuffled = SimplePolyhedron(p.name, p.vertices[::-1], p.edges[::-1], p.regions[::-1], p.free_circles)
    assert emit_spoly(shuffled) == emit_spoly(p)


def test_comments_and_header_are_optional():
    text = emit_spoly(catalog("round_bundle"))
    body = "\n".join(l + "   # note" for l in text.splitlines()[1:])
    assert parse_spoly("# leading comment\n" + body) == catalog("round_bundle")


def test_comments_can_be_emitted():
    text = emit_spoly(catalog("disc"), comments=["made by hand"])
    assert "# made by hand" in text
    assert parse_spoly(text) == catalog("disc")


def test_dangling_vertex_reference():
    text = "polyhedron p\nregion R genus 0 orientable yes\nboundary free f\nedge e interval y.0 y.1\n"
    errors = parse_spoly(text)
    assert isinstance(errors, list)
    dangling = [e for e in errors if e.code == "DANGLING_REFERENCE"]
    assert dangling and all(e.line == 4 for e in dangling)
    assert dangling[0].column == text.splitlines()[3].index("y.0") + 1
    assert dangling[0].token == "y.0"


def test_all_errors_are_collected():
    text = "polyhedron p\nvertex x chart X pairs (0 1 (2 3) trans 012 012\nregion R genus -1 orientable yes\nbogus\n"
    errors = parse_spoly(text)
    assert [e.line for e in errors] == [2, 3, 4]
    assert all(e.code == "SYNTAX" for e in errors)


def test_duplicate_ids():
    text = ("polyhedron p\nregion R genus 0 orientable yes\nboundary free f\n"
            "region R genus 0 orientable yes\nboundary free g\n")
    assert "DUPLICATE_ID" in [e.code for e in parse_spoly(text)]


def test_free_circle_claimed_twice():
    text = ("polyhedron p\nregion A genus 0 orientable yes\nboundary free f\n"
            "region B genus 0 orientable yes\nboundary free f\n")
    assert "SLOT_DOUBLY_CLAIMED" in [e.code for e in parse_spoly(text)]


def test_boundary_outside_region():
    errors = parse_spoly("polyhedron p\nboundary free f\n")
    assert errors[0].line == 2


def test_bad_header_version():
    errors = parse_spoly("spoly 2\npolyhedron p\nregion R genus 0 orientable yes\nboundary free f\n")
    assert errors[0].code == "VERSION"


def test_non_ascii_digits_rejected():
    text = emit_spoly(catalog("round_bundle")).replace("ident 012", "ident ０１２")
    assert isinstance(parse_spoly(text), list)


def test_bad_utf8():
    errors = parse_spoly(b"\xff\xfe")
    assert errors[0].code == "ENCODING"


def test_load_raises():
    with pytest.raises(InvalidInput):
        load_spoly("nonsense")


def test_emit_rejects_invalid():
    with pytest.raises(InvalidInput):
        emit_spoly(SimplePolyhedron("void"))


def test_parse_error_str():
    e = ParseError(3, 7, "SYNTAX", "expected id", "(")
    assert str(e) == "3:7: SYNTAX: expected id near '('"


@settings(max_examples=500)
@given(st.binary(max_size=200))
def test_parser_never_crashes_on_bytes(data):
    result = parse_spoly(data)
    assert isinstance(result, (list, SimplePolyhedron))


@settings(max_examples=300)
@given(st.sampled_from(NAMES), st.data())
def test_parser_never_crashes_on_mutations(name, data):
    text = bytearray(emit_spoly(catalog(name)).encode())
    for _ in range(data.draw(st.integers(1, 4))):
        pos = data.draw(st.integers(0, len(text)))
        op = data.draw(st.sampled_from(["insert", "delete", "replace"]))
        ch = data.draw(st.sampled_from(list(b" \n()>+-.#0123456789xyzeRCf")))
        if op == "insert":
            text[pos:pos] = bytes([ch])
        elif pos < len(text):
            if op == "delete":
                del text[pos]
            else:
                text[pos] = ch
    result = parse_spoly(bytes(text))
    if isinstance(result, list):
        for e in result:
            assert e.line >= 1 and e.column >= 1
    else:
        assert parse_spoly(emit_spoly(result)) == result


@pytest.mark.parametrize("name", COMPATIBLE)
def test_tri3_round_trip(name):
    t = thicken(catalog(name))
    text = emit_tri3(t)
    u = parse_tri3(text)
    assert u.gluings == t.gluings and u.provenance == t.provenance
    assert emit_tri3(u) == text


def test_tri3_gluings_listed_both_ways():
    text = emit_tri3(thicken(catalog("disc")))
    glue = [l.split() for l in text.splitlines() if l.startswith("glue")]
    pairs = {(a, b) for _, a, b, _ in glue}
    assert all((b, a) in pairs for a, b in pairs)


@pytest.mark.parametrize("text,code", [
    ("tri3 1\ntet 0 cell a\nglue 0.1 0.1 023\n", "SELF_GLUED"),
    ("tri3 2\ntet 0 cell a\ntet 1 cell a\nglue 0.3 1.3 012\n", "NOT_INVOLUTIVE"),
    ("tri3 2\ntet 0 cell a\n", "PROVENANCE_MISSING"),
    ("tri3 1\ntet 0 cell a\nglue 0.3 5.3 012\n", "BAD_GLUING"),
    ("tet 0 cell a\n", "SYNTAX"),
    ("", "SYNTAX"),
])
def test_tri3_errors(text, code):
    errors = parse_tri3(text)
    assert isinstance(errors, list)
    assert code in [e.code for e in errors]


@settings(max_examples=300)
@given(st.binary(max_size=120))
def test_tri3_parser_never_crashes(data):
    parse_tri3(data)


def test_report_schema_for_disc():
    data = json.loads(emit_report_json(analyze(catalog("disc"), 4)))
    assert data["compatible"] is True
    assert data["double_points"] == 0
    for key in ("polyhedron", "euler", "homology", "pi1", "compatible", "double_points", "decisions"):
        assert key in data
    for d in data["decisions"]:
        assert {"claim", "paper_ref", "hypotheses", "verdict"} <= set(d)


def test_report_for_bing_house():
    data = parse_report_json(emit_report_json(analyze(catalog("bing_house"), 4)))
    assert data["homology"]["H1"] == {"rank": 0, "torsion": []}
    assert data["homology"]["H2"] == {"rank": 0, "torsion": []}


def test_report_for_incompatible_circle():
    data = parse_report_json(emit_report_json(analyze(catalog("incompatible_circle"), 4)))
    assert data["compatible"] is False
    assert data["compatibility_witness"]


def test_report_keys_sorted_and_round_trip():
    text = emit_report_json(analyze(catalog("round_sum2"), 5))
    data = parse_report_json(text)
    assert emit_report_json(data) == text
    assert list(data) == sorted(data)
