import orjson
import pytest

from app.errors import CertificateVersionError, DocumentError
from app.services import documents
from app.services.derivation import derive_scripted, verify
from app.services.sset import SimplexRef


EDGE_DOC = {
	"format": "mbset/1",
	"meta": {"cap": 3},
	"objects": {
		"E": {
			"cells": {"0": ["a", "b"], "1": [{"id": "f", "faces": [{"of": "b"}, {"of": "a"}]}]},
			"marked": ["f"],
		},
		"P": {"build": {"kind": "point"}},
		"D": {"build": {"kind": "standard", "n": 1}},
	},
	"maps": {
		"p": {"source": "E", "target": "P", "build": "terminal"},
	},
}


def _text(doc):
	return orjson.dumps(doc)


def test_parse_explicit_object_and_terminal_map():
	doc = documents.parse(_text(EDGE_DOC))
	E = doc.object("E")
	assert E.under.census() == [2, 1]
	assert E.marked == frozenset({"f"})
	assert E.under.face(SimplexRef("f"), 0) == SimplexRef("b")
	p = doc.map("p")
	assert p.target is doc.object("P")
	assert p.map.image(SimplexRef("f")).degenerate


def test_unknown_names_raise():
	doc = documents.parse(_text(EDGE_DOC))
	with pytest.raises(DocumentError) as info:
		doc.map("q")
	assert info.value.ident == "q"
	with pytest.raises(DocumentError):
		doc.object("Z")


def test_emitted_document_parses_back():
	doc = documents.parse(_text(EDGE_DOC))
	again = documents.parse(documents.emit(doc))
	assert again.object("E").under.census() == [2, 1]
	assert again.object("E").marked == frozenset({"f"})
	assert set(again.maps) == {"p"}


def test_syntax_errors_carry_a_position():
	with pytest.raises(DocumentError) as info:
		documents.parse(b'{"format": "mbset/1",\n  "objects": [}')
	assert info.value.line == 2
	assert info.value.column is not None


def test_version_is_required():
	with pytest.raises(DocumentError):
		documents.parse(b'{"objects": {}}')
	with pytest.raises(DocumentError) as info:
		documents.parse(b'{"format": "mbset/2"}')
	assert info.value.ident == "format"


def test_thin_outside_lean_is_repaired_or_rejected():
	raw = {
		"format": "mbset/1",
		"objects": {"T": {"build": {"kind": "standard", "n": 2}, "thin": ["012"]}},
	}
	doc = documents.parse(_text(raw), strict=False)
	assert doc.object("T").lean == frozenset({"012"})
	assert len(doc.warnings) == 1
	assert doc.warnings[0].startswith("T: ")
	with pytest.raises(DocumentError):
		documents.parse(_text(raw), strict=True)


def test_builders():
	raw = {
		"format": "mbset/1",
		"objects": {
			"H": {"build": {"kind": "horn", "n": 3, "i": 0}},
			"G": {"build": {"kind": "generator", "id": "S2"}},
		},
		"maps": {"j": {"build": {"kind": "generator", "id": "A1:2:1"}}},
	}
	doc = documents.parse(_text(raw))
	assert doc.object("H").under.census() == [4, 6, 3]
	assert doc.object("G").thin == frozenset({"012"})
	assert doc.map("j").is_mono()
	assert "j.target" in doc.objects


def test_builder_parameters_are_checked():
	raw = {"format": "mbset/1", "objects": {"H": {"build": {"kind": "horn", "n": 3}}}}
	with pytest.raises(DocumentError) as info:
		documents.parse(_text(raw))
	assert info.value.ident == "H"
	raw["objects"]["H"] = {"build": {"kind": "standard", "n": 1}, "cells": {"0": ["x"]}}
	with pytest.raises(DocumentError):
		documents.parse(_text(raw))


def test_maps_must_respect_decorations():
	raw = dict(EDGE_DOC)
	raw["maps"] = {
		"q": {
			"source": "E",
			"target": "D",
			"assignment": {"a": {"of": "0"}, "b": {"of": "1"}, "f": {"of": "01"}},
		}
	}
	with pytest.raises(DocumentError) as info:
		documents.parse(_text(raw))
	assert info.value.ident == "q"


def test_certificate_round_trip_verifies():
	d = derive_scripted("indI", {"m": 3, "positions": [1]}, cap=5)
	text = documents.emit_certificate(d)
	assert orjson.loads(text)["format"] == documents.CERTIFICATE_VERSION
	back = documents.parse_certificate(text)
	assert len(back.steps) == len(d.steps)
	assert verify(back).ok


def test_certificate_versions(tmp_path):
	d = derive_scripted("indI", {"m": 3, "positions": [1]}, cap=5)
	raw = documents.certificate_dict(d)
	raw["format"] = "mbset.certificate/0"
	with pytest.raises(CertificateVersionError):
		documents.parse_certificate(orjson.dumps(raw))
	del raw["format"]
	with pytest.raises(DocumentError) as info:
		documents.parse_certificate(orjson.dumps(raw))
	assert not isinstance(info.value, CertificateVersionError)
	path = tmp_path / "cert.mbd"
	path.write_bytes(documents.emit_certificate(d))
	assert verify(documents.load_certificate(str(path))).ok
	with pytest.raises(DocumentError):
		documents.load_certificate(str(tmp_path / "none.mbd"))
