"""Versioned JSON documents (objects and maps) and derivation certificates."""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import orjson
from pydantic import ValidationError

from ..errors import CertificateVersionError, DocumentError, MBError
from ..schemas import BuildSpec, CertificateModel, DocumentModel, FaceRef, MapModel, ObjectModel
from ..state import runtime
from .decor import DecoratedMap, MBSSet, decorate, identity_mb
from .derivation import Derivation, Stage, Step
from .generators import GeneratorId, collapsed_simplex, generator, groupoid_nerve
from .sset import FiniteSSet, SimplexRef, SSetMap, horn, boundary, point, standard, terminal


logger = logging.getLogger(__name__)

DOCUMENT_VERSION = "mbset/1"
CERTIFICATE_VERSION = "mbset.certificate/1"
CERTIFICATE_EXTENSION = ".mbd"

DUMP_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE


def dumps(obj: Any) -> bytes:
	return orjson.dumps(obj, option=DUMP_OPTIONS)


def _loads(text: Any) -> Any:
	try:
		return orjson.loads(text)
	except orjson.JSONDecodeError as exc:
		raise DocumentError(f"syntax error: {exc.msg}", line=exc.lineno, column=exc.colno) from None


def _loc(err: ValidationError) -> str:
	first = err.errors()[0]
	return ".".join(str(p) for p in first.get("loc", ())) or "document"


@dataclass(eq=False)
class Document:
	version: str
	objects: Dict[str, MBSSet] = field(default_factory=dict)
	maps: Dict[str, DecoratedMap] = field(default_factory=dict)
	meta: Dict[str, Any] = field(default_factory=dict)
	warnings: List[str] = field(default_factory=list)

	def object(self, name: str) -> MBSSet:
		try:
			return self.objects[name]
		except KeyError:
			raise DocumentError("unknown object", ident=name) from None

	def map(self, name: str) -> DecoratedMap:
		try:
			return self.maps[name]
		except KeyError:
			raise DocumentError("unknown map", ident=name) from None


# -- encoding -------------------------------------------------------------------

def ref_to_dict(ref: SimplexRef) -> Dict[str, Any]:
	return {"ops": list(ref.word), "of": ref.cell}


def ref_from_model(face: FaceRef) -> SimplexRef:
	return SimplexRef(face.of, tuple(face.ops))


def object_to_dict(X: MBSSet) -> Dict[str, Any]:
	U = X.under
	cells: Dict[str, List[Any]] = {}
	for k in range(U.max_dim + 1):
		if k == 0:
			cells["0"] = U.cells(0)
			continue
		cells[str(k)] = [{"id": c, "faces": [ref_to_dict(f) for f in U.faces_of(c)]} for c in U.cells(k)]
	return {
		"name": U.name,
		"cells": cells,
		"truncated": U.truncated,
		"marked": sorted(X.marked),
		"thin": sorted(X.thin),
		"lean": sorted(X.lean),
	}


def map_to_dict(f: DecoratedMap, source: str, target: str) -> Dict[str, Any]:
	return {
		"source": source,
		"target": target,
		"assignment": {c: ref_to_dict(r) for c, r in sorted(f.map.assignment.items())},
	}


def emit(doc: Document) -> bytes:
	"""Normal form: explicit cells, sorted decorations, explicit assignments."""
	names = {id(X): n for n, X in doc.objects.items()}
	maps = {}
	for name, f in doc.maps.items():
		maps[name] = map_to_dict(f, names[id(f.source)], names[id(f.target)])
	return dumps({
		"format": doc.version,
		"meta": doc.meta,
		"objects": {n: object_to_dict(X) for n, X in doc.objects.items()},
		"maps": maps,
	})


# -- decoding -------------------------------------------------------------------

def _explicit(name: str, model: ObjectModel, cap: int) -> FiniteSSet:
	dims: Dict[str, int] = {}
	faces: Dict[str, Tuple[SimplexRef, ...]] = {}
	for key, entries in (model.cells or {}).items():
		try:
			k = int(key)
		except ValueError:
			raise DocumentError(f"dimension key {key!r} is not an integer", ident=f"{name}.cells") from None
		for entry in entries:
			if isinstance(entry, str):
				if k != 0:
					raise DocumentError("only vertices may omit their faces", ident=f"{name}.{entry}")
				ident = entry
			else:
				ident = entry.id
				faces[ident] = tuple(ref_from_model(f) for f in entry.faces)
			if ident in dims:
				raise DocumentError("duplicate cell id", ident=f"{name}.{ident}")
			dims[ident] = k
	X = FiniteSSet(dims, faces, cap=cap, name=model.name or name, truncated=model.truncated)
	try:
		X.check()
	except MBError as exc:
		raise DocumentError(str(exc), ident=name) from None
	return X


def _built(name: str, spec: BuildSpec, cap: int) -> Tuple[FiniteSSet, Optional[MBSSet]]:
	"""The underlying object of a shorthand builder, plus default decorations when it has them."""
	kind = spec.kind
	if kind == "standard":
		return standard(_need(spec.n, name, "n"), cap), None
	if kind == "point":
		return point(cap), None
	if kind == "horn":
		return horn(_need(spec.n, name, "n"), _need(spec.i, name, "i"), cap)[0], None
	if kind == "boundary":
		return boundary(_need(spec.n, name, "n"), cap)[0], None
	if kind == "collapsed":
		return collapsed_simplex(_need(spec.n, name, "n"), cap), None
	if kind == "groupoid":
		return groupoid_nerve(cap=cap), None
	if kind == "generator":
		gen = generator(_need(spec.id, name, "id"), cap)
		X = gen.target if (spec.side or "target") == "target" else gen.source
		return X.under, X
	if kind == "fixture":
		from .fixtures import fixture

		fx = fixture(_need(spec.name, name, "name"), cap)
		X = fx.p.source if (spec.side or "source") == "source" else fx.p.target
		return X.under, X
	if kind == "pp":
		from .pushout_product import pushout_product

		inst = pushout_product(_need(spec.cofibration, name, "cofibration"), _need(spec.anodyne, name, "anodyne"), cap)
		X = inst.target if (spec.side or "target") == "target" else inst.source
		return X.under, X
	raise DocumentError(f"unknown builder kind {kind!r}", ident=name)


def _need(value: Any, name: str, key: str) -> Any:
	if value is None:
		raise DocumentError(f"builder needs {key!r}", ident=name)
	return value


def build_object(name: str, model: ObjectModel, cap: int, strict: bool, warnings: List[str]) -> MBSSet:
	if (model.build is None) == (model.cells is None):
		raise DocumentError("an object needs exactly one of 'build' and 'cells'", ident=name)
	defaults: Optional[MBSSet] = None
	if model.build is not None:
		X, defaults = _built(name, model.build, cap)
	else:
		X = _explicit(name, model, cap)
	marked = model.marked if model.marked is not None else (defaults.marked if defaults else None)
	thin = model.thin if model.thin is not None else (defaults.thin if defaults else None)
	lean = model.lean if model.lean is not None else (defaults.lean if defaults else None)
	try:
		obj, repairs = decorate(X, marked, thin, lean, strict=strict)
	except MBError as exc:
		raise DocumentError(str(exc), ident=name) from None
	warnings.extend(f"{name}: {r}" for r in repairs)
	return obj


def build_map(name: str, model: MapModel, objects: Dict[str, MBSSet], cap: int) -> DecoratedMap:
	build = model.build
	if isinstance(build, BuildSpec) and build.kind in ("generator", "fixture"):
		if build.kind == "generator":
			f = generator(_need(build.id, name, "id"), cap).inclusion
		else:
			from .fixtures import fixture

			f = fixture(_need(build.name, name, "name"), cap).p
		objects.setdefault(f"{name}.source", f.source)
		objects.setdefault(f"{name}.target", f.target)
		return f
	if model.source is None or model.target is None:
		raise DocumentError("a map needs 'source' and 'target'", ident=name)
	for end in (model.source, model.target):
		if end not in objects:
			raise DocumentError("map references an undeclared object", ident=f"{name}.{end}")
	A, B = objects[model.source], objects[model.target]
	if build == "terminal":
		if B.under.census() != [1]:
			raise DocumentError("terminal maps need a point target", ident=name)
		sm = terminal(A.under, B.under)
	elif build == "identity":
		if A is not B:
			raise DocumentError("identity maps need equal source and target", ident=name)
		return identity_mb(A)
	elif build == "inclusion":
		sm = SSetMap(A.under, B.under, {c: SimplexRef(c) for c in A.under.cells()})
	elif build is None:
		if model.assignment is None:
			raise DocumentError("a map needs 'build' or 'assignment'", ident=name)
		sm = SSetMap(A.under, B.under, {c: ref_from_model(r) for c, r in model.assignment.items()})
	else:
		raise DocumentError(f"unknown map builder {build!r}", ident=name)
	f = DecoratedMap(sm, A, B)
	try:
		f.check()
	except MBError as exc:
		raise DocumentError(str(exc), ident=name) from None
	return f


def parse(text: Any, strict: Optional[bool] = None) -> Document:
	strict = runtime.strict if strict is None else strict
	raw = _loads(text)
	if not isinstance(raw, dict) or "format" not in raw:
		raise DocumentError("missing format version", ident="format")
	if raw["format"] != DOCUMENT_VERSION:
		raise DocumentError(f"unsupported document format {raw['format']!r}", ident="format")
	try:
		model = DocumentModel.model_validate(raw)
	except ValidationError as exc:
		raise DocumentError(exc.errors()[0].get("msg", "invalid document"), ident=_loc(exc)) from None
	cap = int(model.meta.get("cap", runtime.cap))
	doc = Document(model.format, meta=dict(model.meta))
	for name, obj in model.objects.items():
		doc.objects[name] = build_object(name, obj, cap, strict, doc.warnings)
	for name, m in model.maps.items():
		doc.maps[name] = build_map(name, m, doc.objects, cap)
	for w in doc.warnings:
		logger.warning("document: %s", w)
	return doc


def load(path: str, strict: Optional[bool] = None) -> Document:
	try:
		with open(path, "rb") as fh:
			data = fh.read()
	except OSError as exc:
		raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
	return parse(data, strict)


# -- certificates ---------------------------------------------------------------

def certificate_dict(d: Derivation) -> Dict[str, Any]:
	return {
		"format": CERTIFICATE_VERSION,
		"cap": d.cap,
		"meta": d.meta,
		"ambient": object_to_dict(d.ambient),
		"start": d.start.to_dict(),
		"steps": [
			{"generator": str(s.generator), "phase": s.phase, "attach": {c: ref_to_dict(r) for c, r in s.attach}}
			for s in d.steps
		],
	}


def emit_certificate(d: Derivation) -> bytes:
	return dumps(certificate_dict(d))


def parse_certificate(text: Any) -> Derivation:
	raw = _loads(text)
	if not isinstance(raw, dict) or "format" not in raw:
		raise DocumentError("missing certificate version", ident="format")
	version = raw["format"]
	if version != CERTIFICATE_VERSION:
		raise CertificateVersionError(f"unsupported certificate version {version!r}", ident="format")
	try:
		model = CertificateModel.model_validate(raw)
	except ValidationError as exc:
		raise DocumentError(exc.errors()[0].get("msg", "invalid certificate"), ident=_loc(exc)) from None
	ambient = build_object("ambient", model.ambient, model.cap, True, [])
	st = model.start
	start = Stage(frozenset(st.cells), frozenset(st.marked), frozenset(st.thin), frozenset(st.lean))
	steps = []
	for idx, s in enumerate(model.steps):
		try:
			gid = GeneratorId.parse(s.generator)
		except MBError as exc:
			raise DocumentError(str(exc), ident=f"steps.{idx}.generator") from None
		steps.append(Step.make(gid, {c: ref_from_model(r) for c, r in s.attach.items()}, s.phase))
	return Derivation(ambient, start, steps, model.cap, dict(model.meta))


def load_certificate(path: str) -> Derivation:
	try:
		with open(path, "rb") as fh:
			data = fh.read()
	except OSError as exc:
		raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
	return parse_certificate(data)
