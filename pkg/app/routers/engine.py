from fastapi import APIRouter, HTTPException
from typing import Any, Dict, Optional
import logging

from .. import schemas
from ..errors import MBError
from ..state import runtime
from ..services.derivation import derive_scripted, verify
from ..services.documents import certificate_dict, dumps, object_to_dict, parse, parse_certificate
from ..services.generators import FAMILY_ORDER, generator, list_generators
from ..services.lifting import classify_fibration, has_rlp
from ..services.pushout_product import digest_of, verify_case

router = APIRouter(prefix="/engine", tags=["engine"])

logger = logging.getLogger(__name__)


def _fail(exc: MBError) -> HTTPException:
	logger.info("request rejected: %s", exc)
	return HTTPException(status_code=422, detail=str(exc))


@router.get("/health")
def health() -> Dict[str, Any]:
	return {"ok": True, "runtime": runtime.to_dict()}


@router.get("/generators")
def get_generators(family: Optional[str] = None, max_n: Optional[int] = None) -> Dict[str, Any]:
	try:
		families = [family] if family else list(FAMILY_ORDER)
		return {"generators": [str(g) for fam in families for g in list_generators(fam, max_n, runtime.cap)]}
	except MBError as e:
		raise _fail(e)


@router.get("/generators/{gid}")
def get_generator(gid: str, cap: Optional[int] = None) -> Dict[str, Any]:
	try:
		gen = generator(gid, cap or runtime.cap)
	except MBError as e:
		raise _fail(e)
	return {
		"id": str(gen.id),
		"source": object_to_dict(gen.source),
		"target": object_to_dict(gen.target),
		"new_cells": gen.new_cells,
	}


@router.post("/verify", response_model=schemas.VerifyResultOut)
def verify_certificate(payload: Dict[str, Any]):
	try:
		d = parse_certificate(dumps(payload))
		result = verify(d)
	except MBError as e:
		raise _fail(e)
	return schemas.VerifyResultOut(
		ok=result.ok,
		failing_step=result.failing_step,
		reason=result.reason,
		steps=len(d.steps),
		digest=digest_of(d) if result.ok else None,
	)


@router.post("/derive/scripted")
def scripted(payload: schemas.ScriptedRequest) -> Dict[str, Any]:
	try:
		d = derive_scripted(payload.name, payload.params, payload.cap or runtime.cap, payload.budget or runtime.budget)
	except MBError as e:
		raise _fail(e)
	return {"steps": len(d.steps), "phases": d.phases(), "digest": digest_of(d), "certificate": certificate_dict(d)}


@router.post("/pp")
def pushout_product_case(payload: schemas.CaseRequest) -> Dict[str, Any]:
	try:
		report = verify_case(payload.cofibration, payload.anodyne, payload.cap or runtime.cap, payload.budget or runtime.budget)
	except MBError as e:
		raise _fail(e)
	return report.to_dict()


@router.post("/rlp")
def rlp(payload: schemas.RlpRequest) -> Dict[str, Any]:
	cap = payload.cap or runtime.cap
	budget = payload.budget or runtime.budget
	try:
		doc = parse(dumps(payload.document))
		p = doc.map(payload.map)
		if payload.generator:
			return has_rlp(p, payload.generator, budget, cap).to_dict()
		return classify_fibration(p, payload.cls, cap, budget).to_dict()
	except MBError as e:
		raise _fail(e)
