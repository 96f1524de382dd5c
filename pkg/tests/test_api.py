import pytest
from fastapi.testclient import TestClient

from app.main import app


@pytest.fixture
def client():
	return TestClient(app)


def test_health(client):
	res = client.get("/engine/health")
	assert res.status_code == 200
	body = res.json()
	assert body["ok"] is True
	assert body["runtime"]["cap"] == 5


def test_runtime_overrides(client):
	res = client.post("/api/runtime", json={"cap": 4, "format": "bogus"})
	assert res.json()["cap"] == 4
	assert res.json()["format"] == "text"
	assert client.get("/api/runtime").json()["cap"] == 4


def test_generator_lookup(client):
	res = client.get("/engine/generators/A1:2:1")
	assert res.status_code == 200
	body = res.json()
	assert body["id"] == "A1:2:1"
	assert body["new_cells"]
	assert client.get("/engine/generators/Z9").status_code == 422


def test_generator_listing(client):
	res = client.get("/engine/generators", params={"family": "C1", "max_n": 2})
	assert res.json()["generators"] == ["C1:0", "C1:1", "C1:2"]
	assert client.get("/engine/generators", params={"family": "A3", "max_n": 9}).status_code == 422


def test_pp_case(client):
	res = client.post("/engine/pp", json={"cofibration": "C1:0", "anodyne": "A5", "cap": 3})
	assert res.status_code == 200
	assert res.json()["verdict"] == "verified"
	bad = client.post("/engine/pp", json={"cofibration": "A5", "anodyne": "A5", "cap": 3})
	assert bad.status_code == 422


def test_scripted_certificate_verifies(client):
	res = client.post("/engine/derive/scripted", json={"name": "indI", "params": {"m": 3, "positions": [1]}})
	assert res.status_code == 200
	body = res.json()
	check = client.post("/engine/verify", json=body["certificate"])
	assert check.status_code == 200
	out = check.json()
	assert out["ok"] is True
	assert out["steps"] == body["steps"]
	assert out["digest"] == body["digest"]


def test_verify_rejects_unknown_versions(client):
	res = client.post("/engine/verify", json={"format": "mbset.certificate/7"})
	assert res.status_code == 422


def test_rlp_over_document(client):
	doc = {
		"format": "mbset/1",
		"meta": {"cap": 3},
		"maps": {"p": {"build": {"kind": "fixture", "name": "J-flat-sharp"}}},
	}
	res = client.post("/engine/rlp", json={"document": doc, "map": "p", "cap": 3})
	assert res.status_code == 200
	assert res.json()["verdict"] == "fail"
	res = client.post("/engine/rlp", json={"document": doc, "map": "p", "generator": "A1:2:1", "cap": 3})
	assert res.json()["verdict"] == "lifts"
