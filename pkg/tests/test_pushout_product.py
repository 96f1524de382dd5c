import pytest

from app.config import PACKAGED_MANIFEST
from app.errors import DocumentError, ParameterError
from app.services.case_queue import CaseQueue, run_job, run_jobs
from app.services.pushout_product import (
	CaseJob,
	CaseReport,
	TableReport,
	case_note,
	load_manifest,
	manifest_jobs,
	pushout_product,
	run_table,
	verify_case,
)


def test_pushout_product_of_boundary_and_marked_edge():
	inst = pushout_product("C1:1", "A5", cap=5)
	assert inst.target.under.census() == [4, 5, 2]
	assert inst.source.under.census() == [4, 3]
	assert inst.result.is_mono()
	assert not inst.truncated


def test_isomorphism_case():
	report = verify_case("C1:1", "E:Delta0", cap=3)
	assert report.verdict == "isomorphism"
	assert report.ok


def test_point_times_marked_edge_uses_the_prism():
	report = verify_case("C1:0", "A5", cap=3)
	assert report.verdict == "verified"
	assert report.strategy == "scripted:prism"
	assert len(report.digest) == 64
	assert report.family_pair == "C1xA5"


def test_point_times_inner_horn_is_found_automatically():
	report = verify_case("C1:0", "A1:2:1", cap=3)
	assert report.verdict == "verified"
	assert report.strategy == "auto"
	assert report.steps >= 1


def test_digest_is_deterministic():
	a = verify_case("C1:0", "A5", cap=3)
	b = verify_case("C1:0", "A5", cap=3)
	assert a.digest == b.digest


def test_case_families_are_checked():
	with pytest.raises(ParameterError):
		verify_case("A1:2:1", "A5", cap=3)
	with pytest.raises(ParameterError):
		verify_case("C1:1", "C2", cap=3)


def test_case_notes():
	assert "prism" in case_note("C1:2", "A5")
	assert "isomorphism" in case_note("C2", "A3:2")


@pytest.mark.slow
def test_nightmare_case():
	report = verify_case("C1:1", "A3:2", cap=5)
	assert report.verdict == "verified"
	assert report.strategy.startswith("scripted:nightmare")


def test_packaged_manifest_jobs():
	manifest = load_manifest(PACKAGED_MANIFEST)
	jobs = manifest_jobs(manifest)
	assert len(jobs) == 90
	assert jobs[0].key == "C1:0 (x) A1:2:1"
	assert jobs[-1].key == "C4 (x) E:J"
	assert all(j.budget == manifest.budget for j in jobs)


def test_manifest_overrides_cap(tmp_path):
	path = tmp_path / "m.json"
	path.write_text('{"format": "mbset.manifest/1", "cap": 4, "cofibrations": {"C3": [[]]}, "anodyne": {"A2": [[]]}, "overrides": {"C3xA2": {"cap": 6}}}')
	jobs = manifest_jobs(load_manifest(path))
	assert [(j.key, j.cap) for j in jobs] == [("C3 (x) A2", 6)]


def test_manifest_errors(tmp_path):
	broken = tmp_path / "broken.json"
	broken.write_text('{"format": "mbset.manifest/1",\n "cap": }')
	with pytest.raises(DocumentError) as info:
		load_manifest(broken)
	assert info.value.line == 2
	wrong = tmp_path / "wrong.json"
	wrong.write_text('{"format": "mbset.manifest/9", "cofibrations": {}, "anodyne": {}}')
	with pytest.raises(DocumentError):
		load_manifest(wrong)
	with pytest.raises(DocumentError):
		load_manifest(tmp_path / "missing.json")


def test_table_verdicts():
	ok = CaseReport("C1:0", "A5", "auto", "verified")
	iso = CaseReport("C2", "S1", "isomorphism", "isomorphism")
	open_ = CaseReport("C1:1", "A5", "auto", "unverified")
	bad = CaseReport("C1:2", "A5", "auto", "failed")
	assert TableReport([ok, iso]).verdict == "pass"
	table = TableReport([ok, open_, iso])
	assert table.pairs() == {"C1xA5": "unverified", "C2xS1": "verified"}
	assert table.verdict == "inconclusive"
	assert TableReport([ok, open_, bad]).verdict == "fail"
	assert TableReport([ok, iso]).to_dict()["verified_pairs"] == 2


def test_run_job_turns_cap_errors_into_unverified():
	report = run_job(CaseJob("C1:0", "A2", 3))
	assert report.verdict == "unverified"
	assert "cap" in report.reason


def test_queue_keeps_job_order():
	jobs = [CaseJob("C1:0", "A5", 3), CaseJob("C1:1", "E:Delta0", 3)]
	reports = run_jobs(jobs, workers=1)
	assert [r.key for r in reports] == [j.key for j in jobs]
	assert [r.verdict for r in reports] == ["verified", "isomorphism"]
	assert CaseQueue(0).workers == 1


def test_parallel_run_matches_sequential_run():
	jobs = [
		CaseJob("C1:0", "A5", 3),
		CaseJob("C1:0", "A1:2:1", 3),
		CaseJob("C1:1", "E:Delta0", 3),
		CaseJob("C1:0", "A2", 3),
	]
	sequential = TableReport(run_jobs(jobs, workers=1)).to_dict()
	parallel = TableReport(run_jobs(jobs, workers=3)).to_dict()
	assert parallel == sequential


@pytest.mark.slow
def test_packaged_table_passes():
	report = run_table(load_manifest(PACKAGED_MANIFEST), workers=1)
	assert report.verdict == "pass"
	assert len(report.pairs()) == 44
	assert not [r.key for r in report.cases if r.verdict in ("unverified", "failed")]
	assert report.to_dict()["verified_pairs"] == 44
