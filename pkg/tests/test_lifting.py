import pytest

from app.errors import CellError, MapError, ParameterError
from app.services.decor import DecoratedMap, flat, sharp
from app.services.fixtures import FIXTURES, fixture, over_point
from app.services.generators import generator
from app.services.lifting import (
	LiftSquare,
	Verdict,
	class_generators,
	classify_fibration,
	fibre,
	has_rlp,
	is_equivalence,
	mapping_space,
	solve_lift,
)
from app.services.sset import SimplexRef, SSetMap, standard, terminal


def _edge_square(v0: str, v1: str):
	gen = generator("C1:1", cap=3)
	A, B = gen.source, gen.target
	p = over_point(flat(standard(1, cap=3)))
	X = p.source
	top = DecoratedMap(SSetMap(A.under, X.under, {"0": SimplexRef(v0), "1": SimplexRef(v1)}), A, X)
	bottom = DecoratedMap(terminal(B.under, p.target.under), B, p.target)
	return LiftSquare(gen.inclusion, p, top, bottom)


def test_lift_of_boundary_into_edge():
	report = solve_lift(_edge_square("0", "1"))
	assert report.verdict == Verdict.LIFTS
	assert report.witness.map.assignment["01"] == SimplexRef("01")
	assert report.to_dict()["witness"]["01"] == "01"


def test_no_lift_against_the_orientation():
	report = solve_lift(_edge_square("1", "0"))
	assert report.verdict == Verdict.NO_LIFT
	assert "square" in report.to_dict()


def test_left_side_must_be_mono():
	sq = _edge_square("0", "1")
	A, B = sq.j.source, sq.j.target
	pinch = DecoratedMap(SSetMap(A.under, B.under, {"0": SimplexRef("0"), "1": SimplexRef("0")}), A, B)
	with pytest.raises(MapError):
		LiftSquare(pinch, sq.p, sq.top, sq.bottom).check()


def test_identity_of_point_lifts_everything():
	p = fixture("point", cap=3).p
	assert has_rlp(p, "A1:2:1", cap=3).verdict == Verdict.LIFTS
	report = classify_fibration(p, "MB", cap=3)
	assert report.passed
	assert report.verdict == "pass"


@pytest.mark.parametrize("name", ["point", "J-sharp", "J-flat-sharp", "Delta1-sharp", "A4-target", "Q2-identity"])
def test_fixture_sweeps_match_expectations(name):
	fx = fixture(name, cap=3)
	report = classify_fibration(fx.p, "MB", cap=3)
	assert report.verdict == fx.expect
	assert report.failing_generator == fx.failing


def test_marked_edge_over_point_fails_right_horn():
	report = has_rlp(fixture("Delta1-sharp", cap=3).p, "A4:2", cap=3)
	assert report.verdict == Verdict.NO_LIFT
	assert report.generator == "A4:2"
	assert report.squares >= 1


def test_budget_exhaustion_is_reported():
	report = has_rlp(fixture("J-sharp", cap=3).p, "A1:3:1", budget=1, cap=3)
	assert report.verdict == Verdict.BUDGET


def test_class_generators_skip_dimensions_above_cap():
	ids = [str(g) for g in class_generators("MB", 3)]
	assert "A2" not in ids
	assert "A1:3:2" in ids and "E:J" in ids
	with pytest.raises(ParameterError):
		class_generators("bogus", 3)


def test_equivalences():
	J = fixture("J-sharp", cap=3).p.source
	assert is_equivalence(J, "ab")
	D = sharp(standard(1, cap=3))
	assert not is_equivalence(D, "01")
	assert is_equivalence(D, SimplexRef("0", (0,)))


def test_fibre_of_projection():
	p = fixture("J-projection", cap=3).p
	F, inc = fibre(p, "0")
	assert F.under.census() == [2, 2, 2, 2]
	assert inc.is_mono()
	with pytest.raises(CellError):
		fibre(p, "01")


def test_mapping_space_of_triangle():
	ms = mapping_space(sharp(standard(2, cap=3)), "0", "2", cap=3)
	assert ms.space.census() == [1]
	assert ms.space.cells(0) == ["02"]
	assert ms.source["02"] == SimplexRef("02")


def _fibrant(name):
	fx = fixture(name, cap=3)
	if classify_fibration(fx.p, "MB", cap=3).verdict != "pass":
		pytest.skip(f"{name} is not MB-fibrant up to cap 3")
	return fx


@pytest.mark.parametrize("name", list(FIXTURES))
def test_fibrant_fixtures_lift_theta(name):
	fx = _fibrant(name)
	assert has_rlp(fx.p, "THETA", cap=3).verdict == Verdict.LIFTS


@pytest.mark.parametrize("name", list(FIXTURES))
def test_fibres_of_fibrant_fixtures(name):
	fx = _fibrant(name)
	for v in fx.p.target.under.cells(0):
		F, _ = fibre(fx.p, v)
		assert classify_fibration(over_point(F), "weak-S", cap=3).verdict == "pass"
		assert F.thin == F.lean
		assert F.marked == frozenset(e for e in F.under.cells(1) if is_equivalence(F, e))
