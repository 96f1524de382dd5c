import pytest

from app.errors import ParameterError
from app.services import analyze
from app.services.analyze import Answer, CONDITIONS
from app.services.fixtures import FIXTURES, fixture, list_fixtures
from app.services.sset import SimplexRef, standard


def test_left_degenerate_triangles():
	D = standard(2, cap=3)
	assert not analyze.is_left_degenerate(D, SimplexRef("012"))
	Q = fixture("Q2-flat", cap=3).p.source
	assert analyze.is_left_degenerate(Q.under, SimplexRef("012"))
	tau, eta = analyze.left_degeneration(Q, "012", cap=3)
	assert tau == SimplexRef("012")
	assert eta == SimplexRef("012", (1,))


def test_collapsed_triangle_is_not_cocartesian():
	p = fixture("Q2-flat", cap=3).p
	v = analyze.is_cocartesian_triangle(p, "012", cap=3)
	assert v.answer == Answer.NO
	assert v.witness["n"] == 3
	assert v.to_dict()["up_to_cap"] == 3


def test_both_cocartesian_tests_agree_on_collapsed_triangle():
	p = fixture("Q2-flat", cap=3).p
	assert analyze.cocartesian_agreement(p, cap=3) == {"012": ("no", "no")}


def test_open_outer_horn_blocks_cocartesian_face():
	p = fixture("horn-collapsed", cap=3).p
	assert analyze.is_cocartesian_triangle(p, "013", cap=3).answer == Answer.NO


def test_degenerate_input_is_cocartesian():
	p = fixture("Q2-flat", cap=3).p
	v = analyze.is_cocartesian_triangle(p, SimplexRef("02", (0,)), cap=3)
	assert v.yes
	assert v.reason == "degenerate"


def test_edge_checks_validate_input():
	p = fixture("Delta1-sharp", cap=3).p
	with pytest.raises(ParameterError):
		analyze.is_p_cartesian_edge(p, "01", mode="fancy")
	with pytest.raises(ParameterError):
		analyze.is_p_cartesian_edge(p, "0")
	with pytest.raises(ParameterError):
		analyze.is_cocartesian_triangle(p, "01")


def test_profile_of_point_passes():
	profile = analyze.check_family(fixture("point", cap=3).p, cap=3)
	assert profile.verdict == "pass"
	assert [r.name for r in profile.conditions] == list(CONDITIONS)
	assert profile.flags["O2"] == "pass"
	assert profile.base is not None and profile.base.verdict == "pass"


@pytest.mark.parametrize("name", ["Delta1-sharp", "J-flat-sharp"])
def test_marking_mismatch_fails_the_profile(name):
	p = fixture(name, cap=3).p
	profile = analyze.check_family(p, cap=3, with_base=False)
	assert profile.condition(CONDITIONS[3]).verdict == "fail"
	assert profile.verdict == "fail"
	assert profile.to_dict()["verdict"] == "fail"


@pytest.mark.parametrize("name", list(FIXTURES))
def test_profile_agrees_with_generator_sweep(name):
	result = analyze.agreement(fixture(name, cap=3).p, cap=3)
	assert result["profile"] == result["lifting"]


def test_marked_edge_over_unscaled_triangle_is_cartesian():
	p = fixture("A4-target", cap=3).p
	assert analyze.is_p_cartesian_edge(p, "12", cap=3).yes
	profile = analyze.check_family(p, cap=3, with_base=False)
	assert profile.condition(CONDITIONS[3]).verdict == "pass"
	assert profile.verdict == "pass"


def test_unmarked_edges_over_unmarked_base_edges_are_not_required_to_be_marked():
	p = fixture("A4-target", cap=3).p
	assert analyze.over_marked(p, frozenset({"01", "02", "12"})) == frozenset({"12"})


def test_cocartesian_left_degenerate_triangle_agrees_in_mapping_space():
	p = fixture("Q2-identity", cap=3).p
	assert analyze.cocartesian_agreement(p, cap=3) == {"012": ("yes", "yes")}


@pytest.mark.parametrize("name", list(FIXTURES))
def test_cocartesian_tests_agree_across_fixtures(name):
	for cell, (direct, via) in analyze.cocartesian_agreement(fixture(name, cap=3).p, cap=3).items():
		assert direct == via, cell


def test_six_conditions_are_named():
	records = analyze.six_conditions(fixture("point", cap=3).p, cap=3)
	assert [r.name for r in records] == list(CONDITIONS)
	assert all(r.verdict == "pass" for r in records)


def test_fixture_listing():
	names = [fx.name for fx in list_fixtures(cap=3)]
	assert names[0] == "point"
	assert "horn-collapsed" in names
	with pytest.raises(ParameterError):
		fixture("nope")
