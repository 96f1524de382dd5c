import pytest

from app.errors import ParameterError
from app.services.subcomplexes import (
	b_object,
	extension_scaling,
	lambda_vec,
	named_subcomplex,
	parse_name,
	r_subcomplex,
	s_ext,
)


def test_r_subcomplex_census():
	R, inc = r_subcomplex(3, 2, cap=5)
	assert R.under.census() == [5, 9, 7, 2]
	assert inc.is_mono()
	inc.check()


def test_s_ext_keeps_marked_edge():
	S, inc = s_ext(3, 1, cap=5)
	assert len(S.under) == 12
	assert S.marked == frozenset({"23"})
	inc.check()


def test_extension_scaling_fan():
	T = extension_scaling(2, 0, cap=5)
	assert T.thin == frozenset({"123"})
	assert T.thin <= T.lean


def test_generalized_inner_horn():
	H, inc = lambda_vec(3, [1], cap=5)
	assert H.under.census() == [4, 6, 3]
	assert "023" not in H.under
	assert inc.target.thin == frozenset({"012"})


@pytest.mark.parametrize("positions", [[], [1, 2]])
def test_generalized_horn_rejects_bad_indices(positions):
	with pytest.raises(ParameterError):
		lambda_vec(4, positions, cap=5)


def test_b_object_glues_a_marked_edge():
	B, gamma = b_object(1, 0, cap=5)
	assert B.under.census() == [3, 2]
	assert len(B.marked) == 1
	assert gamma.is_mono()
	assert gamma.target.marked == frozenset({"12"})


def test_parse_and_lookup_by_name():
	assert parse_name("R(3,2)") == ("R", (3, 2))
	R, _ = named_subcomplex("R(3,2)", cap=5)
	assert R.under.census() == [5, 9, 7, 2]
	with pytest.raises(ParameterError):
		named_subcomplex("Q(1,1)", cap=5)
	with pytest.raises(ParameterError):
		named_subcomplex("R", (3,), cap=5)
	with pytest.raises(ParameterError):
		parse_name("R 3 2")
