import pytest

from app.errors import DimensionCapError, ParameterError
from app.services.generators import (
	FAMILY_ORDER,
	GeneratorId,
	collapsed_simplex,
	generator,
	generator_dimension,
	groupoid_nerve,
	kan_certificate,
	list_generators,
)


def test_parse_and_format_ids():
	gid = GeneratorId.parse("A1:3:1")
	assert gid == GeneratorId("A1", (3, 1))
	assert str(gid) == "A1:3:1"
	assert str(GeneratorId.parse("E:J")) == "E:J"
	assert str(GeneratorId.parse("A5")) == "A5"


@pytest.mark.parametrize("text", ["A1:2:2", "A1:3", "A3:1", "S3:3", "C1:-1", "E:K", "Z9", "A1:x:1"])
def test_invalid_ids(text):
	with pytest.raises(ParameterError):
		GeneratorId.parse(text)


def test_ids_sort_in_family_order():
	ids = [GeneratorId.parse(t) for t in ("C1:0", "A3:2", "A1:3:1", "A1:2:1", "SCii")]
	ids.sort(key=lambda g: g.sort_key())
	assert [str(g) for g in ids] == ["SCii", "A1:2:1", "A1:3:1", "A3:2", "C1:0"]
	assert FAMILY_ORDER[0] == "SCi"


def test_inner_horn_generator():
	gen = generator("A1:2:1", cap=3)
	assert gen.source.under.census() == [3, 2]
	assert gen.new_cells == ["02", "012"]
	assert gen.source.thin == frozenset()
	assert gen.target.thin == frozenset({"012"})
	gen.inclusion.check()


def test_a2_scalings():
	gen = generator("A2", cap=5)
	assert gen.decoration_only
	assert gen.source.thin == frozenset({"024", "123", "013", "134", "012"})
	assert gen.target.thin == gen.source.thin | {"034", "014"}


def test_collapsed_left_horn_generator():
	gen = generator("A3:2", cap=3)
	assert gen.collapsed
	assert gen.target.under.census() == [2, 2, 1]
	assert gen.target.lean == frozenset({"012"})
	assert gen.target.thin == frozenset()


def test_right_horn_generator_marks_last_edge():
	gen = generator("A4:3", cap=3)
	assert gen.source.marked == frozenset({"23"})
	assert gen.target.lean == frozenset({"023"})
	assert "0123" in gen.new_cells


def test_point_inclusion_of_marked_edge():
	gen = generator("A5", cap=3)
	assert gen.source.under.census() == [1]
	assert gen.target.marked == frozenset({"01"})


def test_decoration_families_change_only_decorations():
	for text in ("S1", "S2", "S3:1", "S3:2", "S4", "S5", "E:J", "THETA"):
		gen = generator(text, cap=3)
		assert gen.decoration_only, text
	assert generator("S2", cap=3).target.thin == frozenset({"012"})
	assert generator("S1", cap=3).target.marked == frozenset({"01", "02", "12"})


def test_cofibration_generators():
	assert generator("C1:2", cap=3).new_cells == ["012"]
	assert generator("C1:0", cap=3).source.under.census() == []
	assert generator("C2", cap=3).target.marked == frozenset({"01"})
	assert generator("C3", cap=3).target.lean == frozenset({"012"})
	c4 = generator("C4", cap=3)
	assert c4.source.lean == frozenset({"012"}) and c4.target.thin == frozenset({"012"})


def test_generator_dimension_is_capped():
	assert generator_dimension(GeneratorId("A2")) == 4
	with pytest.raises(DimensionCapError):
		generator("A2", cap=3)


def test_listing():
	assert [str(g) for g in list_generators("A1", 3, cap=5)] == ["A1:2:1", "A1:3:1", "A1:3:2"]
	assert [str(g) for g in list_generators("C1", 2, cap=5)] == ["C1:0", "C1:1", "C1:2"]
	assert [str(g) for g in list_generators("E", cap=5)] == ["E:Delta0", "E:J"]
	with pytest.raises(DimensionCapError):
		list_generators("A3", 6, cap=5)


def test_collapsed_simplex_keeps_surviving_ids():
	Q = collapsed_simplex(3, 3)
	assert {"012", "013", "023", "0123"} <= set(Q.cells())
	assert Q.census() == [3, 5, 4, 1]


def test_groupoid_nerve_is_kan_up_to_cap():
	J = groupoid_nerve(cap=3)
	assert J.census() == [2, 2, 2, 2]
	assert J.truncated
	J.check()
	assert kan_certificate(J, cap=3).passed


def test_boundary_of_triangle_is_not_kan():
	gen = generator("C1:2", cap=3)
	cert = kan_certificate(gen.source.under, cap=3)
	assert not cert.passed
	assert cert.failures
