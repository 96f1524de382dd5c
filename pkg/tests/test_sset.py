from math import comb

import pytest

from app.errors import CellError, DimensionCapError, MapError, ParameterError, StructureError
from app.services.sset import (
	FiniteSSet,
	SimplexRef,
	SSetMap,
	boundary,
	compose,
	horn,
	identity,
	point,
	product,
	pushout,
	simplex_map,
	standard,
	terminal,
)


def test_standard_simplex_census():
	D = standard(4, cap=5)
	assert len(D) == 31
	assert D.census() == [5, 10, 10, 5, 1]
	assert D.max_dim == 4
	D.check()


def test_standard_respects_cap():
	with pytest.raises(DimensionCapError):
		standard(6, cap=5)
	with pytest.raises(ParameterError):
		standard(-1, cap=5)


def test_empty_object_has_negative_dimension():
	E = FiniteSSet({}, {}, cap=3)
	assert E.max_dim == -1
	assert E.census() == []


def test_face_and_degeneracy_identities():
	D = standard(1, cap=3)
	top = SimplexRef("01")
	s0 = D.degeneracy(top, 0)
	assert s0 == SimplexRef("01", (0,))
	assert s0.degenerate
	assert D.face(s0, 0) == top
	assert D.face(s0, 1) == top
	assert D.face(s0, 2) == SimplexRef("0", (0,))
	assert s0.label() == "01|0"


def test_vertices_of_degenerate_simplex():
	D = standard(2, cap=3)
	ref = D.degeneracy(SimplexRef("012"), 1)
	assert D.vertices(ref) == ("0", "1", "1", "2")


def test_cells_sorted_by_dimension_then_id():
	D = standard(2, cap=3)
	assert D.cells() == ["0", "1", "2", "01", "02", "12", "012"]
	assert D.cells(1) == ["01", "02", "12"]


def test_unknown_cell_is_reported():
	D = standard(1, cap=2)
	with pytest.raises(CellError):
		D.dim("7")


def test_check_rejects_broken_faces():
	dims = {"a": 0, "b": 0, "e": 1, "t": 2}
	faces = {
		"e": (SimplexRef("b"), SimplexRef("a")),
		"t": (SimplexRef("e"), SimplexRef("e"), SimplexRef("e")),
	}
	X = FiniteSSet(dims, faces, cap=3)
	with pytest.raises(StructureError):
		X.check()


def test_horn_and_boundary():
	H, inc = horn(3, 0, cap=3)
	assert H.census() == [4, 6, 3]
	assert "123" not in H
	assert inc.is_mono()
	B, _ = boundary(2, cap=3)
	assert B.census() == [3, 3]


def test_simplex_map_and_composition():
	D = standard(2, cap=3)
	f = simplex_map(D, SimplexRef("02"))
	f.check()
	assert f.image(SimplexRef("0")) == SimplexRef("0")
	assert f.image(SimplexRef("1")) == SimplexRef("2")
	g = compose(f, identity(D))
	assert g.image(SimplexRef("01")) == SimplexRef("02")


def test_terminal_map_is_not_mono():
	D = standard(2, cap=3)
	t = terminal(D)
	t.check()
	assert t.image(SimplexRef("012")) == SimplexRef("0", (1, 0))
	assert not t.is_mono()
	assert identity(D).is_isomorphism()


def test_map_check_catches_non_commuting_assignment():
	D = standard(1, cap=2)
	bad = SSetMap(D, D, {"0": SimplexRef("1"), "1": SimplexRef("0"), "01": SimplexRef("01")})
	with pytest.raises(MapError):
		bad.check()


def test_square_product_census():
	P, p1, p2 = product(standard(1, cap=3), standard(1, cap=3))
	assert P.census() == [4, 5, 2]
	assert not P.truncated
	p1.check()
	p2.check()


@pytest.mark.parametrize("n,m", [(1, 1), (1, 2), (2, 2), (1, 3)])
def test_product_top_cells_are_shuffles(n, m):
	P, _, _ = product(standard(n, cap=5), standard(m, cap=5))
	assert len(P.cells(n + m)) == comb(n + m, n)


@pytest.mark.slow
@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("m", range(1, 5))
def test_shuffle_census(n, m):
	P, _, _ = product(standard(n, cap=n + m), standard(m, cap=n + m))
	assert not P.truncated
	assert P.max_dim == n + m
	assert len(P.cells(n + m)) == comb(n + m, n)


def test_product_truncates_above_cap():
	P, _, _ = product(standard(3, cap=5), standard(3, cap=5))
	assert P.truncated
	assert P.max_dim == 5


def test_product_pair_normal_form():
	P, _, _ = product(standard(1, cap=3), standard(1, cap=3))
	ref = P.pair(SimplexRef("01", (0,)), SimplexRef("01", (0,)))
	assert ref == SimplexRef("<01;01>", (0,))


def test_edge_collapse_pushout():
	D, E, V = standard(2, cap=3), standard(1, cap=3), point(cap=3)
	edge = SSetMap(E, D, {"0": SimplexRef("0"), "1": SimplexRef("1"), "01": SimplexRef("01")})
	crush = terminal(E, V)
	res = pushout(edge, crush)
	assert res.obj.census() == [2, 2, 1]
	assert res.in_b.image(SimplexRef("01")).degenerate
	assert res.in_b.image(SimplexRef("1")) == SimplexRef("0")
	res.obj.check()


def test_pushout_gluing_vertices_of_triangle():
	D = standard(2, cap=3)
	V = D.restrict(["0", "1", "2"], name="vertices")
	inc = SSetMap(V, D, {c: SimplexRef(c) for c in V.cells()})
	res = pushout(inc, terminal(V))
	assert res.obj.census() == [1, 3, 1]
	res.obj.check()


def test_pushout_needs_common_source():
	D = standard(1, cap=2)
	with pytest.raises(MapError):
		pushout(identity(D), identity(standard(1, cap=2)))
