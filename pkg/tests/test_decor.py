import pytest

from app.errors import CellError, DecorationError
from app.services.decor import (
	DecoratedMap,
	MBSSet,
	ScaledSSet,
	decorate,
	flat,
	identity_mb,
	product_mb,
	restrict,
	sharp,
	tensor,
	translate,
)
from app.services.sset import SimplexRef, identity, point, standard


def test_flat_and_sharp():
	D = standard(2, cap=3)
	assert flat(D).marked == frozenset()
	S = sharp(D)
	assert S.marked == frozenset({"01", "02", "12"})
	assert S.thin == S.lean == frozenset({"012"})


def test_degenerate_simplices_always_decorated():
	X = flat(standard(1, cap=3))
	assert X.is_marked(SimplexRef("0", (0,)))
	assert X.is_thin(SimplexRef("01", (0,)))
	assert X.is_lean(SimplexRef("01", (1,)))
	assert not X.is_marked(SimplexRef("01"))


def test_decorate_repairs_thin_outside_lean():
	D = standard(2, cap=3)
	X, repairs = decorate(D, thin=["012"], strict=False)
	assert X.lean == frozenset({"012"})
	assert len(repairs) == 1


def test_decorate_strict_rejects_thin_outside_lean():
	with pytest.raises(DecorationError):
		decorate(standard(2, cap=3), thin=["012"], strict=True)


def test_decorate_rejects_bad_cells():
	D = standard(2, cap=3)
	with pytest.raises(DecorationError):
		decorate(D, marked=["012"])
	with pytest.raises(CellError):
		decorate(D, marked=["03"])
	with pytest.raises(DecorationError):
		decorate(D, marked="partial")


def test_mbsset_check():
	D = standard(2, cap=3)
	with pytest.raises(DecorationError):
		MBSSet(D, thin=frozenset({"012"})).check()
	sharp(D).check()


def test_decorated_map_must_preserve_marking():
	D = standard(1, cap=3)
	ok = DecoratedMap(identity(D), flat(D), sharp(D))
	ok.check()
	bad = DecoratedMap(identity(D), sharp(D), flat(D))
	assert bad.violations() == ["marked cell 01 maps to undecorated 01"]
	with pytest.raises(DecorationError):
		bad.check()


def test_restrict_keeps_decorations_on_the_closure():
	S = sharp(standard(2, cap=3))
	sub, inc = restrict(S, ["01"])
	assert sub.under.census() == [2, 1]
	assert sub.marked == frozenset({"01"})
	inc.check()


def test_product_decorations_need_both_sides():
	P, pr1, pr2 = product_mb(sharp(standard(1, cap=3)), flat(standard(1, cap=3)))
	# marked only where the flat side is degenerate
	assert len(P.marked) == 2
	assert all(P.under.components[c][1].degenerate for c in P.marked)
	pr1.check()
	pr2.check()


def test_tensor_scales_every_triangle_of_the_first_factor():
	K = flat(standard(2, cap=3))
	T, _, _ = tensor(K, flat(point(cap=3)))
	P, _, _ = product_mb(K, flat(point(cap=3)))
	assert len(T.thin) == 1
	assert P.thin == frozenset()


def test_translations_between_scaled_and_marked_biscaled():
	D = standard(2, cap=3)
	L = translate("L", ScaledSSet(D, frozenset({"012"})))
	assert isinstance(L, MBSSet)
	assert L.marked == frozenset()
	assert L.thin == L.lean == frozenset({"012"})
	back = translate("U", L)
	assert isinstance(back, ScaledSSet)
	assert back.thin == frozenset({"012"})
	with pytest.raises(DecorationError):
		translate("L", L)


def test_identity_is_decorated():
	S = sharp(standard(2, cap=3))
	f = identity_mb(S)
	f.check()
	assert f.is_mono()
