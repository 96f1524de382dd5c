from math import comb

import pytest

from app.errors import DerivationError, ParameterError
from app.services.derivation import (
	Derivation,
	Stage,
	Step,
	ZString,
	apply_step,
	decoration_closure,
	derive_auto,
	derive_scripted,
	path_vertices,
	verify,
	z_compare,
	z_strings,
)
from app.services.generators import CELL_FAMILIES, GeneratorId, generator
from app.services.decor import sharp
from app.services.sset import SimplexRef, standard
from app.state import runtime


def _inner_horn():
	gen = generator("A1:2:1", cap=3)
	step = Step.make(gen.id, {c: SimplexRef(c) for c in gen.target.under.cells()})
	return gen, step


def test_single_step_derivation_verifies():
	gen, step = _inner_horn()
	d = Derivation(gen.target, Stage.image(gen.inclusion), [step], 3)
	result = verify(d)
	assert result.ok
	assert result.final == Stage.of(gen.target)


def test_missing_steps_fail_at_the_end():
	gen, _ = _inner_horn()
	result = verify(Derivation(gen.target, Stage.image(gen.inclusion), [], 3))
	assert not result.ok
	assert result.failing_step == 0
	assert "misses" in result.reason


def test_repeated_step_is_rejected():
	gen, step = _inner_horn()
	result = verify(Derivation(gen.target, Stage.image(gen.inclusion), [step, step], 3))
	assert not result.ok
	assert result.failing_step == 1


def test_start_must_be_closed():
	gen, step = _inner_horn()
	start = Stage(frozenset({"01"}))
	result = verify(Derivation(gen.target, start, [step], 3))
	assert not result.ok
	assert result.failing_step is None


def test_apply_step_checks_source_decorations():
	gen = generator("S2", cap=3)
	step = Step.make(gen.id, {c: SimplexRef(c) for c in gen.target.under.cells()})
	bare = Stage(frozenset(gen.target.under.cells()))
	with pytest.raises(DerivationError):
		apply_step(gen.target, bare, step, 3)


def test_decoration_closure_promotes_lean_to_thin():
	gen = generator("S2", cap=3)
	stage, steps = decoration_closure(gen.target, Stage.image(gen.inclusion), cap=3)
	assert stage.thin == frozenset({"012"})
	assert [str(s.generator) for s in steps] == ["S2"]


def test_derive_auto_finds_inner_horn():
	gen = generator("A1:2:1", cap=3)
	res = derive_auto(gen.target, Stage.image(gen.inclusion), cap=3)
	assert res.verdict == "derived"
	assert verify(res.derivation).ok


def test_derive_auto_reports_no_derivation():
	gen = generator("C1:2", cap=3)
	ambient = gen.source
	start = Stage(frozenset({"0", "1", "2", "01", "12"}))
	res = derive_auto(ambient, start, cap=3)
	assert res.derivation is None
	assert res.verdict == "no-derivation"


def test_cut_kan_search_is_not_reported_as_no_derivation():
	ambient = sharp(standard(1, cap=3))
	start = Stage(frozenset({"0", "1", "01"}))
	assert derive_auto(ambient, start, cap=3).verdict == "no-derivation"
	runtime.set_from_dict({"kan_tries": 1})
	res = derive_auto(ambient, start, cap=3)
	assert res.derivation is None
	assert res.stats.truncated
	assert res.verdict == "budget-exhausted"


def test_z_strings_of_small_grid():
	assert [str(z) for z in z_strings(1, 2)] == ["∅", "(0,1)", "(0,2)"]


def test_z_strings_of_degenerate_grids():
	for n, m in ((0, 0), (0, 2), (2, 0)):
		assert z_strings(n, m) == [ZString((), ())]
	with pytest.raises(ParameterError):
		z_strings(-1, 2)


def test_z_order_is_a_strict_total_order():
	for n in range(4):
		for m in range(4):
			zs = z_strings(n, m)
			assert len(zs) == sum(comb(n, k) * comb(m, k) for k in range(min(n, m) + 1))
			for x in zs:
				for y in zs:
					c = z_compare(x, y, n, m)
					assert c in (-1, 0, 1)
					assert (c == 0) == (x == y)
					assert z_compare(y, x, n, m) == -c
					for w in zs:
						if c < 0 and z_compare(y, w, n, m) < 0:
							assert z_compare(x, w, n, m) < 0
			assert all(z_compare(x, y, n, m) == -1 for x, y in zip(zs, zs[1:]))


def test_z_order():
	def z(*vals):
		return ZString.from_interleaved(vals)

	assert z_compare(z(1, 2), z(0, 1, 2, 3), 5, 5) == -1
	assert z_compare(z(0, 1, 3, 2), z(0, 1, 2, 2), 5, 5) == -1
	assert z_compare(z(0, 1, 2, 2), z(0, 2, 1, 4), 5, 5) == -1
	assert z_compare(z(0, 2, 1, 4), z(0, 2, 1, 4), 5, 5) == 0


def test_path_vertices():
	assert path_vertices(1, 2, ZString((), ())) == [(0, 0), (1, 0), (1, 1), (1, 2)]
	assert path_vertices(1, 2, ZString((0,), (1,))) == [(0, 0), (0, 1), (1, 1), (1, 2)]
	with pytest.raises(ParameterError):
		path_vertices(1, 2, ZString((1,), (1,)))


def test_scripted_inner_induction():
	d = derive_scripted("indI", {"m": 3, "positions": [1]}, cap=5)
	assert verify(d).ok
	assert [str(s.generator) for s in d.steps if s.generator.family in CELL_FAMILIES] == ["A1:3:1"]


def test_scripted_parameter_errors():
	with pytest.raises(ParameterError):
		derive_scripted("indI", {"m": 3, "positions": [0]}, cap=5)
	with pytest.raises(ParameterError):
		derive_scripted("spiral", {}, cap=5)
	with pytest.raises(ParameterError):
		derive_scripted("nightmare", {"n": 1}, cap=5)


@pytest.mark.slow
def test_scripted_nightmare_has_one_phase_per_z_string():
	d = derive_scripted("nightmare", {"n": 1, "m": 2}, cap=5)
	assert verify(d).ok
	assert len(d.phases("z=")) == 3


@pytest.mark.slow
def test_scripted_prism():
	d = derive_scripted("prism", {"n": 1}, cap=5)
	assert verify(d).ok
	assert d.phases() == ["sigma_0", "sigma_1"]
	cells = [s.generator.family for s in d.steps if s.generator.family in CELL_FAMILIES]
	assert cells == ["A1", "A4"]


def test_step_ids_round_trip_through_generator_ids():
	gen, step = _inner_horn()
	assert step.generator == GeneratorId("A1", (2, 1))
	assert step.attach_map["02"] == SimplexRef("02")
