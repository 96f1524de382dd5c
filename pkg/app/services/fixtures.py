"""Curated fibrations with known lifting behaviour, positive and negative."""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional

from ..errors import ParameterError
from ..state import runtime
from .decor import DecoratedMap, MBSSet, flat, identity_mb, product_mb, sharp
from .generators import collapsed_simplex, generator, groupoid_nerve
from .sset import FiniteSSet, point, standard, terminal


logger = logging.getLogger(__name__)


@dataclass(eq=False)
class Fixture:
	name: str
	p: DecoratedMap
	description: str
	expect: Optional[str] = None  # MB verdict when known
	failing: Optional[str] = None

	def to_dict(self) -> Dict[str, object]:
		return {
			"name": self.name,
			"description": self.description,
			"source": self.p.source.name,
			"base": self.p.target.name,
			"cells": self.p.source.under.census(),
			"expect": self.expect,
			"failing": self.failing,
		}


def over_point(X: MBSSet) -> DecoratedMap:
	pt = point(X.under.cap)
	return DecoratedMap(terminal(X.under, pt), X, sharp(pt))


def _scaled(X: FiniteSSet, marked: bool) -> MBSSet:
	tri = frozenset(X.cells(2))
	return MBSSet(X, frozenset(X.cells(1)) if marked else frozenset(), tri, tri)


def _point(cap: int) -> Fixture:
	return Fixture("point", identity_mb(sharp(point(cap))), "identity of the point", "pass")


def _j_sharp(cap: int) -> Fixture:
	X = _scaled(groupoid_nerve(cap=cap), marked=True)
	return Fixture("J-sharp", over_point(X), "contractible groupoid, everything decorated, over the point", "pass")


def _j_flat_sharp(cap: int) -> Fixture:
	X = _scaled(groupoid_nerve(cap=cap), marked=False)
	return Fixture("J-flat-sharp", over_point(X), "groupoid nerve with no marked edges: equivalences go unmarked", "fail", "E:J")


def _delta1_sharp(cap: int) -> Fixture:
	return Fixture("Delta1-sharp", over_point(sharp(standard(1, cap))), "a marked edge that is not an equivalence", "fail", "A4:2")


def _q2_flat(cap: int) -> Fixture:
	return Fixture("Q2-flat", over_point(flat(collapsed_simplex(2, cap))), "a triangle on a collapsed edge, nothing decorated")


def _horn_collapsed(cap: int) -> Fixture:
	Q = collapsed_simplex(3, cap)
	H = Q.restrict(["012", "013", "023"], name="Lambda^3_0/01")
	return Fixture("horn-collapsed", over_point(flat(H)), "outer horn on a collapsed edge: its left-degenerate face is not coCartesian")


def _q2_identity(cap: int) -> Fixture:
	return Fixture("Q2-identity", identity_mb(sharp(collapsed_simplex(2, cap))), "identity on a decorated triangle with a collapsed edge: a coCartesian left-degenerate triangle", "pass")


def _a4_target(cap: int) -> Fixture:
	T = generator("A4:2", cap).target
	return Fixture("A4-target", identity_mb(T), "identity on the marked right-horn target", "pass")


def _j_projection(cap: int) -> Fixture:
	F = _scaled(groupoid_nerve(cap=cap), marked=True)
	S = sharp(standard(1, cap))
	_, _, p2 = product_mb(F, S, cap)
	return Fixture("J-projection", p2, "projection of a fibrant fibre times an edge onto the edge")


FIXTURES: Dict[str, Callable[[int], Fixture]] = {
	"point": _point,
	"J-sharp": _j_sharp,
	"J-flat-sharp": _j_flat_sharp,
	"Delta1-sharp": _delta1_sharp,
	"Q2-flat": _q2_flat,
	"horn-collapsed": _horn_collapsed,
	"Q2-identity": _q2_identity,
	"A4-target": _a4_target,
	"J-projection": _j_projection,
}


@lru_cache(maxsize=None)
def _build(name: str, cap: int) -> Fixture:
	return FIXTURES[name](cap)


def fixture(name: str, cap: Optional[int] = None) -> Fixture:
	if name not in FIXTURES:
		raise ParameterError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
	cap = runtime.analysis_cap if cap is None else cap
	return _build(name, cap)


def list_fixtures(cap: Optional[int] = None) -> List[Fixture]:
	return [fixture(name, cap) for name in FIXTURES]
