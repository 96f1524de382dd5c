import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

from ..errors import CellError, DecorationError, MapError
from ..state import runtime
from .sset import (
	FiniteSSet,
	ProductSSet,
	PushoutResult,
	SimplexRef,
	SSetMap,
	compose,
	identity,
	product,
	product_map,
	pushout,
)


logger = logging.getLogger(__name__)

DecorationSpec = Union[str, Iterable[str], None]


@dataclass(eq=False)
class MBSSet:
	"""Marked biscaled simplicial set: marked edges, thin triangles inside lean triangles.

	Degenerate edges and triangles are always decorated and never listed.
	"""

	under: FiniteSSet
	marked: FrozenSet[str] = frozenset()
	thin: FrozenSet[str] = frozenset()
	lean: FrozenSet[str] = frozenset()

	@property
	def name(self) -> str:
		return self.under.name

	def is_marked(self, ref: SimplexRef) -> bool:
		return ref.degenerate or ref.cell in self.marked

	def is_thin(self, ref: SimplexRef) -> bool:
		return ref.degenerate or ref.cell in self.thin

	def is_lean(self, ref: SimplexRef) -> bool:
		return ref.degenerate or ref.cell in self.lean

	def decorations(self) -> Tuple[FrozenSet[str], FrozenSet[str], FrozenSet[str]]:
		return self.marked, self.thin, self.lean

	def same_decorations(self, other: "MBSSet") -> bool:
		return self.decorations() == other.decorations()

	def check(self) -> None:
		for label, cells, k in (("marked", self.marked, 1), ("thin", self.thin, 2), ("lean", self.lean, 2)):
			for c in cells:
				if c not in self.under:
					raise CellError(c, f"{label} set of {self.name}")
				if self.under.dim(c) != k:
					raise DecorationError(f"{label} cell {c} is not {k}-dimensional")
		if not self.thin <= self.lean:
			raise DecorationError(f"thin triangles {sorted(self.thin - self.lean)} are not lean")


def resolve_decoration(X: FiniteSSet, spec: DecorationSpec, k: int, what: str) -> FrozenSet[str]:
	if spec is None or spec == "flat":
		return frozenset()
	if spec == "sharp":
		return frozenset(X.cells(k))
	if isinstance(spec, str):
		raise DecorationError(f"unknown {what} shorthand {spec!r}")
	out = frozenset(spec)
	for c in out:
		if c not in X:
			raise CellError(c, f"{what} set of {X.name}")
		if X.dim(c) != k:
			raise DecorationError(f"{what} cell {c} is not {k}-dimensional")
	return out


def decorate(
	X: FiniteSSet,
	marked: DecorationSpec = None,
	thin: DecorationSpec = None,
	lean: DecorationSpec = None,
	strict: Optional[bool] = None,
) -> Tuple[MBSSet, List[str]]:
	"""Attach decorations, closing the lean set under thin triangles.

	Returns the decorated object and the list of repairs made; under strict mode a
	needed repair is an error instead.
	"""
	strict = runtime.strict if strict is None else strict
	m = resolve_decoration(X, marked, 1, "marked")
	t = resolve_decoration(X, thin, 2, "thin")
	l = resolve_decoration(X, lean, 2, "lean")
	repairs: List[str] = []
	missing = t - l
	if missing:
		if strict:
			raise DecorationError(f"thin triangles {sorted(missing)} are not lean")
		repairs.append(f"added thin triangles {sorted(missing)} to the lean set")
		logger.warning("decorate %s: %s", X.name, repairs[-1])
		l = l | t
	return MBSSet(X, m, t, l), repairs


def flat(X: FiniteSSet) -> MBSSet:
	return MBSSet(X)


def sharp(X: FiniteSSet) -> MBSSet:
	tri = frozenset(X.cells(2))
	return MBSSet(X, frozenset(X.cells(1)), tri, tri)


@dataclass(eq=False)
class ScaledSSet:
	under: FiniteSSet
	thin: FrozenSet[str] = frozenset()


def left_adjoint(S: ScaledSSet) -> MBSSet:
	"""Scaled objects as flat-marked objects whose two scalings agree."""
	return MBSSet(S.under, frozenset(), S.thin, S.thin)


def forget(X: MBSSet) -> ScaledSSet:
	return ScaledSSet(X.under, X.thin)


def translate(direction: str, obj: Union[MBSSet, ScaledSSet]) -> Union[MBSSet, ScaledSSet]:
	if direction == "L" and isinstance(obj, ScaledSSet):
		return left_adjoint(obj)
	if direction == "U" and isinstance(obj, MBSSet):
		return forget(obj)
	raise DecorationError(f"cannot translate {type(obj).__name__} along {direction!r}")


@dataclass(eq=False)
class DecoratedMap:
	map: SSetMap
	source: MBSSet
	target: MBSSet

	def image(self, ref: SimplexRef) -> SimplexRef:
		return self.map.image(ref)

	def violations(self) -> List[str]:
		out: List[str] = []
		checks = (
			("marked", self.source.marked, self.target.is_marked),
			("thin", self.source.thin, self.target.is_thin),
			("lean", self.source.lean, self.target.is_lean),
		)
		for label, cells, pred in checks:
			for c in sorted(cells):
				img = self.map.image(SimplexRef(c))
				if not pred(img):
					out.append(f"{label} cell {c} maps to undecorated {img.label()}")
		return out

	def check(self) -> None:
		if self.map.source is not self.source.under or self.map.target is not self.target.under:
			raise MapError("decorated map does not match its underlying objects")
		self.map.check()
		bad = self.violations()
		if bad:
			raise DecorationError(bad[0])

	def is_mono(self) -> bool:
		return self.map.is_mono()


def decorated(f: SSetMap, source: MBSSet, target: MBSSet, check: bool = True) -> DecoratedMap:
	out = DecoratedMap(f, source, target)
	if check:
		out.check()
	return out


def compose_decorated(f: DecoratedMap, g: DecoratedMap) -> DecoratedMap:
	return DecoratedMap(compose(f.map, g.map), f.source, g.target)


def identity_mb(X: MBSSet) -> DecoratedMap:
	return DecoratedMap(identity(X.under), X, X)


def restrict(X: MBSSet, cells: Iterable[str], name: str = "") -> Tuple[MBSSet, DecoratedMap]:
	"""Sub-object on the face closure of `cells`, with decorations restricted."""
	sub = X.under.restrict(cells, name=name)
	keep = set(sub.cells())
	out = MBSSet(sub, X.marked & keep, X.thin & keep, X.lean & keep)
	inc = SSetMap(sub, X.under, {c: SimplexRef(c) for c in sub.cells()}, name="inclusion")
	return out, DecoratedMap(inc, out, X)


def image_decorations(f: DecoratedMap) -> Tuple[FrozenSet[str], FrozenSet[str], FrozenSet[str], FrozenSet[str]]:
	"""Cells and decorations of the image of f, as ids of its target."""

	def hit(cells: Iterable[str]) -> FrozenSet[str]:
		out = set()
		for c in cells:
			img = f.map.image(SimplexRef(c))
			if not img.word:
				out.add(img.cell)
		return frozenset(out)

	return hit(f.source.under.cells()), hit(f.source.marked), hit(f.source.thin), hit(f.source.lean)


def product_mb(X: MBSSet, Y: MBSSet, cap: Optional[int] = None) -> Tuple[MBSSet, DecoratedMap, DecoratedMap]:
	"""Product, decorated where both projections are decorated or degenerate."""
	P, p1, p2 = product(X.under, Y.under, cap)
	marked = frozenset(c for c in P.cells(1) if X.is_marked(P.components[c][0]) and Y.is_marked(P.components[c][1]))
	thin = frozenset(c for c in P.cells(2) if X.is_thin(P.components[c][0]) and Y.is_thin(P.components[c][1]))
	lean = frozenset(c for c in P.cells(2) if X.is_lean(P.components[c][0]) and Y.is_lean(P.components[c][1]))
	out = MBSSet(P, marked, thin, lean)
	return out, DecoratedMap(p1, out, X), DecoratedMap(p2, out, Y)


def product_map_mb(u: DecoratedMap, v: DecoratedMap, src: MBSSet, dst: MBSSet) -> DecoratedMap:
	if not isinstance(src.under, ProductSSet) or not isinstance(dst.under, ProductSSet):
		raise MapError("product maps need product objects on both ends")
	return DecoratedMap(product_map(u.map, v.map, src.under, dst.under), src, dst)


def pushout_mb(f: DecoratedMap, g: DecoratedMap, name: str = "") -> Tuple[MBSSet, DecoratedMap, DecoratedMap, PushoutResult]:
	"""Pushout whose decorations are the images of both sides' decorations."""
	result = pushout(f.map, g.map, name=name)

	def push(cells: Iterable[str], leg: SSetMap) -> set:
		out = set()
		for c in cells:
			img = leg.image(SimplexRef(c))
			if not img.word:
				out.add(img.cell)
		return out

	B, C = f.target, g.target
	marked = frozenset(push(B.marked, result.in_b) | push(C.marked, result.in_c))
	thin = frozenset(push(B.thin, result.in_b) | push(C.thin, result.in_c))
	lean = frozenset(push(B.lean, result.in_b) | push(C.lean, result.in_c))
	out = MBSSet(result.obj, marked, thin, lean)
	return out, DecoratedMap(result.in_b, B, out), DecoratedMap(result.in_c, C, out), result


def tensor(K: MBSSet, X: MBSSet, cap: Optional[int] = None) -> Tuple[MBSSet, DecoratedMap, DecoratedMap]:
	"""I(K) x X for a marked K, with I(K) carrying the maximal scalings."""
	tri = frozenset(K.under.cells(2))
	return product_mb(MBSSet(K.under, K.marked, tri, tri), X, cap)
