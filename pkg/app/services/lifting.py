import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Tuple, Union

from ..errors import CellError, MapError, ParameterError
from ..state import runtime
from .decor import DecoratedMap, MBSSet, restrict
from .generators import (
	COFIBRATION_FAMILIES,
	MB_FAMILIES,
	SCALED_FAMILIES,
	Generator,
	GeneratorId,
	automorphisms,
	generator,
	generator_dimension,
	list_generators,
)
from .search import BudgetExhausted, ExtensionSearch, SearchStats, fix_simplex, new_stats
from .sset import FiniteSSet, SimplexRef, SSetMap, collapse_word, simplex_label, standard


logger = logging.getLogger(__name__)


class Verdict(str, Enum):
	LIFTS = "lifts"
	NO_LIFT = "no-lift"
	BUDGET = "budget-exhausted"


CLASSES: Dict[str, Tuple[str, ...]] = {
	"MB": MB_FAMILIES,
	"weak-S": SCALED_FAMILIES,
	"trivial": COFIBRATION_FAMILIES,
}


def decoration_ok(B: MBSSet, X: MBSSet, cell: str, ref: SimplexRef) -> bool:
	"""Whether sending the B-cell `cell` to `ref` respects B's decorations."""
	if cell in B.marked and not X.is_marked(ref):
		return False
	if cell in B.thin and not X.is_thin(ref):
		return False
	if cell in B.lean and not X.is_lean(ref):
		return False
	return True


@dataclass(eq=False)
class LiftSquare:
	"""top: A -> X and bottom: B -> S with p o top = bottom o j."""

	j: DecoratedMap
	p: DecoratedMap
	top: DecoratedMap
	bottom: DecoratedMap

	def check(self) -> None:
		if not self.j.is_mono():
			raise MapError("the left side of a lifting square must be a monomorphism")
		for a in self.j.source.under.cells():
			ref = SimplexRef(a)
			if self.p.image(self.top.image(ref)) != self.bottom.image(self.j.image(ref)):
				raise MapError(f"square does not commute on {a}")

	def describe(self) -> Dict[str, object]:
		return {
			"top": {c: r.label() for c, r in sorted(self.top.map.assignment.items())},
			"bottom": {c: r.label() for c, r in sorted(self.bottom.map.assignment.items())},
		}


@dataclass
class LiftReport:
	verdict: Verdict
	witness: Optional[DecoratedMap] = None
	stats: SearchStats = field(default_factory=SearchStats)
	square: Optional[LiftSquare] = None
	generator: Optional[str] = None
	squares: int = 0

	def to_dict(self) -> Dict[str, object]:
		out: Dict[str, object] = {"verdict": self.verdict.value, "stats": self.stats.to_dict(), "squares": self.squares}
		if self.generator:
			out["generator"] = self.generator
		if self.square is not None and self.verdict != Verdict.LIFTS:
			out["square"] = self.square.describe()
		if self.witness is not None:
			out["witness"] = {c: r.label() for c, r in sorted(self.witness.map.assignment.items())}
		return out


def solve_lift(square: LiftSquare, stats: Optional[SearchStats] = None, check: bool = True) -> LiftReport:
	"""Search for a decorated diagonal B -> X of a commuting square."""
	if check:
		square.check()
	stats = stats if stats is not None else new_stats()
	j, p, top, bottom = square.j, square.p, square.top, square.bottom
	B, X = j.target, p.source
	fixed: Dict[str, SimplexRef] = {}
	for a, b in j.map.assignment.items():
		fixed[b.cell] = top.map.assignment[a]
	for b, ref in fixed.items():
		if not decoration_ok(B, X, b, ref):
			return LiftReport(Verdict.NO_LIFT, stats=stats, square=square)

	def accept(cell: str, cand: SimplexRef) -> bool:
		return p.image(cand) == bottom.image(SimplexRef(cell)) and decoration_ok(B, X, cell, cand)

	try:
		found = ExtensionSearch(B.under, X.under, fixed=fixed, accept=accept, stats=stats).first()
	except BudgetExhausted:
		return LiftReport(Verdict.BUDGET, stats=stats, square=square)
	if found is None:
		return LiftReport(Verdict.NO_LIFT, stats=stats, square=square)
	witness = DecoratedMap(SSetMap(B.under, X.under, found), B, X)
	witness.check()
	for a in j.source.under.cells():
		if witness.image(j.image(SimplexRef(a))) != top.image(SimplexRef(a)):
			raise MapError(f"lift disagrees with the top map on {a}")
	for b in B.under.cells():
		if p.image(witness.image(SimplexRef(b))) != bottom.image(SimplexRef(b)):
			raise MapError(f"lift disagrees with the bottom map on {b}")
	return LiftReport(Verdict.LIFTS, witness=witness, stats=stats, square=square)


def _square_key(bottom: Dict[str, SimplexRef], top: Dict[str, SimplexRef]) -> Tuple:
	return (tuple(sorted(bottom.items())), tuple(sorted(top.items())))


def iter_squares(p: DecoratedMap, gen: Generator, stats: SearchStats) -> Iterator[LiftSquare]:
	"""Commuting squares from a generator into p, one per automorphism orbit."""
	j = gen.inclusion
	A, B = j.source, j.target
	X, S = p.source, p.target
	autos = [a for a in automorphisms(gen) if any(r.cell != c for c, r in a.items())]
	bottoms = ExtensionSearch(B.under, S.under, accept=lambda c, r: decoration_ok(B, S, c, r), stats=stats)
	for bottom in bottoms.solutions():
		bmap = SSetMap(B.under, S.under, bottom)

		def accept(cell: str, cand: SimplexRef) -> bool:
			return p.image(cand) == bmap.image(j.image(SimplexRef(cell))) and decoration_ok(A, X, cell, cand)

		for top in ExtensionSearch(A.under, X.under, accept=accept, stats=stats).solutions():
			key = _square_key(bottom, top)
			if autos:
				tmap = SSetMap(A.under, X.under, top)
				skip = False
				for alpha in autos:
					moved_b = {c: bmap.image(alpha[c]) for c in bottom}
					moved_t = {a: tmap.image(alpha[a]) for a in top}
					if _square_key(moved_b, moved_t) < key:
						skip = True
						break
				if skip:
					continue
			yield LiftSquare(
				j,
				p,
				DecoratedMap(SSetMap(A.under, X.under, top), A, X),
				DecoratedMap(bmap, B, S),
			)


def has_rlp(p: DecoratedMap, gid: Union[str, GeneratorId], budget: Optional[int] = None, cap: Optional[int] = None) -> LiftReport:
	"""Right lifting property of p against one generator, over every commuting square."""
	cap = runtime.cap if cap is None else cap
	gen = generator(gid, cap)
	stats = new_stats(budget)
	count = 0
	try:
		for square in iter_squares(p, gen, stats):
			count += 1
			report = solve_lift(square, stats=stats, check=False)
			if report.verdict != Verdict.LIFTS:
				report.generator = str(gen.id)
				report.squares = count
				logger.debug("%s against %s: %s after %d squares", p.source.name, gen.id, report.verdict.value, count)
				return report
	except BudgetExhausted:
		return LiftReport(Verdict.BUDGET, stats=stats, generator=str(gen.id), squares=count)
	return LiftReport(Verdict.LIFTS, stats=stats, generator=str(gen.id), squares=count)


@dataclass
class FibrationReport:
	cls: str
	cap: int
	results: List[Tuple[str, str]] = field(default_factory=list)
	failure: Optional[LiftReport] = None

	@property
	def passed(self) -> bool:
		return all(v == Verdict.LIFTS.value for _, v in self.results)

	@property
	def inconclusive(self) -> bool:
		return self.failure is None and any(v == Verdict.BUDGET.value for _, v in self.results)

	@property
	def verdict(self) -> str:
		if self.failure is not None:
			return "fail"
		return "inconclusive" if self.inconclusive else "pass"

	@property
	def failing_generator(self) -> Optional[str]:
		return self.failure.generator if self.failure is not None else None

	def to_dict(self) -> Dict[str, object]:
		out: Dict[str, object] = {
			"class": self.cls,
			"cap": self.cap,
			"verdict": self.verdict,
			"results": [{"generator": g, "verdict": v} for g, v in self.results],
		}
		if self.failure is not None:
			out["failure"] = self.failure.to_dict()
		return out


def class_generators(cls: str, cap: int) -> List[GeneratorId]:
	if cls not in CLASSES:
		raise ParameterError(f"unknown generator class {cls!r}")
	out: List[GeneratorId] = []
	for family in CLASSES[cls]:
		out.extend(g for g in list_generators(family, cap, cap) if generator_dimension(g) <= cap)
	return out


def classify_fibration(p: DecoratedMap, cls: str = "MB", cap: Optional[int] = None, budget: Optional[int] = None) -> FibrationReport:
	"""Sweep a generator class; stops at the first generator that refutes p."""
	cap = runtime.cap if cap is None else cap
	report = FibrationReport(cls, cap)
	for gid in class_generators(cls, cap):
		res = has_rlp(p, gid, budget=budget, cap=cap)
		report.results.append((str(gid), res.verdict.value))
		if res.verdict == Verdict.NO_LIFT:
			report.failure = res
			logger.info("%s is not %s-fibrant: %s has no lift", p.source.name, cls, gid)
			break
	return report


def fibre(p: DecoratedMap, s: str) -> Tuple[MBSSet, DecoratedMap]:
	"""The fibre of p over the vertex s."""
	S = p.target.under
	if s not in S or S.dim(s) != 0:
		raise CellError(s, f"vertices of {S.name}")
	X = p.source.under
	cells = [c for c in X.cells() if p.image(SimplexRef(c)).cell == s]
	if not cells:
		empty_fibre = X.restrict([], name=f"fibre({s})")
		return MBSSet(empty_fibre), DecoratedMap(SSetMap(empty_fibre, X, {}), MBSSet(empty_fibre), p.source)
	return restrict(p.source, cells, name=f"fibre({s})")


def _edge_faces(X: FiniteSSet, ref: SimplexRef) -> Tuple[str, str]:
	return X.face(ref, 1).cell, X.face(ref, 0).cell


def is_equivalence(X: MBSSet, e: Union[str, SimplexRef], stats: Optional[SearchStats] = None) -> bool:
	"""An edge x -> y with a reverse edge g and thin triangles witnessing both composites."""
	U = X.under
	e = SimplexRef(e) if isinstance(e, str) else e
	if U.ref_dim(e) != 1:
		raise ParameterError(f"{e.label()} is not an edge")
	if e.word:
		return True
	x, y = _edge_faces(U, e)
	idx = {x: SimplexRef(x), y: SimplexRef(y)}
	for g in U.by_vertices(1, (y, x)):
		sx = U.degeneracy(idx[x], 0)
		sy = U.degeneracy(idx[y], 0)
		first = any(
			U.face(t, 2) == e and U.face(t, 0) == g and U.face(t, 1) == sx and X.is_thin(t)
			for t in U.by_vertices(2, (x, y, x))
		)
		if not first:
			continue
		second = any(
			U.face(t, 2) == g and U.face(t, 0) == e and U.face(t, 1) == sy and X.is_thin(t)
			for t in U.by_vertices(2, (y, x, y))
		)
		if second:
			return True
	return False


# -- mapping spaces -------------------------------------------------------------

@dataclass(eq=False)
class MappingSpace:
	space: FiniteSSet
	equivalences: FrozenSet[str]
	cocartesian: FrozenSet[str]
	truncated: bool
	source: Dict[str, SimplexRef]
	a: str
	b: str

	def to_ref(self, X: FiniteSSet, ref: SimplexRef) -> SimplexRef:
		return mapping_ref(X, ref, self)


def _totally_degenerate(n: int) -> Tuple[int, ...]:
	return tuple(range(n - 1, -1, -1))


def _in_mapping_space(X: FiniteSSet, ref: SimplexRef, a: str, b: str) -> bool:
	k = X.ref_dim(ref)
	n = k - 1
	if X.apply(ref, (k,)).cell != b:
		return False
	return X.apply(ref, tuple(range(n + 1))) == SimplexRef(a, _totally_degenerate(n))


def _core_and_word(ref: SimplexRef, n: int) -> Tuple[SimplexRef, Tuple[int, ...]]:
	"""Split the degeneracies of a level-n cell into those of X(a, b) and the rest."""
	J = {j for j in ref.word if j <= n - 1}
	core = SimplexRef(ref.cell, collapse_word(ref.word, J))
	return core, tuple(sorted(J, reverse=True))


def mapping_ref(X: FiniteSSet, ref: SimplexRef, ms: MappingSpace) -> SimplexRef:
	n = X.ref_dim(ref) - 1
	core, word = _core_and_word(ref, n)
	return SimplexRef(core.label(), word)


def mapping_space(X: MBSSet, a: str, b: str, cap: Optional[int] = None) -> MappingSpace:
	"""X(a, b): level n holds the (n+1)-simplices whose front n-face sits on a and whose last vertex is b."""
	U = X.under
	for v in (a, b):
		if v not in U or U.dim(v) != 0:
			raise CellError(v, f"vertices of {U.name}")
	cap = min(runtime.cap if cap is None else cap, U.cap)
	levels = max(cap - 1, 0)
	dims: Dict[str, int] = {}
	faces: Dict[str, Tuple[SimplexRef, ...]] = {}
	source: Dict[str, SimplexRef] = {}
	for n in range(levels + 1):
		for ref in U.simplices(n + 1):
			if any(j <= n - 1 for j in ref.word):
				continue
			if not _in_mapping_space(U, ref, a, b):
				continue
			ident = ref.label()
			dims[ident] = n
			source[ident] = ref
			if n:
				out = []
				for i in range(n + 1):
					core, word = _core_and_word(U.face(ref, i), n - 1)
					out.append(SimplexRef(core.label(), word))
				faces[ident] = tuple(out)
	space = FiniteSSet(dims, faces, cap=levels, name=f"{U.name}({a},{b})", truncated=True)
	equivalences = frozenset(c for c in space.cells(1) if X.is_thin(source[c]))
	cocartesian = frozenset(c for c in space.cells(1) if X.is_lean(source[c]))
	return MappingSpace(space, equivalences, cocartesian, True, source, a, b)


def mapping_space_map(p: DecoratedMap, a: str, b: str, cap: Optional[int] = None) -> Tuple[MappingSpace, MappingSpace, SSetMap]:
	"""The map X(a, b) -> S(pa, pb) induced by p."""
	X, S = p.source, p.target
	pa, pb = p.image(SimplexRef(a)).cell, p.image(SimplexRef(b)).cell
	src = mapping_space(X, a, b, cap)
	dst = mapping_space(S, pa, pb, cap)
	assignment = {c: mapping_ref(S.under, p.image(ref), dst) for c, ref in src.source.items()}
	return src, dst, SSetMap(src.space, dst.space, assignment, name="p(a,b)")


# -- horn problems --------------------------------------------------------------

Constraint = Callable[[str, SimplexRef], bool]


def horn_problems(
	p: DecoratedMap,
	n: int,
	k: int,
	prescribed: Dict[Tuple[int, ...], SimplexRef],
	stats: SearchStats,
	top_accept: Optional[Constraint] = None,
) -> Iterator[Tuple[FiniteSSet, Dict[str, SimplexRef], Dict[str, SimplexRef]]]:
	"""Commuting squares Lambda^n_k -> X, Delta^n -> S with prescribed simplices in the horn."""
	X, S = p.source.under, p.target.under
	D = standard(n, max(n, X.cap))
	full = simplex_label(range(n + 1))
	gap = D.faces_of(full)[k].cell
	H = D.restrict([c for c in D.cells() if c not in (full, gap)], name=f"Lambda^{n}_{k}")
	fixed: Dict[str, SimplexRef] = {}
	for positions, ref in prescribed.items():
		part = fix_simplex(H, simplex_label(positions), ref, X)
		for c, r in part.items():
			if fixed.get(c, r) != r:
				return
			fixed[c] = r
	for top in ExtensionSearch(H, X, fixed=fixed, accept=top_accept, stats=stats).solutions():
		seeded = {c: p.image(r) for c, r in top.items()}
		for bottom in ExtensionSearch(D, S, fixed=seeded, stats=stats).solutions():
			yield D, top, bottom


def fill_horn(
	p: DecoratedMap,
	D: FiniteSSet,
	top: Dict[str, SimplexRef],
	bottom: Dict[str, SimplexRef],
	stats: SearchStats,
	accept: Optional[Constraint] = None,
) -> Optional[Dict[str, SimplexRef]]:
	"""A filler Delta^n -> X over `bottom`, optionally constrained cell by cell."""

	def ok(cell: str, cand: SimplexRef) -> bool:
		if p.image(cand) != bottom[cell]:
			return False
		return accept is None or accept(cell, cand)

	return ExtensionSearch(D, p.source.under, fixed=top, accept=ok, stats=stats).first()
