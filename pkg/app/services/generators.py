import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from ..errors import DimensionCapError, ParameterError
from ..state import runtime
from .decor import DecoratedMap, DecorationSpec, MBSSet, resolve_decoration
from .search import ExtensionSearch, new_stats
from .sset import (
	FiniteSSet,
	SimplexRef,
	SSetMap,
	empty,
	pushout,
	simplex_label,
	standard,
)


logger = logging.getLogger(__name__)

FAMILY_ORDER: Tuple[str, ...] = (
	"SCi", "SCii", "SCiii",
	"A1", "A2", "A3", "A4", "A5",
	"S1", "S2", "S3", "S4", "S5", "E",
	"C1", "C2", "C3", "C4",
	"THETA",
)
SCALED_FAMILIES = ("SCi", "SCii", "SCiii")
MB_FAMILIES = ("A1", "A2", "A3", "A4", "A5", "S1", "S2", "S3", "S4", "S5", "E")
COFIBRATION_FAMILIES = ("C1", "C2", "C3", "C4")
CELL_FAMILIES = ("A1", "A3", "A4", "A5")
DECORATION_FAMILIES = ("A2", "S1", "S2", "S3", "S4", "S5", "E", "THETA")

_ARITY = {
	"SCi": 2, "SCii": 0, "SCiii": 1,
	"A1": 2, "A2": 0, "A3": 1, "A4": 1, "A5": 0,
	"S1": 0, "S2": 0, "S3": 1, "S4": 0, "S5": 0, "E": 1,
	"C1": 1, "C2": 0, "C3": 0, "C4": 0,
	"THETA": 0,
}

Param = Union[int, str]


@dataclass(frozen=True, order=True)
class GeneratorId:
	family: str
	params: Tuple[Param, ...] = ()

	def __post_init__(self) -> None:
		self.validate()

	def __str__(self) -> str:
		return ":".join([self.family, *(str(p) for p in self.params)])

	@classmethod
	def parse(cls, text: str) -> "GeneratorId":
		parts = [p.strip() for p in str(text).strip().split(":")]
		family = parts[0]
		if family not in _ARITY:
			raise ParameterError(f"unknown generator family {family!r}")
		if family == "E":
			return cls(family, tuple(parts[1:]))
		try:
			params = tuple(int(p) for p in parts[1:])
		except ValueError:
			raise ParameterError(f"generator parameters of {text!r} must be integers") from None
		return cls(family, params)

	def validate(self) -> None:
		fam, ps = self.family, self.params
		if fam not in _ARITY:
			raise ParameterError(f"unknown generator family {fam!r}")
		if len(ps) != _ARITY[fam]:
			raise ParameterError(f"{fam} takes {_ARITY[fam]} parameter(s), got {len(ps)}")
		if fam in ("SCi", "A1"):
			n, i = ps
			if n < 2 or not 0 < i < n:
				raise ParameterError(f"{fam} needs n >= 2 and 0 < i < n, got n={n}, i={i}")
		elif fam == "SCiii" and ps[0] < 3:
			raise ParameterError(f"SCiii needs n >= 3, got {ps[0]}")
		elif fam in ("A3", "A4") and ps[0] < 2:
			raise ParameterError(f"{fam} needs n >= 2, got {ps[0]}")
		elif fam == "S3" and ps[0] not in (1, 2):
			raise ParameterError(f"S3 needs i in {{1, 2}}, got {ps[0]}")
		elif fam == "C1" and ps[0] < 0:
			raise ParameterError(f"C1 needs n >= 0, got {ps[0]}")
		elif fam == "E" and ps[0] not in KAN_FIXTURES:
			raise ParameterError(f"unknown Kan fixture {ps[0]!r}")

	def sort_key(self) -> Tuple[int, Tuple[str, ...]]:
		return (FAMILY_ORDER.index(self.family), tuple(f"{p:>8}" if isinstance(p, str) else f"{p:08d}" for p in self.params))


# -- Kan fixtures ---------------------------------------------------------------

def groupoid_nerve(objects: Sequence[str] = ("a", "b"), cap: Optional[int] = None, name: str = "J") -> FiniteSSet:
	"""Nerve of the contractible groupoid on `objects`, truncated at the cap.

	Its nondegenerate k-cells are the words of length k+1 with no letter repeated
	twice in a row.
	"""
	cap = runtime.cap if cap is None else cap
	words: List[str] = list(objects)
	dims: Dict[str, int] = {w: 0 for w in words}
	faces: Dict[str, Tuple[SimplexRef, ...]] = {}
	for k in range(1, cap + 1):
		words = [w + o for w in words for o in objects if o != w[-1]]
		for w in words:
			dims[w] = k
			out = []
			for i in range(k + 1):
				rest = w[:i] + w[i + 1:]
				reps = [j for j in range(len(rest) - 1) if rest[j] == rest[j + 1]]
				core = "".join(ch for j, ch in enumerate(rest) if j == 0 or rest[j - 1] != ch)
				out.append(SimplexRef(core, tuple(sorted(reps, reverse=True))))
			faces[w] = tuple(out)
	return FiniteSSet(dims, faces, cap=cap, name=name, truncated=True)


KAN_FIXTURES = {
	"Delta0": lambda cap: standard(0, cap),
	"J": lambda cap: groupoid_nerve(("a", "b"), cap),
}


@lru_cache(maxsize=None)
def kan_fixture(name: str, cap: int) -> FiniteSSet:
	try:
		return KAN_FIXTURES[name](cap)
	except KeyError:
		raise ParameterError(f"unknown Kan fixture {name!r}") from None


@dataclass
class KanCertificate:
	name: str
	cap: int
	horns: int = 0
	failures: List[str] = field(default_factory=list)
	exhausted: bool = False

	@property
	def passed(self) -> bool:
		return not self.failures and not self.exhausted


def kan_certificate(K: FiniteSSet, cap: Optional[int] = None, budget: Optional[int] = None) -> KanCertificate:
	"""Check that every horn of dimension below the cap fills in K."""
	from .search import BudgetExhausted

	cap = min(K.cap, runtime.cap if cap is None else cap)
	cert = KanCertificate(K.name, cap)
	stats = new_stats(budget)
	try:
		for k in range(1, cap):
			D = standard(k, cap)
			for i in range(k + 1):
				H = D.restrict([c for c in D.cells() if c != simplex_label(range(k + 1)) and c != D.faces_of(simplex_label(range(k + 1)))[i].cell])
				for top in ExtensionSearch(H, K, stats=stats).solutions():
					cert.horns += 1
					if ExtensionSearch(D, K, fixed=top, stats=stats).first() is None:
						cert.failures.append(f"Lambda^{k}_{i} -> {K.name} has no filler")
						return cert
	except BudgetExhausted:
		cert.exhausted = True
	return cert


# -- generator catalogue --------------------------------------------------------

@dataclass(eq=False)
class Generator:
	id: GeneratorId
	inclusion: DecoratedMap
	top: Optional[str] = None
	collapsed: bool = False

	@property
	def source(self) -> MBSSet:
		return self.inclusion.source

	@property
	def target(self) -> MBSSet:
		return self.inclusion.target

	@property
	def new_cells(self) -> List[str]:
		src = self.source.under
		return [c for c in self.target.under.cells() if c not in src]

	@property
	def decoration_only(self) -> bool:
		return not self.new_cells

	def attach_from_top(self, ambient: FiniteSSet, top_ref: SimplexRef) -> Optional[Dict[str, SimplexRef]]:
		"""The attaching map determined by the image of the top simplex, when it is well defined."""
		shape = self.target.under.shape
		if shape is None or self.top is None:
			return None
		if self.collapsed and not ambient.apply(top_ref, (0, 1)).word:
			return None
		return {c: ambient.apply(top_ref, shape[c]) for c in self.target.under.cells()}


def _tri(*vs: int) -> str:
	return simplex_label(vs)


def _faces_except(n: int, k: int, skip: Iterable[int]) -> List[str]:
	"""Labels of the k-dimensional faces of Delta^n, leaving out the faces missing a vertex in `skip`."""
	skip = set(skip)
	out = []
	for vs in combinations(range(n + 1), k + 1):
		missing = set(range(n + 1)) - set(vs)
		if k == n - 1 and missing & skip:
			continue
		out.append(simplex_label(vs))
	return out


def _horn_cells(n: int, i: int) -> List[str]:
	top = simplex_label(range(n + 1))
	gap = simplex_label([v for v in range(n + 1) if v != i])
	out = []
	for k in range(n):
		for vs in combinations(range(n + 1), k + 1):
			label = simplex_label(vs)
			if label not in (top, gap):
				out.append(label)
	return out


def _boundary_cells(n: int) -> List[str]:
	return [simplex_label(vs) for k in range(n) for vs in combinations(range(n + 1), k + 1)]


@lru_cache(maxsize=None)
def collapsed_simplex(n: int, cap: int) -> FiniteSSet:
	"""Delta^n with the edge 01 collapsed to a point."""
	D, E, P = standard(n, cap), standard(1, cap), standard(0, cap)
	edge = SSetMap(E, D, {"0": SimplexRef("0"), "1": SimplexRef("1"), "01": SimplexRef("01")})
	crush = SSetMap(E, P, {"0": SimplexRef("0"), "1": SimplexRef("0"), "01": SimplexRef("0", (0,))})
	return pushout(edge, crush, name=f"Delta^{n}/01").obj


def _present(X: FiniteSSet, spec: DecorationSpec, k: int, what: str) -> FrozenSet[str]:
	if spec is None or isinstance(spec, str):
		return resolve_decoration(X, spec, k, what)
	return frozenset(c for c in spec if c in X and X.dim(c) == k)


Deco = Tuple[DecorationSpec, DecorationSpec, DecorationSpec]


def _mb(X: FiniteSSet, deco: Deco) -> MBSSet:
	marked, thin, lean = deco
	t = _present(X, thin, 2, "thin")
	return MBSSet(X, _present(X, marked, 1, "marked"), t, _present(X, lean, 2, "lean") | t)


def _simplex_generator(gid: GeneratorId, n: int, source_cells: Optional[List[str]], src: Deco, tgt: Deco, cap: int, collapsed: bool = False) -> Generator:
	target = collapsed_simplex(n, cap) if collapsed else standard(n, cap)
	if source_cells is None:
		source_cells = target.cells()
	keep = [c for c in source_cells if c in target]
	sub = target.restrict(keep, name=f"{gid}:source") if keep else empty(cap, f"{gid}:source")
	inc = SSetMap(sub, target, {c: SimplexRef(c) for c in sub.cells()}, name=str(gid))
	out = DecoratedMap(inc, _mb(sub, src), _mb(target, tgt))
	out.check()
	return Generator(gid, out, top=simplex_label(range(n + 1)), collapsed=collapsed)


def _build(gid: GeneratorId, cap: int) -> Generator:
	fam, ps = gid.family, gid.params
	F = "flat"
	S = "sharp"
	if fam in ("A1", "SCi"):
		n, i = ps
		T = {_tri(i - 1, i, i + 1)}
		return _simplex_generator(gid, n, _horn_cells(n, i), (F, T, T), (F, T, T), cap)
	if fam in ("A2", "SCii"):
		T = {"024", "123", "013", "134", "012"}
		T2 = T | {"034", "014"}
		return _simplex_generator(gid, 4, None, (F, T, T), (F, T2, T2), cap)
	if fam == "A3":
		n = ps[0]
		L = {_tri(0, 1, n)}
		return _simplex_generator(gid, n, _horn_cells(n, 0), (F, F, L), (F, F, L), cap, collapsed=True)
	if fam == "SCiii":
		n = ps[0]
		T = {_tri(0, 1, n)}
		return _simplex_generator(gid, n, _horn_cells(n, 0), (F, T, T), (F, T, T), cap, collapsed=True)
	if fam == "A4":
		n = ps[0]
		M = {_tri(n - 1, n)}
		L = {_tri(0, n - 1, n)}
		return _simplex_generator(gid, n, _horn_cells(n, n), (M, F, L), (M, F, L), cap)
	if fam == "A5":
		return _simplex_generator(gid, 1, ["1"], (S, S, S), (S, S, S), cap)
	if fam == "S1":
		return _simplex_generator(gid, 2, None, ({"01", "12"}, S, S), (S, S, S), cap)
	if fam in ("S2", "C4"):
		return _simplex_generator(gid, 2, None, (F, F, S), (F, S, S), cap)
	if fam == "S3":
		i = ps[0]
		T = {_tri(i - 1, i, i + 1)}
		U = set(_faces_except(3, 2, [i]))
		return _simplex_generator(gid, 3, None, (F, T, U), (F, T, S), cap)
	if fam == "S4":
		U = set(_faces_except(3, 2, [0]))
		return _simplex_generator(gid, 3, None, (F, F, U), (F, F, S), cap, collapsed=True)
	if fam == "S5":
		U = set(_faces_except(3, 2, [3]))
		return _simplex_generator(gid, 3, None, ({"23"}, F, U), ({"23"}, F, S), cap)
	if fam == "E":
		K = kan_fixture(str(ps[0]), cap)
		inc = SSetMap(K, K, {c: SimplexRef(c) for c in K.cells()}, name=str(gid))
		tri = frozenset(K.cells(2))
		src = MBSSet(K, frozenset(), tri, tri)
		tgt = MBSSet(K, frozenset(K.cells(1)), tri, tri)
		return Generator(gid, DecoratedMap(inc, src, tgt))
	if fam == "C1":
		n = ps[0]
		return _simplex_generator(gid, n, _boundary_cells(n), (F, F, F), (F, F, F), cap)
	if fam == "C2":
		return _simplex_generator(gid, 1, None, (F, F, F), (S, F, F), cap)
	if fam == "C3":
		return _simplex_generator(gid, 2, None, (F, F, F), (F, F, S), cap)
	if fam == "THETA":
		return _simplex_generator(gid, 2, None, ({"12", "02"}, S, S), (S, S, S), cap)
	raise ParameterError(f"unknown generator family {fam!r}")


@lru_cache(maxsize=None)
def _cached(gid: GeneratorId, cap: int) -> Generator:
	gen = _build(gid, cap)
	logger.debug("instantiated %s at cap %d: target census %s", gid, cap, gen.target.under.census())
	return gen


def as_id(gid: Union[str, GeneratorId]) -> GeneratorId:
	return gid if isinstance(gid, GeneratorId) else GeneratorId.parse(gid)


def generator(gid: Union[str, GeneratorId], cap: Optional[int] = None) -> Generator:
	cap = runtime.cap if cap is None else cap
	gid = as_id(gid)
	dim = generator_dimension(gid)
	if dim > cap:
		raise DimensionCapError(dim, cap, f"generator {gid}")
	return _cached(gid, cap)


def instantiate(gid: Union[str, GeneratorId], cap: Optional[int] = None) -> DecoratedMap:
	return generator(gid, cap).inclusion


def generator_dimension(gid: GeneratorId) -> int:
	fam, ps = gid.family, gid.params
	if fam in ("SCi", "A1", "SCiii", "A3", "A4", "C1"):
		return int(ps[0])
	if fam in ("SCii", "A2"):
		return 4
	if fam in ("S3", "S4", "S5"):
		return 3
	if fam in ("S1", "S2", "C3", "C4", "THETA"):
		return 2
	if fam in ("A5", "C2"):
		return 1
	return 0 if ps[0] == "Delta0" else 1


def list_generators(family: str, max_n: Optional[int] = None, cap: Optional[int] = None) -> List[GeneratorId]:
	"""Every id of a family whose dimension parameter is at most max_n."""
	cap = runtime.cap if cap is None else cap
	max_n = cap if max_n is None else max_n
	if max_n > cap:
		raise DimensionCapError(max_n, cap, f"listing {family}")
	if family not in _ARITY:
		raise ParameterError(f"unknown generator family {family!r}")
	if family in ("SCi", "A1"):
		return [GeneratorId(family, (n, i)) for n in range(2, max_n + 1) for i in range(1, n)]
	if family in ("A3", "A4"):
		return [GeneratorId(family, (n,)) for n in range(2, max_n + 1)]
	if family == "SCiii":
		return [GeneratorId(family, (n,)) for n in range(3, max_n + 1)]
	if family == "C1":
		return [GeneratorId(family, (n,)) for n in range(0, max_n + 1)]
	if family == "S3":
		return [GeneratorId(family, (i,)) for i in (1, 2)]
	if family == "E":
		return [GeneratorId(family, (name,)) for name in runtime.kan_fixtures if name in KAN_FIXTURES]
	return [GeneratorId(family)]


def automorphisms(gen: Generator) -> List[Dict[str, SimplexRef]]:
	"""Decorated automorphisms of the target that preserve the source."""
	T = gen.target
	src = set(gen.source.under.cells())

	def same(a: str, b: str) -> bool:
		return all((a in s) == (b in s) for s in (T.marked, T.thin, T.lean, src))

	search = ExtensionSearch(T.under, T.under, accept=lambda c, r: same(c, r.cell), injective=True, stats=new_stats(None))
	return list(search.solutions())
