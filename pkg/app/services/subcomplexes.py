"""Named simplicial subsets used by the filtration arguments."""
import logging
import re
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from ..errors import ParameterError
from ..state import runtime
from .decor import DecoratedMap, MBSSet
from .generators import collapsed_simplex
from .sset import FiniteSSet, SimplexRef, SSetMap, pushout, pushout_factor, simplex_label, standard


logger = logging.getLogger(__name__)

Member = Callable[[FrozenSet[int]], bool]

NAMES = ("R", "L", "P", "M", "S_ext", "B", "dB", "T_ext", "Lambda_vec")


def _cells_where(N: int, member: Member) -> List[str]:
	out = []
	for k in range(N + 1):
		for vs in combinations(range(N + 1), k + 1):
			if member(frozenset(vs)):
				out.append(simplex_label(vs))
	return out


def _triangles(vertex_sets: Iterable[Sequence[int]]) -> FrozenSet[str]:
	return frozenset(simplex_label(sorted(vs)) for vs in vertex_sets)


def _sub(ambient: MBSSet, cells: Iterable[str], name: str) -> Tuple[MBSSet, DecoratedMap]:
	under = ambient.under.restrict(cells, name=name)
	keep = set(under.cells())
	sub = MBSSet(under, ambient.marked & keep, ambient.thin & keep, ambient.lean & keep)
	inc = SSetMap(under, ambient.under, {c: SimplexRef(c) for c in under.cells()}, name=name)
	return sub, DecoratedMap(inc, sub, ambient)


def _fan_triangles(n: int, k: int) -> List[Tuple[int, int, int]]:
	return [(k + 1, k + 2, j) for j in range(k + 3, n + 2)]


def extension_scaling(n: int, k: int, cap: int) -> MBSSet:
	"""Delta^{n+1} with triangles of [0, k+1] and the fan {k+1, k+2, j} scaled."""
	D = standard(n + 1, cap)
	T = set(c for c in D.cells(2) if max(D.shape[c]) <= k + 1)
	T |= _triangles(_fan_triangles(n, k))
	T = frozenset(T)
	return MBSSet(D, frozenset(), T, T)


def _check_nk(n: int, k: int) -> None:
	if n < 1 or not 0 <= k <= n - 1:
		raise ParameterError(f"need n >= 1 and 0 <= k <= n-1, got n={n}, k={k}")


def _is_fan(vs: FrozenSet[int], n: int, k: int) -> bool:
	return len(vs) == 3 and {k + 1, k + 2} <= vs and max(vs) > k + 2 and max(vs) <= n + 1


def r_subcomplex(n: int, k: int, cap: int, only_ac: bool = False) -> Tuple[MBSSet, DecoratedMap]:
	_check_nk(n, k)
	ambient = extension_scaling(n, k, cap)

	def member(vs: FrozenSet[int]) -> bool:
		if k + 1 not in vs:
			return True
		if not only_ac and n + 1 not in vs:
			return True
		return _is_fan(vs, n, k)

	name = f"{'L' if only_ac else 'R'}^{n}_{k}"
	return _sub(ambient, _cells_where(n + 1, member), name)


def p_subcomplex(n: int, k: int, cap: int, only_ac: bool = False) -> Tuple[MBSSet, DecoratedMap]:
	_check_nk(n, k)
	ambient = extension_scaling(n, k, cap)

	def member(vs: FrozenSet[int]) -> bool:
		if n + 1 not in vs:
			return True
		if not only_ac and k + 1 not in vs and any(i not in vs for i in range(1, n + 2) if i != k + 1):
			return True
		return _is_fan(vs, n, k)

	name = f"{'M' if only_ac else 'P'}^{n}_{k}"
	return _sub(ambient, _cells_where(n + 1, member), name)


def _edge_decorated(N: int, j: int, cap: int) -> MBSSet:
	"""Delta^N with the edge j+1 -> j+2 marked and every triangle through it lean."""
	D = standard(N, cap)
	edge = simplex_label((j + 1, j + 2))
	lean = frozenset(c for c in D.cells(2) if {j + 1, j + 2} <= set(D.shape[c]))
	return MBSSet(D, frozenset({edge}), frozenset(), lean)


def s_ext(N: int, j: int, cap: int) -> Tuple[MBSSet, DecoratedMap]:
	if N < 2 or not 0 <= j <= N - 2:
		raise ParameterError(f"S_ext needs N >= 2 and 0 <= j <= N-2, got N={N}, j={j}")
	ambient = _edge_decorated(N, j, cap)
	full = set(range(N + 1))
	tops = [full - {v} for v in range(N + 1) if v not in (j + 1, j + 2)]
	tops.append(full - {j + 1, j + 2})
	cells = [simplex_label(sorted(t)) for t in tops if t]
	return _sub(ambient, cells, f"S^{N}_{j}")


def b_object(m: int, j: int, cap: int, boundary: bool = False) -> Tuple[MBSSet, DecoratedMap]:
	"""Delta^m (or its boundary) with a marked edge glued onto vertex j+1, mapped into Delta^{m+1}."""
	if m < 1 or not 0 <= j <= m - 1:
		raise ParameterError(f"B needs m >= 1 and 0 <= j <= m-1, got m={m}, j={j}")
	Dm, E, V = standard(m, cap), standard(1, cap), standard(0, cap)
	base = Dm
	if boundary:
		base = Dm.restrict([c for c in Dm.cells() if c != simplex_label(range(m + 1))], name=f"dDelta^{m}")
	glue_b = SSetMap(V, base, {"0": SimplexRef(simplex_label((j + 1,)))})
	glue_e = SSetMap(V, E, {"0": SimplexRef("1")})
	result = pushout(glue_b, glue_e, name=f"{'dB' if boundary else 'B'}^{m}_{j}")
	Y = _edge_decorated(m + 1, j, cap)
	shift = {c: tuple(v if v <= j else v + 1 for v in Dm.shape[c]) for c in base.cells()}
	u = SSetMap(base, Y.under, {c: SimplexRef(simplex_label(vs)) for c, vs in shift.items()})
	v = SSetMap(E, Y.under, {"0": SimplexRef(simplex_label((j + 1,))), "1": SimplexRef(simplex_label((j + 2,))), "01": SimplexRef(simplex_label((j + 1, j + 2)))})
	gamma = pushout_factor(result, u, v)
	edge = result.in_c.image(SimplexRef("01")).cell
	obj = MBSSet(result.obj, frozenset({edge}))
	if not boundary:
		return obj, DecoratedMap(gamma, obj, Y)
	target, _ = s_ext(m + 1, j, cap)
	return obj, DecoratedMap(SSetMap(result.obj, target.under, gamma.assignment), obj, target)


def lambda_vec(m: int, positions: Sequence[int], cap: int) -> Tuple[MBSSet, DecoratedMap]:
	"""Generalized horn: the faces skipping an index outside `positions`.

	Scaled triangles {i-1, i, i+1} for each listed inner index. When 0 is listed the edge
	01 is collapsed and {0, 1, m} is lean.
	"""
	pos = tuple(sorted(set(positions)))
	if not pos:
		raise ParameterError("generalized horns need at least one index")
	if any(b - a == 1 for a, b in zip(pos, pos[1:])):
		raise ParameterError(f"indices {list(pos)} must be non-consecutive")
	inner = [i for i in pos if i != 0]
	if any(not 0 < i < m for i in inner):
		raise ParameterError(f"indices {inner} must be inner for dimension {m}")
	collapsed = 0 in pos
	D = collapsed_simplex(m, cap) if collapsed else standard(m, cap)
	T = frozenset(c for c in _triangles((i - 1, i, i + 1) for i in inner) if c in D)
	lean = T | (frozenset({simplex_label((0, 1, m))}) & set(D.cells(2)) if collapsed else frozenset())
	ambient = MBSSet(D, frozenset(), T, lean)
	full = set(range(m + 1))
	tops = [simplex_label(sorted(full - {v})) for v in range(m + 1) if v not in pos]
	cells = [c for c in tops if c in D]
	# faces through the collapsed edge survive only as their classes
	for v in range(m + 1):
		if v in pos:
			continue
		label = simplex_label(sorted(full - {v}))
		if label not in D and collapsed:
			cells.extend(c for c in D.cells() if set(D.shape[c]) <= full - {v})
	return _sub(ambient, cells, f"Lambda^{m}_{list(pos)}")


def parse_name(text: str) -> Tuple[str, Tuple[int, ...]]:
	match = re.fullmatch(r"\s*([A-Za-z_]+)\s*\(([^)]*)\)\s*", text)
	if not match:
		raise ParameterError(f"cannot parse subcomplex name {text!r}")
	name, raw = match.group(1), match.group(2)
	nums = tuple(int(x) for x in re.findall(r"-?\d+", raw))
	return name, nums


def named_subcomplex(name: str, params: Sequence[int] = (), cap: Optional[int] = None) -> Tuple[MBSSet, DecoratedMap]:
	if "(" in name:
		name, params = parse_name(name)
	cap = runtime.cap if cap is None else cap
	params = tuple(params)
	if name not in NAMES:
		raise ParameterError(f"unknown subcomplex {name!r}")
	try:
		if name == "Lambda_vec":
			return lambda_vec(params[0], params[1:], cap)
		a, b = params
	except (IndexError, ValueError):
		raise ParameterError(f"{name} needs two parameters, got {list(params)}") from None
	if name == "R":
		return r_subcomplex(a, b, cap)
	if name == "L":
		return r_subcomplex(a, b, cap, only_ac=True)
	if name == "P":
		return p_subcomplex(a, b, cap)
	if name == "M":
		return p_subcomplex(a, b, cap, only_ac=True)
	if name == "S_ext":
		return s_ext(a, b, cap)
	if name == "B":
		return b_object(a, b, cap)
	if name == "dB":
		return b_object(a, b, cap, boundary=True)
	_check_nk(a, b)
	ambient = extension_scaling(a, b, cap)
	inc = SSetMap(ambient.under, ambient.under, {c: SimplexRef(c) for c in ambient.under.cells()})
	return ambient, DecoratedMap(inc, ambient, ambient)
