import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Set

from ..state import runtime
from .sset import FiniteSSet, SimplexRef, surjection


logger = logging.getLogger(__name__)

Accept = Callable[[str, SimplexRef], bool]


class BudgetExhausted(Exception):
	"""Raised inside a search once its node budget is spent; callers turn it into a verdict."""


@dataclass
class SearchStats:
	nodes: int = 0
	solutions: int = 0
	exhausted: bool = False
	budget: Optional[int] = None
	truncated: bool = False  # some sub-search stopped early

	def charge(self, n: int = 1) -> None:
		self.nodes += n
		if self.budget is not None and self.nodes > self.budget:
			if not self.exhausted:
				logger.debug("search budget of %d nodes exhausted", self.budget)
			self.exhausted = True
			raise BudgetExhausted()

	def to_dict(self) -> Dict[str, object]:
		return {"nodes": self.nodes, "solutions": self.solutions, "exhausted": self.exhausted, "budget": self.budget, "truncated": self.truncated}


def new_stats(budget: Optional[int] = None) -> SearchStats:
	return SearchStats(budget=runtime.budget if budget is None else budget)


class ExtensionSearch:
	"""Backtracking search for simplicial maps source -> target extending `fixed`.

	Cells are assigned in ascending dimension. Candidates for a k-cell come from the
	target's vertex index, are checked against the already assigned faces, and are
	then filtered by `accept`.
	"""

	def __init__(
		self,
		source: FiniteSSet,
		target: FiniteSSet,
		fixed: Optional[Mapping[str, SimplexRef]] = None,
		accept: Optional[Accept] = None,
		injective: bool = False,
		stats: Optional[SearchStats] = None,
	) -> None:
		self.source = source
		self.target = target
		self.fixed: Dict[str, SimplexRef] = dict(fixed or {})
		self.accept = accept
		self.injective = injective
		self.stats = stats if stats is not None else new_stats()
		self.order: List[str] = [c for c in source.cells() if c not in self.fixed]
		self._dims = {c: source.dim(c) for c in self.order}
		self._faces = {c: source.faces_of(c) for c in self.order}
		self._verts = {c: source.vertices(SimplexRef(c)) for c in self.order if self._dims[c] > 0}

	def _image(self, assignment: Mapping[str, SimplexRef], ref: SimplexRef) -> SimplexRef:
		base = assignment[ref.cell]
		if not ref.word:
			return base
		return self.target.apply(base, surjection(ref.word, self.source.ref_dim(ref)))

	def _candidates(self, assignment: Mapping[str, SimplexRef], used: Set[str], cell: str) -> Iterator[SimplexRef]:
		k = self._dims[cell]
		if k == 0:
			pool = [SimplexRef(v) for v in self.target.cells(0)]
		else:
			key = tuple(assignment[v].cell for v in self._verts[cell])
			pool = self.target.by_vertices(k, key)
		faces = self._faces[cell]
		for cand in pool:
			if self.injective and (cand.word or cand.cell in used):
				continue
			if k and any(self._image(assignment, f) != self.target.face(cand, i) for i, f in enumerate(faces)):
				continue
			if self.accept is not None and not self.accept(cell, cand):
				continue
			yield cand

	def solutions(self) -> Iterator[Dict[str, SimplexRef]]:
		assignment = dict(self.fixed)
		used = {r.cell for r in self.fixed.values() if not r.word} if self.injective else set()
		yield from self._extend(assignment, used, 0)

	def _extend(self, assignment: Dict[str, SimplexRef], used: Set[str], pos: int) -> Iterator[Dict[str, SimplexRef]]:
		if pos == len(self.order):
			self.stats.solutions += 1
			yield dict(assignment)
			return
		cell = self.order[pos]
		for cand in list(self._candidates(assignment, used, cell)):
			self.stats.charge()
			assignment[cell] = cand
			if self.injective:
				used.add(cand.cell)
			yield from self._extend(assignment, used, pos + 1)
			if self.injective:
				used.discard(cand.cell)
			del assignment[cell]

	def first(self) -> Optional[Dict[str, SimplexRef]]:
		for sol in self.solutions():
			return sol
		return None


def fix_simplex(source: FiniteSSet, cell: str, ref: SimplexRef, target: FiniteSSet) -> Dict[str, SimplexRef]:
	"""Assignment sending a simplex-shaped cell and all of its faces onto `ref`."""
	if source.shape is None:
		raise ValueError(f"{source.name} carries no vertex positions")
	top = source.shape[cell]
	rank = {v: n for n, v in enumerate(top)}
	out: Dict[str, SimplexRef] = {}
	for c in source.closure([cell]):
		out[c] = target.apply(ref, tuple(rank[v] for v in source.shape[c]))
	return out
