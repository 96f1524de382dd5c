import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from ..errors import CellError, DimensionCapError, MapError, ParameterError, StructureError
from ..state import runtime


logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
Theta = Tuple[int, ...]


def degeneracy_word(indices: Iterable[int]) -> Word:
	"""Validate a degeneracy word: strictly decreasing, non-negative indices."""
	word = tuple(int(j) for j in indices)
	for a, b in zip(word, word[1:]):
		if a <= b:
			raise ParameterError(f"degeneracy word {list(word)} is not strictly decreasing")
	if word and word[-1] < 0:
		raise ParameterError(f"degeneracy word {list(word)} has a negative index")
	return word


def surjection(word: Word, k: int) -> Theta:
	"""The monotone surjection [k] -> [k - len(word)] that identifies j and j+1 for j in word."""
	marks = set(word)
	out: List[int] = []
	v = 0
	for j in range(k + 1):
		out.append(v)
		if j not in marks:
			v += 1
	return tuple(out)


def word_of(comp: Sequence[int]) -> Word:
	return tuple(sorted((j for j in range(len(comp) - 1) if comp[j] == comp[j + 1]), reverse=True))


def collapse_word(word: Word, common: Iterable[int]) -> Word:
	"""Word of the simplex left after factoring the degeneracies in `common` out of `word`."""
	common = set(common)
	out = []
	for i in word:
		if i in common:
			continue
		out.append(i - sum(1 for j in common if j < i))
	return tuple(sorted(out, reverse=True))


def face_theta(k: int, i: int) -> Theta:
	return tuple(j for j in range(k + 1) if j != i)


def degeneracy_theta(k: int, j: int) -> Theta:
	"""The codegeneracy [k+1] -> [k] hitting j twice."""
	return tuple(range(j + 1)) + tuple(range(j, k + 1))


def simplex_label(vertices: Sequence[int]) -> str:
	if all(v < 10 for v in vertices):
		return "".join(str(v) for v in vertices)
	return ",".join(str(v) for v in vertices)


@dataclass(frozen=True, order=True)
class SimplexRef:
	"""A simplex as s_I(cell): a nondegenerate cell plus a degeneracy word."""

	cell: str
	word: Word = ()

	@property
	def degenerate(self) -> bool:
		return bool(self.word)

	def label(self) -> str:
		if not self.word:
			return self.cell
		return f"{self.cell}|{'.'.join(str(j) for j in self.word)}"


def compose_degeneracy(base: SimplexRef, base_dim: int, cell_dim: int, word: Word) -> SimplexRef:
	"""s_word applied to `base` (a simplex of dimension base_dim over a cell of dimension cell_dim)."""
	k = base_dim + len(word)
	outer = surjection(base.word, base_dim)
	inner = surjection(word, k)
	comp = tuple(outer[inner[t]] for t in range(k + 1))
	if comp and comp[-1] != cell_dim:
		raise StructureError(f"degeneracy of {base.label()} does not land on a {cell_dim}-cell")
	return SimplexRef(base.cell, word_of(comp))


class FiniteSSet:
	"""Finite simplicial set given by its nondegenerate cells and their faces.

	Faces are stored as SimplexRefs, so a face of a nondegenerate cell may itself be
	degenerate. Every other simplex is computed through `apply`.
	"""

	def __init__(
		self,
		dims: Mapping[str, int],
		faces: Mapping[str, Sequence[SimplexRef]],
		cap: Optional[int] = None,
		name: str = "",
		truncated: bool = False,
		shape: Optional[Mapping[str, Tuple[int, ...]]] = None,
	) -> None:
		self.cap = runtime.cap if cap is None else int(cap)
		self.name = name
		self.truncated = truncated
		for cell, d in dims.items():
			if d > self.cap:
				raise DimensionCapError(d, self.cap, f"cell {cell}")
		self._dims: Dict[str, int] = dict(dims)
		self._faces: Dict[str, Tuple[SimplexRef, ...]] = {c: tuple(faces.get(c, ())) for c in self._dims}
		self.shape: Optional[Dict[str, Tuple[int, ...]]] = dict(shape) if shape else None
		self._order: List[str] = sorted(self._dims, key=lambda c: (self._dims[c], c))
		self._by_dim: Dict[int, List[str]] = {}
		for c in self._order:
			self._by_dim.setdefault(self._dims[c], []).append(c)
		self._apply_cache: Dict[Tuple[SimplexRef, Theta], SimplexRef] = {}
		self._simplices: Dict[int, List[SimplexRef]] = {}
		self._vertex_index: Dict[int, Dict[Tuple[str, ...], List[SimplexRef]]] = {}
		self._vertices: Dict[SimplexRef, Tuple[str, ...]] = {}

	def __repr__(self) -> str:
		return f"FiniteSSet({self.name or '?'}, census={self.census()})"

	def __contains__(self, cell: object) -> bool:
		return cell in self._dims

	def __len__(self) -> int:
		return len(self._dims)

	@property
	def max_dim(self) -> int:
		return max(self._by_dim) if self._by_dim else -1

	def dim(self, cell: str) -> int:
		try:
			return self._dims[cell]
		except KeyError:
			raise CellError(cell, self.name) from None

	def ref_dim(self, ref: SimplexRef) -> int:
		return self.dim(ref.cell) + len(ref.word)

	def cells(self, k: Optional[int] = None) -> List[str]:
		if k is None:
			return list(self._order)
		return list(self._by_dim.get(k, ()))

	def faces_of(self, cell: str) -> Tuple[SimplexRef, ...]:
		if cell not in self._dims:
			raise CellError(cell, self.name)
		return self._faces[cell]

	def census(self) -> List[int]:
		return [len(self._by_dim.get(k, ())) for k in range(self.max_dim + 1)]

	# -- simplicial operators -------------------------------------------------

	def apply(self, ref: SimplexRef, theta: Theta) -> SimplexRef:
		"""Pull `ref` back along the monotone map theta: [m] -> [dim ref]."""
		key = (ref, theta)
		hit = self._apply_cache.get(key)
		if hit is not None:
			return hit
		d = self.dim(ref.cell)
		k = d + len(ref.word)
		if any(t < 0 or t > k for t in theta):
			raise ParameterError(f"operator {list(theta)} does not act on a {k}-simplex")
		eta = surjection(ref.word, k)
		comp = tuple(eta[t] for t in theta)
		image = sorted(set(comp))
		if len(image) == d + 1:
			out = SimplexRef(ref.cell, word_of(comp))
		else:
			base = self._vertex_face(ref.cell, d, tuple(image))
			rank = {v: n for n, v in enumerate(image)}
			out = self.apply(base, tuple(rank[v] for v in comp))
		self._apply_cache[key] = out
		return out

	def _vertex_face(self, cell: str, d: int, image: Tuple[int, ...]) -> SimplexRef:
		present = set(image)
		missing = max(v for v in range(d + 1) if v not in present)
		face = self._faces[cell][missing]
		rest = tuple(v if v < missing else v - 1 for v in image)
		return self.apply(face, rest)

	def face(self, ref: SimplexRef, i: int) -> SimplexRef:
		k = self.ref_dim(ref)
		if k < 1 or not 0 <= i <= k:
			raise ParameterError(f"face d{i} is undefined on a {k}-simplex")
		return self.apply(ref, face_theta(k, i))

	def degeneracy(self, ref: SimplexRef, j: int) -> SimplexRef:
		k = self.ref_dim(ref)
		if not 0 <= j <= k:
			raise ParameterError(f"degeneracy s{j} is undefined on a {k}-simplex")
		return self.apply(ref, degeneracy_theta(k, j))

	def vertices(self, ref: SimplexRef) -> Tuple[str, ...]:
		hit = self._vertices.get(ref)
		if hit is None:
			k = self.ref_dim(ref)
			hit = tuple(self.apply(ref, (j,)).cell for j in range(k + 1))
			self._vertices[ref] = hit
		return hit

	def simplices(self, k: int) -> List[SimplexRef]:
		"""All k-simplices, degenerate ones included, nondegenerate first."""
		hit = self._simplices.get(k)
		if hit is None:
			hit = []
			for c in self._order:
				d = self._dims[c]
				if d > k:
					continue
				for idx in combinations(range(k), k - d):
					hit.append(SimplexRef(c, tuple(sorted(idx, reverse=True))))
			hit.sort(key=lambda r: (len(r.word), self._dims[r.cell], r.cell, r.word))
			self._simplices[k] = hit
		return hit

	def by_vertices(self, k: int, verts: Tuple[str, ...]) -> List[SimplexRef]:
		index = self._vertex_index.get(k)
		if index is None:
			index = {}
			for ref in self.simplices(k):
				index.setdefault(self.vertices(ref), []).append(ref)
			self._vertex_index[k] = index
		return index.get(verts, [])

	# -- subobjects -----------------------------------------------------------

	def closure(self, cells: Iterable[str]) -> Set[str]:
		out: Set[str] = set()
		todo = list(cells)
		while todo:
			c = todo.pop()
			if c in out:
				continue
			if c not in self._dims:
				raise CellError(c, self.name)
			out.add(c)
			todo.extend(f.cell for f in self._faces[c])
		return out

	def restrict(self, cells: Iterable[str], name: str = "") -> "FiniteSSet":
		keep = self.closure(cells)
		shape = {c: s for c, s in self.shape.items() if c in keep} if self.shape else None
		return FiniteSSet(
			{c: self._dims[c] for c in keep},
			{c: self._faces[c] for c in keep},
			cap=self.cap,
			name=name or self.name,
			truncated=self.truncated,
			shape=shape,
		)

	def check(self) -> None:
		"""Validate face data and the simplicial identities d_i d_j = d_{j-1} d_i (i < j)."""
		for c in self._order:
			d = self._dims[c]
			fs = self._faces[c]
			expected = d + 1 if d > 0 else 0
			if len(fs) != expected:
				raise StructureError(f"cell {c} of dimension {d} lists {len(fs)} faces")
			for f in fs:
				if f.cell not in self._dims:
					raise CellError(f.cell, f"faces of {c}")
				degeneracy_word(f.word)
				if self.ref_dim(f) != d - 1:
					raise StructureError(f"face {f.label()} of {c} has the wrong dimension")
				if f.word and f.word[0] >= d - 1:
					raise StructureError(f"face {f.label()} of {c} has an out-of-range degeneracy")
		for c in self._order:
			d = self._dims[c]
			if d < 2:
				continue
			top = SimplexRef(c)
			for j in range(d + 1):
				for i in range(j):
					left = self.face(self.face(top, j), i)
					right = self.face(self.face(top, i), j - 1)
					if left != right:
						raise StructureError(f"cell {c} violates d{i}d{j} = d{j - 1}d{i}")


class SSetMap:
	"""Simplicial map, determined by the images of nondegenerate source cells."""

	def __init__(self, source: FiniteSSet, target: FiniteSSet, assignment: Mapping[str, SimplexRef], name: str = "") -> None:
		self.source = source
		self.target = target
		self.assignment: Dict[str, SimplexRef] = dict(assignment)
		self.name = name

	def __repr__(self) -> str:
		return f"SSetMap({self.source.name} -> {self.target.name})"

	def image(self, ref: SimplexRef) -> SimplexRef:
		base = self.assignment.get(ref.cell)
		if base is None:
			raise CellError(ref.cell, f"domain of {self.name or 'map'}")
		if not ref.word:
			return base
		return self.target.apply(base, surjection(ref.word, self.source.ref_dim(ref)))

	def check(self) -> None:
		for c in self.source.cells():
			if c not in self.assignment:
				raise MapError(f"cell {c} of {self.source.name} has no image")
		for c, ref in self.assignment.items():
			d = self.source.dim(c)
			if ref.cell not in self.target:
				raise MapError(f"image of {c} names unknown cell {ref.cell}")
			if self.target.ref_dim(ref) != d:
				raise MapError(f"image of {c} has dimension {self.target.ref_dim(ref)}, expected {d}")
			if d == 0:
				continue
			for i, f in enumerate(self.source.faces_of(c)):
				if self.image(f) != self.target.face(ref, i):
					raise MapError(f"map does not commute with d{i} on {c}")

	def is_mono(self) -> bool:
		seen: Set[str] = set()
		for ref in self.assignment.values():
			if ref.word or ref.cell in seen:
				return False
			seen.add(ref.cell)
		return True

	def is_isomorphism(self) -> bool:
		return self.is_mono() and len(self.assignment) == len(self.target)

	def image_cells(self) -> Set[str]:
		return {r.cell for r in self.assignment.values() if not r.word}


def compose(f: SSetMap, g: SSetMap) -> SSetMap:
	"""g after f."""
	if f.target is not g.source:
		raise MapError("maps are not composable")
	return SSetMap(f.source, g.target, {c: g.image(r) for c, r in f.assignment.items()})


def identity(X: FiniteSSet) -> SSetMap:
	return SSetMap(X, X, {c: SimplexRef(c) for c in X.cells()}, name=f"id({X.name})")


def empty(cap: Optional[int] = None, name: str = "empty") -> FiniteSSet:
	return FiniteSSet({}, {}, cap=cap, name=name, shape={})


def standard(n: int, cap: Optional[int] = None) -> FiniteSSet:
	cap = runtime.cap if cap is None else cap
	if n < 0:
		raise ParameterError(f"standard simplex needs n >= 0, got {n}")
	if n > cap:
		raise DimensionCapError(n, cap, f"standard({n})")
	dims: Dict[str, int] = {}
	faces: Dict[str, Tuple[SimplexRef, ...]] = {}
	shape: Dict[str, Tuple[int, ...]] = {}
	for k in range(n + 1):
		for vs in combinations(range(n + 1), k + 1):
			label = simplex_label(vs)
			dims[label] = k
			shape[label] = vs
			if k:
				faces[label] = tuple(SimplexRef(simplex_label(vs[:i] + vs[i + 1:])) for i in range(k + 1))
	return FiniteSSet(dims, faces, cap=cap, name=f"Delta^{n}", shape=shape)


def point(cap: Optional[int] = None) -> FiniteSSet:
	return standard(0, cap)


def terminal(X: FiniteSSet, pt: Optional[FiniteSSet] = None) -> SSetMap:
	"""The unique map to the point."""
	pt = pt or point(X.cap)
	return SSetMap(X, pt, {c: SimplexRef("0", tuple(range(X.dim(c) - 1, -1, -1))) for c in X.cells()}, name="terminal")


def simplex_map(X: FiniteSSet, ref: SimplexRef, n: Optional[int] = None) -> SSetMap:
	"""The map Delta^n -> X classifying an n-simplex."""
	k = X.ref_dim(ref)
	if n is not None and n != k:
		raise ParameterError(f"{ref.label()} is a {k}-simplex, not a {n}-simplex")
	D = standard(k, max(X.cap, k))
	return SSetMap(D, X, {c: X.apply(ref, D.shape[c]) for c in D.cells()})


def _top_cell(X: FiniteSSet) -> str:
	tops = X.cells(X.max_dim)
	if len(tops) != 1:
		raise ParameterError(f"{X.name} has no unique top cell")
	return tops[0]


def subcomplex(kind: str, X: FiniteSSet, i: Optional[int] = None, cells: Optional[Iterable[str]] = None) -> Tuple[FiniteSSet, SSetMap]:
	"""Boundary, horn or span subcomplex together with its inclusion (identity on ids)."""
	kind = kind.lower()
	if kind == "span":
		if cells is None:
			raise ParameterError("span subcomplex needs a cell list")
		keep = X.closure(cells)
		name = f"span({X.name})"
	elif kind in ("boundary", "horn"):
		top = _top_cell(X)
		n = X.dim(top)
		keep = set(X.cells()) - {top}
		name = f"d{X.name}"
		if kind == "horn":
			if i is None or not 0 <= i <= n:
				raise ParameterError(f"horn index {i} out of range for dimension {n}")
			if n < 1:
				raise ParameterError("horns need dimension at least 1")
			keep.discard(X.faces_of(top)[i].cell)
			name = f"Lambda^{n}_{i}"
	else:
		raise ParameterError(f"unknown subcomplex kind {kind!r}")
	sub = X.restrict(keep, name=name) if keep else empty(X.cap, name)
	return sub, SSetMap(sub, X, {c: SimplexRef(c) for c in sub.cells()})


def horn(n: int, i: int, cap: Optional[int] = None) -> Tuple[FiniteSSet, SSetMap]:
	return subcomplex("horn", standard(n, cap), i=i)


def boundary(n: int, cap: Optional[int] = None) -> Tuple[FiniteSSet, SSetMap]:
	return subcomplex("boundary", standard(n, cap))


class ProductSSet(FiniteSSet):
	"""Levelwise product, truncated at the cap."""

	def __init__(self, X: FiniteSSet, Y: FiniteSSet, cap: Optional[int] = None, name: str = "") -> None:
		cap = min(X.cap, Y.cap) if cap is None else cap
		self.cap = cap
		self.left = X
		self.right = Y
		self.components: Dict[str, Tuple[SimplexRef, SimplexRef]] = {}
		self._pair_ids: Dict[Tuple[SimplexRef, SimplexRef], str] = {}
		full = X.max_dim + Y.max_dim if X.max_dim >= 0 and Y.max_dim >= 0 else -1
		top = min(full, cap)
		dims: Dict[str, int] = {}
		for k in range(top + 1):
			for x in X.simplices(k):
				for y in Y.simplices(k):
					if set(x.word) & set(y.word):
						continue
					ident = f"<{x.label()};{y.label()}>"
					self._pair_ids[(x, y)] = ident
					self.components[ident] = (x, y)
					dims[ident] = k
		faces: Dict[str, Tuple[SimplexRef, ...]] = {}
		for ident, (x, y) in self.components.items():
			k = dims[ident]
			if k:
				faces[ident] = tuple(self.pair(X.face(x, i), Y.face(y, i)) for i in range(k + 1))
		super().__init__(dims, faces, cap=cap, name=name or f"{X.name}x{Y.name}", truncated=full > cap or X.truncated or Y.truncated)
		if full > cap:
			logger.debug("product %s truncated at dimension %d (full dimension %d)", self.name, cap, full)

	def pair(self, x: SimplexRef, y: SimplexRef) -> SimplexRef:
		"""The simplex (x, y) in Eilenberg-Zilber normal form."""
		if self.left.ref_dim(x) != self.right.ref_dim(y):
			raise ParameterError("product simplices need components of equal dimension")
		common = set(x.word) & set(y.word)
		if common:
			x = SimplexRef(x.cell, collapse_word(x.word, common))
			y = SimplexRef(y.cell, collapse_word(y.word, common))
		ident = self._pair_ids.get((x, y))
		if ident is None:
			raise DimensionCapError(self.left.ref_dim(x), self.cap, f"product simplex ({x.label()}, {y.label()})")
		return SimplexRef(ident, tuple(sorted(common, reverse=True)))

	def projections(self) -> Tuple[SSetMap, SSetMap]:
		p1 = SSetMap(self, self.left, {c: xy[0] for c, xy in self.components.items()}, name="pr1")
		p2 = SSetMap(self, self.right, {c: xy[1] for c, xy in self.components.items()}, name="pr2")
		return p1, p2


def product(X: FiniteSSet, Y: FiniteSSet, cap: Optional[int] = None) -> Tuple[ProductSSet, SSetMap, SSetMap]:
	P = ProductSSet(X, Y, cap)
	p1, p2 = P.projections()
	return P, p1, p2


def product_map(u: SSetMap, v: SSetMap, src: ProductSSet, dst: ProductSSet) -> SSetMap:
	"""u x v between two products."""
	return SSetMap(src, dst, {c: dst.pair(u.image(x), v.image(y)) for c, (x, y) in src.components.items()})


Element = Tuple[str, SimplexRef]


def _element_order(e: Element) -> Tuple[int, str, Word]:
	return (0 if e[0] == "B" else 1, e[1].cell, e[1].word)


@dataclass
class PushoutResult:
	obj: FiniteSSet
	in_b: SSetMap
	in_c: SSetMap
	members: Dict[str, List[Element]] = field(default_factory=dict)


def pushout(f: SSetMap, g: SSetMap, name: str = "", cap: Optional[int] = None) -> PushoutResult:
	"""Pushout of the span B <-f- A -g-> C, computed levelwise on all simplices.

	Classes containing a degenerate simplex are degenerate; every other class becomes a
	cell named after its least element, preferring the B side.
	"""
	if f.source is not g.source:
		raise MapError("span legs must share their source")
	A, B, C = f.source, f.target, g.target
	cap = min(B.cap, C.cap) if cap is None else cap
	top = max(B.max_dim, C.max_dim)
	pmap: Dict[Element, SimplexRef] = {}
	dims: Dict[str, int] = {}
	faces: Dict[str, Tuple[SimplexRef, ...]] = {}
	members: Dict[str, List[Element]] = {}
	shape: Dict[str, Tuple[int, ...]] = {}
	b_ids = set(B.cells())
	taken: Set[str] = set()
	sides = {"B": B, "C": C}
	for k in range(top + 1):
		elems: List[Element] = [("B", r) for r in B.simplices(k)] + [("C", r) for r in C.simplices(k)]
		parent: Dict[Element, Element] = {e: e for e in elems}

		def find(e: Element) -> Element:
			while parent[e] != e:
				parent[e] = parent[parent[e]]
				e = parent[e]
			return e

		for a in A.simplices(k):
			ra, rc = find(("B", f.image(a))), find(("C", g.image(a)))
			if ra != rc:
				lo, hi = sorted((ra, rc), key=_element_order)
				parent[hi] = lo
		groups: Dict[Element, List[Element]] = {}
		for e in elems:
			groups.setdefault(find(e), []).append(e)
		for root in sorted(groups, key=_element_order):
			group = groups[root]
			degenerate = [e for e in group if e[1].word]
			if degenerate:
				side, ref = min(degenerate, key=_element_order)
				core = pmap[(side, SimplexRef(ref.cell))]
				core_dim = k - len(ref.word)
				value = compose_degeneracy(core, core_dim, dims[core.cell], ref.word)
				for e in group:
					pmap[e] = value
				continue
			side, ref = min(group, key=_element_order)
			ident = ref.cell
			if side == "C" and ident in b_ids:
				ident += "'"
			while ident in taken:
				ident += "'"
			taken.add(ident)
			dims[ident] = k
			members[ident] = sorted(group, key=_element_order)
			owner = sides[side]
			if k:
				faces[ident] = tuple(pmap[(side, owner.face(ref, i))] for i in range(k + 1))
			if owner.shape and ref.cell in owner.shape:
				shape[ident] = owner.shape[ref.cell]
			for e in group:
				pmap[e] = SimplexRef(ident)
	P = FiniteSSet(dims, faces, cap=cap, name=name or f"{B.name}+{C.name}", truncated=B.truncated or C.truncated, shape=shape or None)
	in_b = SSetMap(B, P, {c: pmap[("B", SimplexRef(c))] for c in B.cells()}, name="inB")
	in_c = SSetMap(C, P, {c: pmap[("C", SimplexRef(c))] for c in C.cells()}, name="inC")
	return PushoutResult(P, in_b, in_c, members)


def pushout_factor(result: PushoutResult, u: SSetMap, v: SSetMap) -> SSetMap:
	"""The map out of a pushout induced by a cocone (u on B, v on C)."""
	if u.target is not v.target:
		raise MapError("cocone legs must share their target")
	assignment: Dict[str, SimplexRef] = {}
	for cell, group in result.members.items():
		images = {(u if side == "B" else v).image(ref) for side, ref in group}
		if len(images) != 1:
			raise MapError(f"cocone does not commute on the class of {cell}")
		assignment[cell] = images.pop()
	return SSetMap(result.obj, u.target, assignment, name="factor")
