import logging
from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple

from ..errors import DerivationError, MapError, ParameterError
from ..state import runtime
from .decor import DecoratedMap, MBSSet, image_decorations
from .generators import (
	CELL_FAMILIES,
	Generator,
	GeneratorId,
	KAN_FIXTURES,
	generator,
	generator_dimension,
	kan_fixture,
)
from .search import BudgetExhausted, ExtensionSearch, SearchStats, new_stats
from .sset import FiniteSSet, ProductSSet, SimplexRef, SSetMap, simplex_label


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Stage:
	"""A decorated subobject of the ambient target, as sets of its cell ids."""

	cells: FrozenSet[str]
	marked: FrozenSet[str] = frozenset()
	thin: FrozenSet[str] = frozenset()
	lean: FrozenSet[str] = frozenset()

	@classmethod
	def of(cls, X: MBSSet) -> "Stage":
		return cls(frozenset(X.under.cells()), X.marked, X.thin, X.lean)

	@classmethod
	def image(cls, j: DecoratedMap) -> "Stage":
		cells, marked, thin, lean = image_decorations(j)
		return cls(cells, marked, thin, lean | thin)

	def missing(self, other: "Stage") -> Dict[str, List[str]]:
		return {
			"cells": sorted(other.cells - self.cells),
			"marked": sorted(other.marked - self.marked),
			"thin": sorted(other.thin - self.thin),
			"lean": sorted(other.lean - self.lean),
		}

	def to_dict(self) -> Dict[str, List[str]]:
		return {"cells": sorted(self.cells), "marked": sorted(self.marked), "thin": sorted(self.thin), "lean": sorted(self.lean)}


@dataclass(frozen=True)
class Step:
	generator: GeneratorId
	attach: Tuple[Tuple[str, SimplexRef], ...]
	phase: str = ""

	@classmethod
	def make(cls, gid: GeneratorId, mapping: Mapping[str, SimplexRef], phase: str = "") -> "Step":
		return cls(gid, tuple(sorted(mapping.items())), phase)

	@property
	def attach_map(self) -> Dict[str, SimplexRef]:
		return dict(self.attach)


@dataclass(eq=False)
class Derivation:
	ambient: MBSSet
	start: Stage
	steps: List[Step]
	cap: int
	meta: Dict[str, object] = field(default_factory=dict)

	def phases(self, prefix: str = "") -> List[str]:
		"""Distinct phase labels of the cell-attaching steps, in order."""
		out: List[str] = []
		for step in self.steps:
			if step.generator.family in CELL_FAMILIES and step.phase.startswith(prefix) and step.phase not in out:
				out.append(step.phase)
		return out


@dataclass
class VerifyResult:
	ok: bool
	failing_step: Optional[int] = None
	reason: str = ""
	final: Optional[Stage] = None

	def to_dict(self) -> Dict[str, object]:
		return {"ok": self.ok, "failing_step": self.failing_step, "reason": self.reason}


def _decorated_in(stage_set: FrozenSet[str], ref: SimplexRef) -> bool:
	return bool(ref.word) or ref.cell in stage_set


def apply_step(ambient: MBSSet, stage: Stage, step: Step, cap: int, trusted: bool = False) -> Stage:
	"""The stage after gluing one generator along its attaching map; raises DerivationError."""
	try:
		gen = generator(step.generator, cap)
	except ValueError as exc:
		raise DerivationError(str(exc)) from None
	T, A = gen.target, gen.source
	attach = step.attach_map
	if set(attach) != set(T.under.cells()):
		raise DerivationError(f"{step.generator}: attaching map does not cover the generator")
	U = ambient.under
	for c, r in attach.items():
		if r.cell not in U:
			raise DerivationError(f"{step.generator}: {c} lands on unknown cell {r.cell}")
	if not trusted:
		try:
			SSetMap(T.under, U, attach).check()
		except (MapError, ValueError) as exc:
			raise DerivationError(f"{step.generator}: {exc}") from None
	for a in A.under.cells():
		if attach[a].cell not in stage.cells:
			raise DerivationError(f"{step.generator}: source cell {a} lands outside the stage")
	for label, cells, have in (("marked", A.marked, stage.marked), ("thin", A.thin, stage.thin), ("lean", A.lean, stage.lean)):
		for c in cells:
			if not _decorated_in(have, attach[c]):
				raise DerivationError(f"{step.generator}: {label} source cell {c} is not {label} in the stage")
	images: List[str] = []
	for c in gen.new_cells:
		r = attach[c]
		if r.word:
			raise DerivationError(f"{step.generator}: new cell {c} lands on a degenerate simplex")
		if r.cell in stage.cells:
			raise DerivationError(f"{step.generator}: new cell {c} lands on {r.cell}, already in the stage")
		images.append(r.cell)
	if len(set(images)) != len(images):
		raise DerivationError(f"{step.generator}: new cells are not attached injectively")
	checks = (("marked", T.marked, ambient.is_marked), ("thin", T.thin, ambient.is_thin), ("lean", T.lean, ambient.is_lean))
	for label, cells, pred in checks:
		for c in cells:
			if not pred(attach[c]):
				raise DerivationError(f"{step.generator}: {label} cell {c} lands on {attach[c].label()}, not {label} in the target")

	def hit(cells: FrozenSet[str]) -> Set[str]:
		return {attach[c].cell for c in cells if not attach[c].word}

	thin = stage.thin | hit(T.thin)
	nxt = Stage(
		stage.cells | frozenset(images),
		stage.marked | hit(T.marked),
		thin,
		stage.lean | hit(T.lean) | thin,
	)
	if nxt == stage:
		raise DerivationError(f"{step.generator}: step adds nothing")
	return nxt


def _check_start(ambient: MBSSet, start: Stage) -> Optional[str]:
	U = ambient.under
	for c in start.cells:
		if c not in U:
			return f"start cell {c} is not in the target"
	if U.closure(start.cells) != set(start.cells):
		return "start stage is not closed under faces"
	for label, have, full in (("marked", start.marked, ambient.marked), ("thin", start.thin, ambient.thin), ("lean", start.lean, ambient.lean)):
		if not have <= full or not have <= start.cells:
			return f"start {label} set is not part of the target's"
	return None


def verify(d: Derivation) -> VerifyResult:
	"""Replay every step with all checks on; the last stage must be the whole target."""
	problem = _check_start(d.ambient, d.start)
	if problem:
		return VerifyResult(False, None, problem, d.start)
	stage = d.start
	for idx, step in enumerate(d.steps):
		try:
			stage = apply_step(d.ambient, stage, step, d.cap)
		except DerivationError as exc:
			return VerifyResult(False, idx, exc.reason, stage)
	final = Stage.of(d.ambient)
	if stage != final:
		gaps = {k: v for k, v in stage.missing(final).items() if v}
		return VerifyResult(False, len(d.steps), f"final stage misses {gaps}", stage)
	return VerifyResult(True, None, "", stage)


# -- automatic search -----------------------------------------------------------

_DECORATION_ORDER = ("A2", "S1", "S2", "S3:1", "S3:2", "S4", "S5", "THETA")
_ADDS = {
	"A2": ("thin", "lean"),
	"S1": ("marked",),
	"S2": ("thin",),
	"S3:1": ("lean",),
	"S3:2": ("lean",),
	"S4": ("lean",),
	"S5": ("lean",),
	"THETA": ("marked",),
}


def _delta(gen: Generator) -> Dict[str, FrozenSet[str]]:
	T, A = gen.target, gen.source
	return {"marked": T.marked - A.marked, "thin": T.thin - A.thin, "lean": T.lean - A.lean}


def _decoration_candidates(ambient: MBSSet, stage: Stage, cap: int, phase: str, stats: Optional[SearchStats] = None) -> Iterator[Step]:
	U = ambient.under
	want = {
		"marked": (ambient.marked & stage.cells) - stage.marked,
		"thin": (ambient.thin & stage.cells) - stage.thin,
		"lean": (ambient.lean & stage.cells) - stage.lean,
	}
	if not any(want.values()):
		return
	for text in _DECORATION_ORDER:
		if not any(want[k] for k in _ADDS[text]):
			continue
		gid = GeneratorId.parse(text)
		if generator_dimension(gid) > cap:
			continue
		gen = generator(gid, cap)
		delta = _delta(gen)
		for top in U.simplices(generator_dimension(gid)):
			if top.cell not in stage.cells:
				continue
			attach = gen.attach_from_top(U, top)
			if attach is None:
				continue
			if any(not attach[c].word and attach[c].cell in want[k] for k, cells in delta.items() for c in cells):
				yield Step.make(gid, attach, phase)
	if want["marked"]:
		yield from _kan_candidates(ambient, stage, cap, phase, want["marked"], stats)


def _kan_candidates(
	ambient: MBSSet,
	stage: Stage,
	cap: int,
	phase: str,
	wanted: FrozenSet[str],
	stats: Optional[SearchStats] = None,
) -> Iterator[Step]:
	"""E steps marking a wanted edge; a search cut by MB_KAN_TRIES or its budget flags `stats` as truncated."""
	U = ambient.under
	limit = runtime.kan_tries
	for name in runtime.kan_fixtures:
		if name not in KAN_FIXTURES or name == "Delta0":
			continue
		gid = GeneratorId("E", (name,))
		K = kan_fixture(name, cap)

		def accept(c: str, r: SimplexRef) -> bool:
			if r.cell not in stage.cells:
				return False
			k = K.dim(c)
			if k == 1:
				return ambient.is_marked(r)
			if k == 2:
				return _decorated_in(stage.thin, r)
			return True

		search = ExtensionSearch(K, U, accept=accept, stats=new_stats(None))
		tried = 0
		try:
			for sol in search.solutions():
				tried += 1
				if any(not r.word and r.cell in wanted for c, r in sol.items() if K.dim(c) == 1):
					yield Step.make(gid, sol, phase)
				if limit and tried >= limit:
					logger.debug("E:%s search on %s cut after %d maps", name, ambient.name, tried)
					if stats is not None:
						stats.truncated = True
					break
		except BudgetExhausted:
			if stats is not None:
				stats.truncated = True
			continue


def decoration_closure(
	ambient: MBSSet,
	stage: Stage,
	cap: Optional[int] = None,
	phase: str = "",
	stats: Optional[SearchStats] = None,
) -> Tuple[Stage, List[Step]]:
	"""Saturate a stage under the decoration-only generators, recording every step."""
	cap = runtime.cap if cap is None else cap
	steps: List[Step] = []
	changed = True
	while changed:
		changed = False
		for step in list(_decoration_candidates(ambient, stage, cap, phase, stats)):
			try:
				stage = apply_step(ambient, stage, step, cap, trusted=True)
			except DerivationError:
				continue
			steps.append(step)
			changed = True
	return stage, steps


def _cell_gids(k: int) -> List[GeneratorId]:
	out: List[GeneratorId] = []
	if k == 1:
		out.append(GeneratorId("A5"))
	if k >= 2:
		out.extend(GeneratorId("A1", (k, i)) for i in range(1, k))
		out.append(GeneratorId("A3", (k,)))
		out.append(GeneratorId("A4", (k,)))
	return out


def _cell_candidates(ambient: MBSSet, stage: Stage, cap: int, allowed: Optional[Set[str]], phase: str) -> Iterator[Step]:
	U = ambient.under
	for k in range(U.max_dim, 0, -1):
		cells = [c for c in U.cells(k) if c not in stage.cells and (allowed is None or c in allowed)]
		if not cells:
			continue
		for gid in _cell_gids(k):
			gen = generator(gid, cap)
			src = gen.source.under.cells()
			new = gen.new_cells
			for c in cells:
				attach = gen.attach_from_top(U, SimplexRef(c))
				if attach is None:
					continue
				if any(attach[a].cell not in stage.cells for a in src):
					continue
				if any(attach[n].word or attach[n].cell in stage.cells for n in new):
					continue
				yield Step.make(gid, attach, phase)


@dataclass
class AutoResult:
	derivation: Optional[Derivation]
	stats: SearchStats
	final: Optional[Stage] = None

	@property
	def verdict(self) -> str:
		if self.derivation is not None:
			return "derived"
		return "budget-exhausted" if self.stats.exhausted or self.stats.truncated else "no-derivation"


def derive_auto(
	ambient: MBSSet,
	start: Stage,
	cap: Optional[int] = None,
	budget: Optional[int] = None,
	goal: Optional[Callable[[Stage], bool]] = None,
	allowed: Optional[Set[str]] = None,
	phase: str = "",
) -> AutoResult:
	"""Depth-first search for a derivation from `start` to the whole target (or to `goal`)."""
	cap = runtime.cap if cap is None else cap
	stats = new_stats(budget)
	final = Stage.of(ambient)
	done = goal or (lambda s: s == final)
	seen: Set[Stage] = set()
	reached: List[Stage] = []

	def dfs(stage: Stage, path: List[Step]) -> Optional[List[Step]]:
		stage, extra = decoration_closure(ambient, stage, cap, phase, stats)
		path = path + extra
		if done(stage):
			reached.append(stage)
			return path
		if stage in seen:
			return None
		seen.add(stage)
		for step in _cell_candidates(ambient, stage, cap, allowed, phase):
			stats.charge()
			try:
				nxt = apply_step(ambient, stage, step, cap, trusted=True)
			except DerivationError:
				continue
			found = dfs(nxt, path + [step])
			if found is not None:
				return found
		return None

	problem = _check_start(ambient, start)
	if problem:
		raise DerivationError(problem)
	try:
		steps = dfs(start, [])
	except BudgetExhausted:
		steps = None
	if steps is None:
		logger.debug("derive_auto on %s: %s after %d nodes", ambient.name, "budget exhausted" if stats.exhausted else "no derivation", stats.nodes)
		return AutoResult(None, stats)
	d = Derivation(ambient, start, steps, cap, {"strategy": "auto"})
	return AutoResult(d, stats, reached[-1])


# -- Z-strings and staircase simplices -----------------------------------------

class ZString(NamedTuple):
	a: Tuple[int, ...]
	b: Tuple[int, ...]

	def interleaved(self) -> Tuple[int, ...]:
		out: List[int] = []
		for x, y in zip(self.a, self.b):
			out.extend((x, y))
		return tuple(out)

	def __str__(self) -> str:
		if not self.a:
			return "∅"
		return "(" + ",".join(str(v) for v in self.interleaved()) + ")"

	@classmethod
	def from_interleaved(cls, values: Sequence[int]) -> "ZString":
		if len(values) % 2:
			raise ParameterError("a Z-string has even length")
		return cls(tuple(values[0::2]), tuple(values[1::2]))


def z_compare(x: ZString, y: ZString, n: int, m: int) -> int:
	"""Order on Z-strings: at the first difference a larger a sorts first, a larger b sorts last."""
	k = max(len(x.a), len(y.a))

	def padded(z: ZString) -> List[int]:
		out: List[int] = []
		for j in range(k):
			out.append(z.a[j] if j < len(z.a) else n)
			out.append(z.b[j] if j < len(z.b) else m)
		return out

	px, py = padded(x), padded(y)
	for pos, (u, v) in enumerate(zip(px, py)):
		if u == v:
			continue
		if pos % 2 == 0:
			return -1 if u > v else 1
		return -1 if u < v else 1
	return 0


def _validate_z(z: ZString, n: int, m: int) -> None:
	if len(z.a) != len(z.b):
		raise ParameterError(f"Z-string {z} has unequal halves")
	for seq, lo, hi in ((z.a, 0, n - 1), (z.b, 1, m)):
		if any(v < lo or v > hi for v in seq) or any(p >= q for p, q in zip(seq, seq[1:])):
			raise ParameterError(f"Z-string {z} is not valid for ({n}, {m})")


def z_strings(n: int, m: int) -> List[ZString]:
	"""All Z-strings for Delta^n x Delta^m, in attaching order."""
	if n < 0 or m < 0:
		raise ParameterError(f"Z-strings need n, m >= 0, got ({n}, {m})")
	out = [ZString((), ())]
	for k in range(1, min(n, m) + 1):
		for a in combinations(range(n), k):
			for b in combinations(range(1, m + 1), k):
				out.append(ZString(a, b))
	return sorted(out, key=cmp_to_key(lambda x, y: z_compare(x, y, n, m)))


def path_vertices(n: int, m: int, z: ZString) -> List[Tuple[int, int]]:
	"""The staircase path of z through the grid [n] x [m]."""
	_validate_z(z, n, m)
	k = len(z.a)
	if k == 0:
		return [(l, 0) if l <= n else (n, l - n) for l in range(n + m + 1)]
	a = (None,) + z.a + (n,)
	b = (0,) + z.b + (m,)
	out: List[Tuple[int, int]] = []
	for l in range(n + m + 1):
		if l <= a[1]:
			out.append((l, 0))
			continue
		for r in range(1, k + 2):
			if a[r] + b[r - 1] < l <= a[r] + b[r]:
				out.append((a[r], l - a[r]))
				break
			if r <= k and a[r] + b[r] < l <= a[r + 1] + b[r]:
				out.append((l - b[r], b[r]))
				break
	if len(out) != n + m + 1 or any(p >= q for p, q in zip(out, out[1:])):
		raise ParameterError(f"Z-string {z} does not give a nondegenerate staircase")
	return out


def path_simplex(n: int, m: int, z: ZString, P: ProductSSet) -> SimplexRef:
	"""The (n+m)-simplex of the product whose vertices follow the staircase of z."""
	verts = path_vertices(n, m, z)
	return _grid_simplex(P, [x for x, _ in verts], [y for _, y in verts])


def path_simplex_map(n: int, m: int, z: ZString, P: ProductSSet) -> SSetMap:
	from .sset import simplex_map

	return simplex_map(P, path_simplex(n, m, z, P), n + m)


def _grid_simplex(P: ProductSSet, xs: Sequence[int], ys: Sequence[int]) -> SimplexRef:
	X, Y = P.left, P.right
	tx = SimplexRef(X.cells(X.max_dim)[0])
	ty = SimplexRef(Y.cells(Y.max_dim)[0])
	return P.pair(X.apply(tx, tuple(xs)), Y.apply(ty, tuple(ys)))


# -- scripted filtrations -------------------------------------------------------

class _PlanError(Exception):
	pass


def plan_induction(U: FiniteSSet, top: SimplexRef, positions: Sequence[int], base: str, cap: int, phase: str) -> List[Step]:
	"""Steps attaching `top` along a generalized horn, peeling off one listed index at a time.

	`base` names the generator that closes the recursion: A1 for inner indices only, A3
	when 0 is listed, A4 when the last vertex is listed.
	"""
	k = U.ref_dim(top)
	pos = tuple(sorted(positions))
	if base == "A3":
		rest = [p for p in pos if p != 0]
	elif base == "A4":
		rest = [p for p in pos if p != k]
	else:
		rest = list(pos)
	if base == "A1" and len(rest) == 1:
		gid = GeneratorId("A1", (k, rest[0]))
	elif base != "A1" and not rest:
		gid = GeneratorId(base, (k,))
	else:
		if not rest:
			raise _PlanError("no index to attach along")
		i1 = rest[0]
		face = U.face(top, i1)
		if face.word:
			raise _PlanError(f"face d{i1} of {top.label()} is degenerate")
		left = tuple(p for p in pos if p != i1)
		shifted = tuple(p if p < i1 else p - 1 for p in left)
		return plan_induction(U, face, shifted, base, cap, phase) + plan_induction(U, top, left, base, cap, phase)
	try:
		gen = generator(gid, cap)
	except ValueError as exc:
		raise _PlanError(str(exc)) from None
	attach = gen.attach_from_top(U, top)
	if attach is None:
		raise _PlanError(f"{gid} cannot be attached along {top.label()}")
	return [Step.make(gid, attach, phase)]


@dataclass
class Phase:
	label: str
	top: SimplexRef
	positions: Tuple[int, ...]
	base: str


def run_plan(ambient: MBSSet, start: Stage, plan: List[Phase], cap: int, budget: Optional[int], meta: Dict[str, object]) -> Derivation:
	"""Execute scripted phases; a phase that does not apply verbatim is searched locally."""
	U = ambient.under
	stage, steps = decoration_closure(ambient, start, cap, "start")
	fallbacks: List[str] = []
	for ph in plan:
		trial, trial_steps, ok = stage, [], True
		try:
			planned = plan_induction(U, ph.top, ph.positions, ph.base, cap, ph.label)
		except _PlanError as exc:
			logger.debug("phase %s has no plan: %s", ph.label, exc)
			planned, ok = [], False
		for st in planned:
			try:
				trial = apply_step(ambient, trial, st, cap, trusted=True)
			except DerivationError as exc:
				logger.debug("phase %s: planned step %s rejected: %s", ph.label, st.generator, exc.reason)
				ok = False
				break
			trial_steps.append(st)
			trial, extra = decoration_closure(ambient, trial, cap, ph.label)
			trial_steps.extend(extra)
		if ok and ph.top.cell in trial.cells:
			stage = trial
			steps.extend(trial_steps)
			continue
		fallbacks.append(ph.label)
		cell = ph.top.cell
		res = derive_auto(ambient, stage, cap, budget, goal=lambda s, c=cell: c in s.cells, allowed=U.closure([cell]), phase=ph.label)
		if res.derivation is None:
			raise DerivationError(f"phase {ph.label}: {res.verdict}")
		stage = res.final  # type: ignore[assignment]
		steps.extend(res.derivation.steps)
	stage, extra = decoration_closure(ambient, stage, cap, "completion")
	steps.extend(extra)
	if stage != Stage.of(ambient):
		fallbacks.append("completion")
		res = derive_auto(ambient, stage, cap, budget, phase="completion")
		if res.derivation is None:
			raise DerivationError(f"completion: {res.verdict}")
		steps.extend(res.derivation.steps)
	meta = dict(meta)
	meta["fallbacks"] = fallbacks
	return Derivation(ambient, start, steps, cap, meta)


def _positions(verts: Sequence[Tuple[int, int]], wanted: Sequence[Tuple[int, int]]) -> List[int]:
	index = {v: l for l, v in enumerate(verts)}
	return [index[v] for v in wanted]


def nightmare_plan(n: int, m: int, P: ProductSSet, dual: bool = False) -> List[Phase]:
	"""One phase per Z-string; the dual plan walks the mirrored staircases."""
	N = n + m
	plan: List[Phase] = []
	for z in z_strings(n, m):
		verts = path_vertices(n, m, z)
		k = len(z.a)
		if k == 0:
			positions = [n]
			base = "A1"
		else:
			a = z.a + (n,)
			b = (0,) + z.b
			corners = [(a[r], b[r]) for r in range(k + 1)]
			positions = [p for p in _positions(verts, corners) if 0 < p < N]
			if z.a[0] == 0:
				positions = [0] + [p for p in positions if p != 0]
				base = "A3"
			else:
				base = "A1"
		if dual:
			verts = [(n - x, m - y) for x, y in reversed(verts)]
			positions = [N - p for p in positions]
			base = "A4" if base == "A3" else base
		top = _grid_simplex(P, [x for x, _ in verts], [y for _, y in verts])
		plan.append(Phase(f"z={z}", top, tuple(sorted(positions)), base))
	return plan


def prism_plan(n: int, P: ProductSSet) -> List[Phase]:
	plan: List[Phase] = []
	for k in range(n + 1):
		xs = [i if i <= k else i - 1 for i in range(n + 2)]
		ys = [0 if i <= k else 1 for i in range(n + 2)]
		top = _grid_simplex(P, xs, ys)
		if k + 1 <= n:
			plan.append(Phase(f"sigma_{k}", top, (k + 1,), "A1"))
		else:
			plan.append(Phase(f"sigma_{k}", top, (n + 1,), "A4"))
	return plan


SCRIPTED = ("indI", "indII", "nightmare", "dual-nightmare", "prism")


def derive_scripted(name: str, params: Mapping[str, object], cap: Optional[int] = None, budget: Optional[int] = None) -> Derivation:
	"""Build one of the filtrations from the proofs as a checked derivation."""
	from .pushout_product import pushout_product
	from .subcomplexes import lambda_vec

	cap = runtime.cap if cap is None else cap
	if name not in SCRIPTED:
		raise ParameterError(f"unknown scripted derivation {name!r}")
	try:
		if name in ("indI", "indII"):
			m = int(params["m"])  # type: ignore[arg-type]
			positions = tuple(int(i) for i in params["positions"])  # type: ignore[union-attr]
		elif name == "prism":
			n = int(params["n"])  # type: ignore[arg-type]
		else:
			n, m = int(params["n"]), int(params["m"])  # type: ignore[arg-type]
	except (KeyError, TypeError, ValueError):
		raise ParameterError(f"missing or malformed parameters for {name}: {dict(params)}") from None
	meta: Dict[str, object] = {"strategy": f"scripted:{name}", "params": dict(params)}
	if name in ("indI", "indII"):
		if (name == "indII") != (0 in positions):
			raise ParameterError(f"{name} {'needs' if name == 'indII' else 'excludes'} the index 0")
		sub, inc = lambda_vec(m, positions, cap)
		ambient = inc.target
		top = SimplexRef(ambient.under.cells(m)[0])
		plan = [Phase(f"{name}{list(positions)}", top, positions, "A3" if name == "indII" else "A1")]
		return run_plan(ambient, Stage.image(inc), plan, cap, budget, meta)
	if name == "prism":
		if n < 0:
			raise ParameterError(f"prism needs n >= 0, got {n}")
		inst = pushout_product(GeneratorId("C1", (n,)), GeneratorId("A5"), cap)
		P = inst.target.under
		if n == 0:
			top = SimplexRef(P.cells(1)[0])
			gen = generator(GeneratorId("A5"), cap)
			attach = gen.attach_from_top(P, top)
			steps = [Step.make(gen.id, attach or {}, "sigma_0")]
			return Derivation(inst.target, inst.start, steps, cap, dict(meta, fallbacks=[]))
		return run_plan(inst.target, inst.start, prism_plan(n, P), cap, budget, meta)  # type: ignore[arg-type]
	if n < 1 or m < 2:
		raise ParameterError(f"{name} needs n >= 1 and m >= 2, got ({n}, {m})")
	dual = name == "dual-nightmare"
	anodyne = GeneratorId("A4" if dual else "A3", (m,))
	inst = pushout_product(GeneratorId("C1", (n,)), anodyne, cap)
	plan = nightmare_plan(n, m, inst.target.under, dual=dual)  # type: ignore[arg-type]
	return run_plan(inst.target, inst.start, plan, cap, budget, meta)
