"""Fibration analysis over a base: coCartesian triangles, p-Cartesian edges and the six conditions.

Every quantifier over horn dimensions stops at the analysis cap, so every verdict
here holds up to that cap only.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple, Union

from ..errors import ParameterError
from ..state import runtime
from .decor import DecoratedMap, MBSSet, flat
from .lifting import FibrationReport, Verdict, classify_fibration, fill_horn, has_rlp, horn_problems, mapping_ref, mapping_space_map
from .search import BudgetExhausted, SearchStats, new_stats
from .sset import FiniteSSet, SimplexRef, point, simplex_label, terminal


logger = logging.getLogger(__name__)

Cell = Union[str, SimplexRef]


class Answer(str, Enum):
	YES = "yes"
	NO = "no"
	BUDGET = "budget-exhausted"
	UNDETERMINED = "undetermined"


@dataclass
class AnalysisVerdict:
	answer: Answer
	cap: int
	witness: Optional[Dict[str, object]] = None
	reason: str = ""

	@property
	def yes(self) -> bool:
		return self.answer == Answer.YES

	def to_dict(self) -> Dict[str, object]:
		out: Dict[str, object] = {"answer": self.answer.value, "up_to_cap": self.cap}
		if self.witness is not None:
			out["witness"] = self.witness
		if self.reason:
			out["reason"] = self.reason
		return out


def _ref(c: Cell) -> SimplexRef:
	return SimplexRef(c) if isinstance(c, str) else c


def _cap(p: DecoratedMap, cap: Optional[int]) -> int:
	cap = runtime.analysis_cap if cap is None else cap
	return min(cap, p.source.under.cap)


def _square(n: int, top: Dict[str, SimplexRef], bottom: Dict[str, SimplexRef]) -> Dict[str, object]:
	return {
		"n": n,
		"top": {c: r.label() for c, r in sorted(top.items())},
		"bottom": {c: r.label() for c, r in sorted(bottom.items())},
	}


def is_left_degenerate(X: FiniteSSet, sigma: SimplexRef) -> bool:
	return X.face(sigma, 2).degenerate


def left_degeneration(X: MBSSet, sigma: Cell, cap: Optional[int] = None) -> Optional[Tuple[SimplexRef, SimplexRef]]:
	"""A left-degenerate triangle tau with a 3-cell eta relating it to sigma.

	eta has d3 = s0(d2 sigma), d2 = tau, d1 = sigma and a thin d0. Returns None when
	no such 3-cell exists up to the cap.
	"""
	U = X.under
	sigma = _ref(sigma)
	if U.ref_dim(sigma) != 2:
		raise ParameterError(f"{sigma.label()} is not a triangle")
	if is_left_degenerate(U, sigma):
		return sigma, U.degeneracy(sigma, 1)
	cap = U.cap if cap is None else min(cap, U.cap)
	if cap < 3:
		return None
	back = U.degeneracy(U.face(sigma, 2), 0)
	for eta in U.simplices(3):
		if U.face(eta, 1) != sigma or U.face(eta, 3) != back:
			continue
		if not X.is_thin(U.face(eta, 0)):
			continue
		return U.face(eta, 2), eta
	return None


def is_cocartesian_triangle(
	p: DecoratedMap,
	sigma: Cell,
	cap: Optional[int] = None,
	budget: Optional[int] = None,
	stats: Optional[SearchStats] = None,
) -> AnalysisVerdict:
	"""Every Lambda^n_0 problem whose {0,1,n} face is the left-degeneration of sigma has a solution."""
	cap = _cap(p, cap)
	U = p.source.under
	sigma = _ref(sigma)
	if U.ref_dim(sigma) != 2:
		raise ParameterError(f"{sigma.label()} is not a triangle")
	if sigma.degenerate:
		return AnalysisVerdict(Answer.YES, cap, reason="degenerate")
	found = left_degeneration(p.source, sigma, cap)
	if found is None:
		return AnalysisVerdict(Answer.UNDETERMINED, cap, reason="no left-degeneration up to the cap")
	tau = found[0]
	stats = stats or new_stats(budget)
	try:
		for n in range(3, cap + 1):
			for D, top, bottom in horn_problems(p, n, 0, {(0, 1, n): tau}, stats):
				if fill_horn(p, D, top, bottom, stats) is None:
					return AnalysisVerdict(Answer.NO, cap, _square(n, top, bottom))
	except BudgetExhausted:
		return AnalysisVerdict(Answer.BUDGET, cap)
	return AnalysisVerdict(Answer.YES, cap)


def is_p_cartesian_edge(
	p: DecoratedMap,
	e: Cell,
	mode: str = "plain",
	cap: Optional[int] = None,
	budget: Optional[int] = None,
	cocartesian: Optional[FrozenSet[str]] = None,
	stats: Optional[SearchStats] = None,
) -> AnalysisVerdict:
	"""Lambda^n_n problems with last edge e and a thin (plain) or coCartesian (strong) {0,n-1,n} face.

	At n = 2 that face is the filler; in plain mode it must be thin only where the base
	triangle under it is thin, since a decorated filler over anything else never is.
	"""
	if mode not in ("plain", "strong"):
		raise ParameterError(f"unknown mode {mode!r}; use plain or strong")
	cap = _cap(p, cap)
	X = p.source
	e = _ref(e)
	if X.under.ref_dim(e) != 1:
		raise ParameterError(f"{e.label()} is not an edge")
	if mode == "strong" and cocartesian is None:
		cocartesian = cocartesian_triangles(p, cap, budget)[0]

	def good(r: SimplexRef) -> bool:
		if mode == "plain":
			return X.is_thin(r)
		return r.degenerate or r.cell in cocartesian  # type: ignore[operator]

	def settles(r: SimplexRef) -> bool:
		if mode == "plain" and not p.target.is_thin(p.image(r)):
			return True
		return good(r)

	stats = stats or new_stats(budget)
	try:
		for n in range(2, cap + 1):
			tri = simplex_label((0, n - 1, n))
			if n == 2:
				problems = horn_problems(p, 2, 2, {(1, 2): e}, stats)
			else:
				problems = horn_problems(p, n, n, {(n - 1, n): e}, stats, top_accept=lambda c, r, t=tri: c != t or good(r))
			for D, top, bottom in problems:
				accept = (lambda c, r, t=tri: c != t or settles(r)) if n == 2 else None
				if fill_horn(p, D, top, bottom, stats, accept) is None:
					return AnalysisVerdict(Answer.NO, cap, _square(n, top, bottom))
	except BudgetExhausted:
		return AnalysisVerdict(Answer.BUDGET, cap)
	return AnalysisVerdict(Answer.YES, cap)


def is_cocartesian_in_mapping_space(
	p: DecoratedMap,
	sigma: Cell,
	cap: Optional[int] = None,
	budget: Optional[int] = None,
) -> AnalysisVerdict:
	"""Whether sigma is a coCartesian edge of X(a, b) over S(pa, pb)."""
	cap = _cap(p, cap)
	U = p.source.under
	sigma = _ref(sigma)
	if U.ref_dim(sigma) != 2:
		raise ParameterError(f"{sigma.label()} is not a triangle")
	if sigma.degenerate:
		return AnalysisVerdict(Answer.YES, cap, reason="degenerate")
	found = left_degeneration(p.source, sigma, cap)
	if found is None:
		return AnalysisVerdict(Answer.UNDETERMINED, cap, reason="no left-degeneration up to the cap")
	tau = found[0]
	verts = U.vertices(tau)
	src, dst, m = mapping_space_map(p, verts[0], verts[2], cap)
	q = DecoratedMap(m, flat(src.space), flat(dst.space))
	edge = mapping_ref(U, tau, src)
	stats = new_stats(budget)
	try:
		for k in range(2, src.space.cap + 1):
			for D, top, bottom in horn_problems(q, k, 0, {(0, 1): edge}, stats):
				if fill_horn(q, D, top, bottom, stats) is None:
					return AnalysisVerdict(Answer.NO, cap, _square(k, top, bottom))
	except BudgetExhausted:
		return AnalysisVerdict(Answer.BUDGET, cap)
	return AnalysisVerdict(Answer.YES, cap)


def _sweep(cells: List[str], test: Callable[[str], AnalysisVerdict]) -> Tuple[FrozenSet[str], FrozenSet[str], FrozenSet[str]]:
	yes, no, unknown = set(), set(), set()
	for c in cells:
		answer = test(c).answer
		if answer == Answer.YES:
			yes.add(c)
		elif answer == Answer.NO:
			no.add(c)
		else:
			unknown.add(c)
	return frozenset(yes), frozenset(no), frozenset(unknown)


def cocartesian_triangles(p: DecoratedMap, cap: Optional[int] = None, budget: Optional[int] = None) -> Tuple[FrozenSet[str], FrozenSet[str], FrozenSet[str]]:
	"""(coCartesian, not coCartesian, undecided) among the nondegenerate triangles."""
	return _sweep(p.source.under.cells(2), lambda c: is_cocartesian_triangle(p, c, cap, budget))


def cartesian_edges(
	p: DecoratedMap,
	mode: str = "plain",
	cap: Optional[int] = None,
	budget: Optional[int] = None,
	cocartesian: Optional[FrozenSet[str]] = None,
) -> Tuple[FrozenSet[str], FrozenSet[str], FrozenSet[str]]:
	return _sweep(p.source.under.cells(1), lambda c: is_p_cartesian_edge(p, c, mode, cap, budget, cocartesian))


# -- profile --------------------------------------------------------------------

@dataclass
class ConditionRecord:
	name: str
	verdict: str  # pass | fail | inconclusive
	witnesses: List[str] = field(default_factory=list)

	def to_dict(self) -> Dict[str, object]:
		return {"name": self.name, "verdict": self.verdict, "witnesses": list(self.witnesses)}


def _record(name: str, failures: List[str], unknown: Optional[List[str]] = None) -> ConditionRecord:
	if failures:
		return ConditionRecord(name, "fail", sorted(failures))
	if unknown:
		return ConditionRecord(name, "inconclusive", sorted(unknown))
	return ConditionRecord(name, "pass")


def _combine(verdicts: List[str]) -> str:
	if "fail" in verdicts:
		return "fail"
	return "inconclusive" if "inconclusive" in verdicts else "pass"


CONDITIONS = (
	"weak-S fibration",
	"left-degenerate coCartesian triangles are lean",
	"lean triangles compose",
	"marked edges are the p-Cartesian edges",
	"p-Cartesian lifts of marked base edges",
	"coCartesian lifts of left-degenerate base triangles",
)


@dataclass(eq=False)
class FibrationProfile:
	p: DecoratedMap
	cap: int
	cocartesian: FrozenSet[str]
	cartesian: FrozenSet[str]
	undecided: FrozenSet[str] = frozenset()
	conditions: List[ConditionRecord] = field(default_factory=list)
	flags: Dict[str, str] = field(default_factory=dict)
	base: Optional[FibrationReport] = None

	@property
	def verdict(self) -> str:
		return _combine([r.verdict for r in self.conditions])

	def condition(self, name: str) -> ConditionRecord:
		for r in self.conditions:
			if r.name == name:
				return r
		raise KeyError(name)

	def to_dict(self) -> Dict[str, object]:
		out: Dict[str, object] = {
			"source": self.p.source.name,
			"base": self.p.target.name,
			"up_to_cap": self.cap,
			"verdict": self.verdict,
			"cocartesian": sorted(self.cocartesian),
			"cartesian": sorted(self.cartesian),
			"undecided": sorted(self.undecided),
			"flags": dict(self.flags),
			"conditions": [r.to_dict() for r in self.conditions],
		}
		if self.base is not None:
			out["base_fibrancy"] = self.base.to_dict()
		return out


def over_marked(p: DecoratedMap, edges: FrozenSet[str]) -> FrozenSet[str]:
	"""The edges among `edges` that lie over marked edges of the base (all of them over a sharp base)."""
	return frozenset(e for e in edges if p.target.is_marked(p.image(SimplexRef(e))))


def _lifts_of_edges(p: DecoratedMap, cartesian: FrozenSet[str]) -> List[str]:
	X, S = p.source.under, p.target.under
	missing = []
	for f in sorted(p.target.marked):
		t = S.face(SimplexRef(f), 0).cell
		for x in X.cells(0):
			if p.image(SimplexRef(x)).cell != t:
				continue
			if not any(
				p.image(SimplexRef(e)) == SimplexRef(f) and X.face(SimplexRef(e), 0).cell == x and e in cartesian
				for e in X.cells(1)
			):
				missing.append(f"{f} over {x}")
	return missing


def _lifts_of_triangles(p: DecoratedMap, cocartesian: FrozenSet[str]) -> List[str]:
	X, S = p.source.under, p.target.under
	missing = []
	for b in S.cells(2):
		beta = SimplexRef(b)
		if not is_left_degenerate(S, beta):
			continue
		h = S.face(beta, 1)
		for e in X.simplices(1):
			if p.image(e) != h:
				continue
			if not any(
				X.face(s, 1) == e and is_left_degenerate(X, s) and p.image(s) == beta and (s.degenerate or s.cell in cocartesian)
				for s in X.simplices(2)
			):
				missing.append(f"{b} from {e.label()}")
	return missing


def _composition_stability(X: MBSSet, cocartesian: FrozenSet[str]) -> List[str]:
	"""3-cells with a thin d0 whose faces d1, d2, d3 hold two members but not the third."""
	U = X.under

	def member(r: SimplexRef) -> bool:
		return r.degenerate or r.cell in cocartesian

	bad = []
	for c in U.cells(3):
		eta = SimplexRef(c)
		if not X.is_thin(U.face(eta, 0)):
			continue
		faces = {i: U.face(eta, i) for i in (1, 2, 3)}
		for i in (1, 2):
			others = [faces[j] for j in (1, 2, 3) if j != i]
			if all(member(r) for r in others) and not member(faces[i]):
				bad.append(f"{c}: d{i}")
	return bad


def _conditions(
	p: DecoratedMap,
	cap: int,
	budget: Optional[int],
	cocartesian: FrozenSet[str],
	cartesian: FrozenSet[str],
	undecided_tri: FrozenSet[str],
	undecided_edges: FrozenSet[str],
) -> List[ConditionRecord]:
	X = p.source
	U = X.under
	records: List[ConditionRecord] = []
	undecided_tri = frozenset(c for c in undecided_tri if is_left_degenerate(U, SimplexRef(c)))
	cartesian = over_marked(p, cartesian)
	undecided_edges = over_marked(p, undecided_edges)

	weak = classify_fibration(p, "weak-S", cap, budget)
	records.append(ConditionRecord(CONDITIONS[0], weak.verdict, [weak.failing_generator] if weak.failing_generator else []))

	not_lean = [c for c in cocartesian if is_left_degenerate(U, SimplexRef(c)) and c not in X.lean]
	records.append(_record(CONDITIONS[1], not_lean, sorted(undecided_tri)))

	fails, unknown = [], []
	for gid in ("S3:1", "S3:2", "S4", "S5"):
		res = has_rlp(p, gid, budget=budget, cap=cap)
		if res.verdict == Verdict.NO_LIFT:
			fails.append(gid)
		elif res.verdict == Verdict.BUDGET:
			unknown.append(gid)
	records.append(_record(CONDITIONS[2], fails, unknown))

	marked = set(X.marked)
	diff = sorted((marked - cartesian) - undecided_edges) + sorted((cartesian - marked))
	records.append(_record(CONDITIONS[3], diff, sorted(undecided_edges)))

	records.append(_record(CONDITIONS[4], _lifts_of_edges(p, cartesian), sorted(undecided_edges)))
	records.append(_record(CONDITIONS[5], _lifts_of_triangles(p, cocartesian), sorted(undecided_tri)))
	return records


def six_conditions(p: DecoratedMap, cap: Optional[int] = None, budget: Optional[int] = None) -> List[ConditionRecord]:
	cap = _cap(p, cap)
	C, _, C_unknown = cocartesian_triangles(p, cap, budget)
	E, _, E_unknown = cartesian_edges(p, "plain", cap, budget)
	return _conditions(p, cap, budget, C, E, C_unknown, E_unknown)


def check_family(p: DecoratedMap, cap: Optional[int] = None, budget: Optional[int] = None, with_base: bool = True) -> FibrationProfile:
	"""Compute the coCartesian triangles and p-Cartesian edges of p and evaluate every condition."""
	cap = _cap(p, cap)
	C, _, C_unknown = cocartesian_triangles(p, cap, budget)
	E, _, E_unknown = cartesian_edges(p, "plain", cap, budget)
	records = _conditions(p, cap, budget, C, E, C_unknown, E_unknown)
	profile = FibrationProfile(p, cap, C, E, C_unknown | E_unknown, records)

	by_name = {r.name: r.verdict for r in records}
	locally = _combine([records[0].verdict, records[5].verdict])
	stable = _composition_stability(p.source, C)
	profile.flags["locally-fibred"] = locally
	profile.flags["functorial"] = "fail" if stable else ("inconclusive" if C_unknown else "pass")
	degenerate_ok = []
	for v in p.source.under.cells(0):
		res = is_p_cartesian_edge(p, p.source.under.degeneracy(SimplexRef(v), 0), "strong", cap, budget, C)
		degenerate_ok.append("pass" if res.yes else ("fail" if res.answer == Answer.NO else "inconclusive"))
	o2 = _combine([locally] + degenerate_ok)
	profile.flags["O2"] = o2
	profile.flags["O2C"] = _combine([o2, by_name[CONDITIONS[4]]])

	if with_base:
		base = p.target
		pt = point(base.under.cap)
		profile.base = classify_fibration(DecoratedMap(terminal(base.under, pt), base, flat(pt)), "weak-S", cap, budget)
	logger.info("profile of %s over %s up to cap %d: %s", p.source.name, p.target.name, cap, profile.verdict)
	return profile


def agreement(p: DecoratedMap, cap: Optional[int] = None, budget: Optional[int] = None) -> Dict[str, str]:
	"""The profile verdict next to the MB generator sweep."""
	profile = check_family(p, cap, budget, with_base=False)
	report = classify_fibration(p, "MB", profile.cap, budget)
	return {"profile": profile.verdict, "lifting": report.verdict}


def cocartesian_agreement(p: DecoratedMap, cap: Optional[int] = None, budget: Optional[int] = None) -> Dict[str, Tuple[str, str]]:
	"""Direct and mapping-space coCartesian verdicts for each left-degenerate triangle."""
	U = p.source.under
	out: Dict[str, Tuple[str, str]] = {}
	for c in U.cells(2):
		if not is_left_degenerate(U, SimplexRef(c)):
			continue
		direct = is_cocartesian_triangle(p, c, cap, budget).answer.value
		via = is_cocartesian_in_mapping_space(p, c, cap, budget).answer.value
		out[c] = (direct, via)
	return out

