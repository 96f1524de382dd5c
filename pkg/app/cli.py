"""Command-line surface: gen, lift, rlp, derive, verify, pp, analyze, info.

Exit codes: 0 verified or pass, 1 refuted or fail, 2 inconclusive (budget or cap),
3 input error.
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

from .config import get_settings
from .errors import MBError
from .state import runtime


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3


class ArgumentError(MBError):
	pass


class Parser(argparse.ArgumentParser):
	def error(self, message: str) -> None:  # type: ignore[override]
		raise ArgumentError(message)


def _emit(payload: Dict[str, Any], lines: List[str], out: Optional[str] = None) -> None:
	from .services.documents import dumps

	if runtime.output_format == "machine":
		data = dumps(payload)
	else:
		data = ("\n".join(lines) + "\n").encode()
	if out:
		with open(out, "wb") as fh:
			fh.write(data)
		return
	sys.stdout.buffer.write(data)
	sys.stdout.flush()


def _positions(raw: Optional[str]) -> List[int]:
	if not raw:
		return []
	try:
		return [int(p) for p in raw.split(",") if p.strip()]
	except ValueError:
		raise ArgumentError(f"positions must be comma separated integers, got {raw!r}") from None


def _map_arg(args: argparse.Namespace):
	"""The map named by --doc/--map, or a fixture."""
	from .services.documents import load
	from .services.fixtures import fixture

	if getattr(args, "fixture", None):
		return fixture(args.fixture, runtime.cap).p
	if not args.doc or not args.map:
		raise ArgumentError("give --fixture, or a document with --map")
	return load(args.doc).map(args.map)


# -- commands -------------------------------------------------------------------

def cmd_gen(args: argparse.Namespace) -> int:
	from .services.generators import FAMILY_ORDER, generator, list_generators
	from .services.documents import object_to_dict

	if args.list:
		families = FAMILY_ORDER if args.list == "all" else [args.list]
		ids = [str(g) for fam in families for g in list_generators(fam, args.max_n, runtime.cap)]
		_emit({"generators": ids}, ids)
		return EXIT_OK
	if not args.id:
		raise ArgumentError("give a generator id or --list FAMILY")
	gen = generator(args.id, runtime.cap)
	src, tgt = gen.source, gen.target
	payload = {
		"id": str(gen.id),
		"source": object_to_dict(src),
		"target": object_to_dict(tgt),
		"new_cells": gen.new_cells,
	}
	lines = [
		f"{gen.id}",
		f"  source census {src.under.census()}  marked {sorted(src.marked)}  thin {sorted(src.thin)}  lean {sorted(src.lean)}",
		f"  target census {tgt.under.census()}  marked {sorted(tgt.marked)}  thin {sorted(tgt.thin)}  lean {sorted(tgt.lean)}",
		f"  new cells {gen.new_cells}",
	]
	_emit(payload, lines, args.out)
	return EXIT_OK


def _verdict_exit(verdict: str) -> int:
	return {
		"lifts": EXIT_OK, "pass": EXIT_OK, "verified": EXIT_OK, "isomorphism": EXIT_OK, "derived": EXIT_OK, "yes": EXIT_OK,
		"no-lift": EXIT_REFUTED, "fail": EXIT_REFUTED, "failed": EXIT_REFUTED, "no-derivation": EXIT_REFUTED, "no": EXIT_REFUTED,
	}.get(verdict, EXIT_INCONCLUSIVE)


def cmd_lift(args: argparse.Namespace) -> int:
	from .services.documents import load
	from .services.lifting import LiftSquare, solve_lift
	from .services.search import new_stats

	doc = load(args.doc)
	square = LiftSquare(doc.map(args.j), doc.map(args.p), doc.map(args.top), doc.map(args.bottom))
	report = solve_lift(square, new_stats(runtime.budget))
	lines = [f"lift: {report.verdict.value}"]
	if report.witness is not None:
		lines.extend(f"  {c} -> {r.label()}" for c, r in sorted(report.witness.map.assignment.items()))
	_emit(report.to_dict(), lines, args.out)
	return _verdict_exit(report.verdict.value)


def cmd_rlp(args: argparse.Namespace) -> int:
	from .services.lifting import classify_fibration, has_rlp

	p = _map_arg(args)
	if args.generator:
		res = has_rlp(p, args.generator, runtime.budget, runtime.cap)
		_emit(res.to_dict(), [f"{args.generator}: {res.verdict.value}"], args.out)
		return _verdict_exit(res.verdict.value)
	report = classify_fibration(p, args.cls, runtime.cap, runtime.budget)
	lines = [f"{args.cls} up to cap {runtime.cap}: {report.verdict}"]
	if report.failing_generator:
		lines.append(f"  refuted by {report.failing_generator}")
	_emit(report.to_dict(), lines, args.out)
	return _verdict_exit(report.verdict)


def cmd_derive(args: argparse.Namespace) -> int:
	from .services.derivation import Stage, derive_auto, derive_scripted, verify
	from .services.documents import emit_certificate, load

	if args.scripted:
		params: Dict[str, Any] = {}
		for key in ("n", "m"):
			if getattr(args, key) is not None:
				params[key] = getattr(args, key)
		if args.positions:
			params["positions"] = _positions(args.positions)
		d = derive_scripted(args.scripted, params, runtime.cap, runtime.budget)
		verdict = "derived"
	else:
		if args.pp:
			from .services.pushout_product import pushout_product

			inst = pushout_product(args.pp[0], args.pp[1], runtime.cap)
			ambient, start = inst.target, inst.start
		elif args.doc and args.map:
			j = load(args.doc).map(args.map)
			if not j.is_mono():
				raise ArgumentError(f"{args.map} is not a monomorphism")
			ambient, start = j.target, Stage.image(j)
		else:
			raise ArgumentError("give --scripted NAME, --pp COF ANO, or a document with --map")
		res = derive_auto(ambient, start, runtime.cap, runtime.budget)
		verdict = res.verdict
		if res.derivation is None:
			_emit({"verdict": verdict, "stats": res.stats.to_dict()}, [f"derive: {verdict} after {res.stats.nodes} nodes"])
			return _verdict_exit(verdict)
		d = res.derivation
	check = verify(d)
	if not check.ok:
		_emit({"verdict": "failed", "verify": check.to_dict()}, [f"derive: produced derivation fails at step {check.failing_step}: {check.reason}"])
		return EXIT_REFUTED
	if args.out:
		with open(args.out, "wb") as fh:
			fh.write(emit_certificate(d))
	phases = d.phases()
	payload = {"verdict": verdict, "steps": len(d.steps), "phases": phases, "meta": d.meta, "out": args.out}
	lines = [f"derive: {verdict} in {len(d.steps)} steps, {len(phases)} cell phases"]
	if args.out:
		lines.append(f"  certificate written to {args.out}")
	_emit(payload, lines)
	return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
	from .services.derivation import verify
	from .services.documents import load_certificate

	d = load_certificate(args.certificate)
	result = verify(d)
	if result.ok:
		lines = [f"verify: ok, {len(d.steps)} steps"]
	else:
		lines = [f"verify: failed at step {result.failing_step}: {result.reason}"]
	_emit(dict(result.to_dict(), steps=len(d.steps)), lines, args.out)
	return EXIT_OK if result.ok else EXIT_REFUTED


def cmd_pp(args: argparse.Namespace) -> int:
	from .services.pushout_product import load_manifest, run_table, verify_case

	if args.table:
		path = get_settings().get_manifest_path(args.manifest)
		table = run_table(load_manifest(str(path)), runtime.budget, runtime.workers)
		lines = [f"{r.key:<24} {r.verdict:<12} {r.strategy}" for r in table.cases]
		pairs = table.pairs()
		lines.append(f"{sum(1 for v in pairs.values() if v == 'verified')}/{len(pairs)} family pairs verified: {table.verdict}")
		_emit(table.to_dict(), lines, args.out)
		return _verdict_exit(table.verdict)
	if not args.case or len(args.case) != 2:
		raise ArgumentError("give COFIBRATION ANODYNE, or --table")
	report = verify_case(args.case[0], args.case[1], runtime.cap, runtime.budget)
	lines = [f"{report.key}: {report.verdict} via {report.strategy} ({report.steps} steps)"]
	if report.reason:
		lines.append(f"  {report.reason}")
	_emit(report.to_dict(), lines, args.out)
	return _verdict_exit(report.verdict)


def cmd_analyze(args: argparse.Namespace) -> int:
	from .services import analyze

	p = _map_arg(args)
	cap = args.analysis_cap or runtime.analysis_cap
	if args.triangle:
		v = analyze.is_cocartesian_triangle(p, args.triangle, cap, runtime.budget)
		_emit(v.to_dict(), [f"{args.triangle} coCartesian up to cap {v.cap}: {v.answer.value}"], args.out)
		return _verdict_exit(v.answer.value)
	if args.edge:
		v = analyze.is_p_cartesian_edge(p, args.edge, args.mode, cap, runtime.budget)
		_emit(v.to_dict(), [f"{args.edge} {args.mode} p-Cartesian up to cap {v.cap}: {v.answer.value}"], args.out)
		return _verdict_exit(v.answer.value)
	profile = analyze.check_family(p, cap, runtime.budget)
	lines = [f"profile up to cap {profile.cap}: {profile.verdict}"]
	lines.extend(f"  [{r.verdict}] {r.name}" + (f": {', '.join(r.witnesses[:5])}" if r.witnesses else "") for r in profile.conditions)
	lines.extend(f"  {k}: {v}" for k, v in profile.flags.items())
	_emit(profile.to_dict(), lines, args.out)
	return _verdict_exit(profile.verdict)


def cmd_info(args: argparse.Namespace) -> int:
	from .services.documents import load
	from .services.generators import generator

	if args.generator:
		objects = {"source": generator(args.generator, runtime.cap).source, "target": generator(args.generator, runtime.cap).target}
	elif args.doc:
		doc = load(args.doc)
		objects = dict(doc.objects)
		if args.object:
			objects = {args.object: doc.object(args.object)}
	else:
		raise ArgumentError("give a document or --generator")
	payload = {
		name: {
			"census": X.under.census(),
			"truncated": X.under.truncated,
			"marked": len(X.marked),
			"thin": len(X.thin),
			"lean": len(X.lean),
		}
		for name, X in objects.items()
	}
	lines = [f"{name}: census {v['census']}, marked {v['marked']}, thin {v['thin']}, lean {v['lean']}" for name, v in payload.items()]
	_emit(payload, lines, args.out)
	return EXIT_OK


# -- wiring ---------------------------------------------------------------------

def build_parser() -> Parser:
	common = Parser(add_help=False)
	common.add_argument("--cap", type=int)
	common.add_argument("--budget", type=int)
	common.add_argument("--strict", action="store_true", default=None)
	common.add_argument("--format", choices=("text", "machine"))
	common.add_argument("--workers", type=int)
	common.add_argument("--out")

	parser = Parser(prog="mbset", description="finite checks for marked biscaled simplicial sets")
	sub = parser.add_subparsers(dest="command", parser_class=Parser)

	p = sub.add_parser("gen", parents=[common], help="instantiate or list generators")
	p.add_argument("id", nargs="?")
	p.add_argument("--list", metavar="FAMILY")
	p.add_argument("--max-n", type=int, dest="max_n")
	p.set_defaults(func=cmd_gen)

	p = sub.add_parser("lift", parents=[common], help="solve one lifting square from a document")
	p.add_argument("doc")
	p.add_argument("--j", required=True)
	p.add_argument("--p", required=True)
	p.add_argument("--top", required=True)
	p.add_argument("--bottom", required=True)
	p.set_defaults(func=cmd_lift)

	p = sub.add_parser("rlp", parents=[common], help="sweep a generator class against a map")
	p.add_argument("doc", nargs="?")
	p.add_argument("--map")
	p.add_argument("--fixture")
	p.add_argument("--class", dest="cls", default="MB", choices=("MB", "weak-S", "trivial"))
	p.add_argument("--generator")
	p.set_defaults(func=cmd_rlp)

	p = sub.add_parser("derive", parents=[common], help="find a derivation and write its certificate")
	p.add_argument("doc", nargs="?")
	p.add_argument("--map")
	p.add_argument("--scripted")
	p.add_argument("--pp", nargs=2, metavar=("COFIBRATION", "ANODYNE"))
	p.add_argument("--n", type=int)
	p.add_argument("--m", type=int)
	p.add_argument("--positions")
	p.set_defaults(func=cmd_derive)

	p = sub.add_parser("verify", parents=[common], help="check a certificate")
	p.add_argument("certificate")
	p.set_defaults(func=cmd_verify)

	p = sub.add_parser("pp", parents=[common], help="pushout-product cases")
	p.add_argument("case", nargs="*")
	p.add_argument("--table", action="store_true")
	p.add_argument("--manifest", "--max-params", dest="manifest")
	p.set_defaults(func=cmd_pp)

	p = sub.add_parser("analyze", parents=[common], help="fibration profile")
	p.add_argument("doc", nargs="?")
	p.add_argument("--map")
	p.add_argument("--fixture")
	p.add_argument("--triangle")
	p.add_argument("--edge")
	p.add_argument("--mode", default="plain", choices=("plain", "strong"))
	p.add_argument("--analysis-cap", type=int, dest="analysis_cap")
	p.set_defaults(func=cmd_analyze)

	p = sub.add_parser("info", parents=[common], help="cell census")
	p.add_argument("doc", nargs="?")
	p.add_argument("--object")
	p.add_argument("--generator")
	p.set_defaults(func=cmd_info)
	return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
	settings = get_settings()
	logging.basicConfig(stream=sys.stderr, level=getattr(logging, settings.log_level.upper(), logging.INFO), format="%(levelname)s %(name)s: %(message)s")
	runtime.reset_from_settings(settings)
	try:
		args = build_parser().parse_args(argv)
		if not getattr(args, "func", None):
			raise ArgumentError("missing command")
		runtime.set_from_dict({
			"cap": args.cap,
			"budget": args.budget,
			"strict": args.strict,
			"format": args.format,
			"workers": args.workers,
		})
		return args.func(args)
	except MBError as e:
		print(f"error: {e}", file=sys.stderr)
		return EXIT_INPUT
	except OSError as e:
		print(f"error: {e}", file=sys.stderr)
		return EXIT_INPUT


if __name__ == "__main__":
	sys.exit(main())
