"""Command line front end.

Results go to standard output as JSON (``--format json``, the default) or
plain text.  Exact rationals print as ``"p/q"``, floats with 17 significant
digits.  Exit codes: 0 success, 1 a verification found failures, 2 bad
input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from initial_integrals import instances as ins
from initial_integrals import universal as uni
from initial_integrals.dyadic import DyadicStep, LevelError, max_level
from initial_integrals.errors import AxiomViolation
from initial_integrals.exact import GaussianRational, format_float, scalar_to_json
from initial_integrals.measures import axioms as ax
from initial_integrals.measures import spaces as sp
from initial_integrals.measures import targets as tg
from initial_integrals.sequences import FiniteSeq, SeqTarget, seq_universal

SCHEMA = "initial-integrals/run-report/1"


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# value encoding


def encode(x):
    """JSON-ready form: exact scalars as strings, floats at 17 digits."""
    if isinstance(x, (Fraction, GaussianRational)):
        return scalar_to_json(x)
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format_float(x)
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return str(x)


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return pad + " ".join(str(v) for v in obj)
        return "\n".join(_text(v, indent) for v in obj)
    return f"{pad}{obj}"


def emit(args, payload, out=None):
    out = out or sys.stdout
    if getattr(args, "format", "json") == "text":
        out.write(_text(payload) + "\n")
    else:
        out.write(json.dumps(payload, indent=2, sort_keys=False) + "\n")


# ---------------------------------------------------------------------------
# loading


def load_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e


def _parse(kind, path, builder):
    data = load_json(path)
    try:
        return builder(data)
    except KeyError as e:
        raise InputError(f"{path}: {kind} is missing field {e.args[0]!r}") from e
    except (TypeError, ValueError, ZeroDivisionError) as e:
        if isinstance(e, (AxiomViolation, LevelError)):
            raise
        raise InputError(f"{path}: invalid {kind}: {e}") from e


def load_step(path) -> DyadicStep:
    def build(d):
        if isinstance(d, list):
            return DyadicStep.from_coeffs(d)
        return DyadicStep.from_json(d)
    return _parse("step", path, build)


def load_target(path) -> uni.AlgebraTarget:
    return _parse("target", path, uni.AlgebraTarget.from_json)


def load_measure_target(path) -> tg.FunctorTarget:
    def build(d):
        kind = d["kind"]
        p = d.get("p", 1)
        if kind == "scalar":
            return tg.ScalarTarget(p)
        if kind == "simple":
            return tg.SimpleFunctionTarget(p, full=bool(d.get("full", True)))
        if kind == "measure":
            return tg.MeasureTarget()
        if kind == "hilbert":
            return tg.HilbertTarget(d["gram"], d["e"], name=d.get("name", "hilbert"))
        if kind == "doubled":
            return tg.DoubledTarget(p)
        if kind == "truncated-mass":
            return tg.TruncatedMassTarget()
        raise ValueError(f"unknown target kind {kind!r}")
    return _parse("measure target", path, build)


# ---------------------------------------------------------------------------
# commands


def cmd_compile(args):
    target = load_target(args.target)
    table = uni.compile_theta(target, args.max_level)
    payload = table.to_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
        emit(args, {"command": "compile", "output": args.output, "max_level": str(args.max_level),
                    "certificate": _cert(target.certificate)})
    else:
        emit(args, payload)
    return 0


def _cert(c):
    if c is None:
        return None
    return {"method": c.method, "estimate": encode(c.estimate), "samples": str(c.samples)}


def cmd_apply(args):
    table = _parse("table", args.table, uni.MorphismTable.from_json)
    f = load_step(args.step)
    emit(args, {"command": "apply", "result": encode(uni.apply_universal(table, f))})
    return 0


def cmd_verify(args):
    table = _parse("table", args.table, uni.MorphismTable.from_json)
    rep = uni.verify_morphism(table, samples=args.samples, seed=args.seed)
    emit(args, {"command": "verify", "seed": str(args.seed), "report": rep.to_json()})
    return 0 if rep.ok else 1


def cmd_integrate(args):
    f = load_step(args.step)
    emit(args, {"command": "integrate", "result": encode(ins.integrate(f))})
    return 0


def cmd_indefinite(args):
    F = ins.indefinite_integral(load_step(args.step))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(F.to_json(), fh)
    emit(args, {"command": "indefinite", "result": F.to_json()})
    return 0


def cmd_pair(args):
    f, g = load_step(args.f), load_step(args.g)
    if not ins.conjugate_ok(args.p, args.q):
        raise InputError("non-conjugate exponents")
    value = ins.pairing(f, g, args.p, args.q)
    emit(args, {"command": "pair", "result": encode(value),
                "holder_bound": encode(ins.holder_bound(f, g, args.p, args.q))})
    return 0


def cmd_cantor_project(args):
    def build(d):
        if isinstance(d, list):
            return ins.CylinderFunction.from_coeffs(d)
        return ins.CylinderFunction.from_json(d)
    f = _parse("cylinder function", args.f, build)
    if args.bits < 0:
        raise InputError("--bits must be non-negative")
    emit(args, {"command": "cantor-project", "result": ins.cantor_project(f, args.bits).to_json()})
    return 0


def cmd_seq_apply(args):
    target = _parse("sequence target", args.target, SeqTarget.from_json)
    a = _parse("sequence", args.seq, lambda d: FiniteSeq.from_json({"coeffs": d} if isinstance(d, list) else d))
    emit(args, {"command": "seq-apply", "result": encode(seq_universal(target, a))})
    return 0


def _load_simple(path):
    return _parse("simple function", path, sp.SimpleFn.from_json)


def cmd_measure(args):
    sub = args.measure_command
    if sub == "integrate":
        f = _load_simple(args.f)
        emit(args, {"command": "measure integrate", "result": encode(sp.integrate_measure(f))})
        return 0
    if sub == "density":
        f = _load_simple(args.f)
        emit(args, {"command": "measure density", "result": sp.density_measure(f).to_json()})
        return 0
    if sub == "psi":
        target = load_measure_target(args.target)
        f = _load_simple(args.f)
        emit(args, {"command": "measure psi", "target": target.name, "result": encode(ax.psi(target, f))})
        return 0
    if sub == "verify":
        targets = _category_targets(args.category, args.p, args.seed)
        if args.target:
            targets = [load_measure_target(args.target)]
        reports = [ax.verify_axioms(t, args.trials, args.seed, strict=args.strict).to_json() for t in targets]
        ok = all(r["ok"] for r in reports)
        emit(args, {"command": "measure verify", "category": args.category, "seed": str(args.seed),
                    "ok": ok, "reports": reports})
        return 0 if ok else 1
    raise InputError(f"unknown measure command {sub!r}")


def _category_targets(category, p, seed):
    from initial_integrals.generators import rng_for

    if category == "Bemb":
        return [tg.SimpleFunctionTarget(p, full=False), tg.MeasureTarget()]
    if category == "B":
        return [tg.SimpleFunctionTarget(p), tg.ScalarTarget(1)]
    if category == "H":
        return [tg.SimpleFunctionTarget(2), tg.HilbertTarget.random(rng_for(seed))]
    raise InputError(f"unknown category {category!r}")


def cmd_verify_all(args):
    from initial_integrals import suites

    names = sorted(suites.SUITES)
    if args.only:
        unknown = set(args.only) - set(names)
        if unknown:
            raise InputError(f"unknown suites: {sorted(unknown)}")
        names = sorted(args.only)
    seeds = suites.suite_seeds(args.seed, names)
    warnings = []
    if args.trials == 0:
        warnings.append("trials=0: sampled checks are vacuous")
    t0 = time.perf_counter()
    results = {}
    if args.workers > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            futs = {n: pool.submit(suites.run_suite, n, seeds[n], args.trials) for n in names}
            results = {n: f.result() for n, f in futs.items()}
    else:
        results = {n: suites.run_suite(n, seeds[n], args.trials) for n in names}
    for path in args.extra_target or []:
        results[f"extra-target:{path}"] = _gate_report(path)
    elapsed = time.perf_counter() - t0
    ordered = [dict(results[k], suite=k, seed=str(seeds.get(k, args.seed))) for k in sorted(results)]
    passed = sum(sum(r["passed"].values()) for r in ordered)
    failed = sum(sum(r["failed"].values()) for r in ordered)
    report = {
        "schema": SCHEMA,
        "command": ["verify-all", "--seed", str(args.seed), "--trials", str(args.trials)],
        "seed": str(args.seed),
        "trials": str(args.trials),
        "ok": failed == 0,
        "counts": {"passed": str(passed), "failed": str(failed)},
        "warnings": warnings,
        "suites": ordered,
    }
    if args.timing:
        report["timing"] = {"seconds": format_float(elapsed)}
    text = _verify_all_text(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
        with open(args.output.rsplit(".", 1)[0] + ".txt", "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.format == "text":
        sys.stdout.write(text)
    else:
        emit(args, report)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0 if report["ok"] else 1


def _gate_report(path):
    """Construction gate for a user target: passes iff the target is accepted."""
    rep = uni.CheckReport(f"extra-target:{path}")
    try:
        load_target(path)
        rep.record("construction-gate", True)
    except AxiomViolation as e:
        rep.record("construction-gate", False, {"axiom": e.axiom, "message": str(e), "witness": encode(e.witness)})
    return rep.to_json()


def _verify_all_text(report) -> str:
    lines = [f"verify-all seed={report['seed']} trials={report['trials']}"]
    for r in report["suites"]:
        status = "PASS" if r["ok"] else "FAIL"
        n_ok = sum(r["passed"].values())
        n_bad = sum(r["failed"].values())
        lines.append(f"{status} {r['suite']} ({n_ok} passed, {n_bad} failed)")
        for k, v in r["failed"].items():
            if v:
                lines.append(f"    failed invariant: {k} x{v}")
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    lines.append("ALL PASS" if report["ok"] else "FAILURES FOUND")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")

    ap = argparse.ArgumentParser(prog="initial-integrals",
                                 description="Exact dyadic integration and universal-map verification.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", parents=[common], help="compile the unique map into a target")
    p.add_argument("--target", required=True)
    p.add_argument("--max-level", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("apply", parents=[common], help="apply a compiled table to a step")
    p.add_argument("--table", required=True)
    p.add_argument("--step", required=True)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("verify", parents=[common], help="randomized checks of a compiled table")
    p.add_argument("--table", required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("integrate", parents=[common], help="integral of a step over [0, 1]")
    p.add_argument("step")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("indefinite", parents=[common], help="indefinite integral of a step")
    p.add_argument("step")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_indefinite)

    p = sub.add_parser("pair", parents=[common], help="integral of f g for conjugate exponents")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("cantor-project", parents=[common], help="f o pi_n on Cantor space")
    p.add_argument("f")
    p.add_argument("--bits", type=int, required=True)
    p.set_defaults(func=cmd_cantor_project)

    p = sub.add_parser("seq-apply", parents=[common], help="unique map on a finite sequence")
    p.add_argument("--target", required=True)
    p.add_argument("--seq", required=True)
    p.set_defaults(func=cmd_seq_apply)

    p = sub.add_parser("measure", help="finite measure spaces")
    msub = p.add_subparsers(dest="measure_command", required=True)
    q = msub.add_parser("integrate", parents=[common])
    q.add_argument("f")
    q = msub.add_parser("density", parents=[common])
    q.add_argument("f")
    q = msub.add_parser("psi", parents=[common])
    q.add_argument("--target", required=True)
    q.add_argument("f")
    q = msub.add_parser("verify", parents=[common])
    q.add_argument("--category", choices=("Bemb", "B", "H"), default="B")
    q.add_argument("--trials", type=int, default=200)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--p", default="1")
    q.add_argument("--target", help="verify this target instead of the category defaults")
    q.add_argument("--strict", action="store_true", help="also demand equality in (III) and (IV)")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("verify-all", parents=[common], help="run every verification suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--only", nargs="*")
    p.add_argument("--extra-target", action="append", help="also gate-check this target JSON")
    p.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    p.add_argument("-o", "--output", help="write JSON report here and a .txt summary beside it")
    p.set_defaults(func=cmd_verify_all)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except AxiomViolation as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except LevelError as e:
        print(f"error: {e} (level cap {max_level()}, set INITIAL_INTEGRALS_MAX_LEVEL to change)", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
