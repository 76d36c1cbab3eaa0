"""Command-line front end; every command prints JSON (or CSV) on stdout."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .arith import element_to_json, to_rational
from .errors import TorsredError
from .families import FAMILY_ORDER, family_member
from .localization import (
    LocalContext,
    ValuationTriple,
    base_change,
    classify_triple,
    local_valuations,
    point_reduction,
)
from .sweep import SweepSpec, check_fixture, load_fixtures, run_sweep
from .theorems import (
    allowed_additive_types,
    l_function,
    potentially_supersingular,
    purely_additive_excluded,
    sorted_types,
    surface_feasibility_report,
    verify_bezout_certificate,
)
from .weierstrass import INFINITY, WeierstrassModel, point_order

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

RECORD_CSV_HEADER = ("type", "n", "vc4", "vc6", "vdelta", "u_valuation",
                     "component_group", "semistability_degree", "potentially_good")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _emit_csv(rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(["" if v is None else v for v in row])
    sys.stdout.write(buf.getvalue())


def _record_csv_row(rec: dict) -> tuple:
    vc4, vc6, vd = rec["triple"]
    return (rec["label"], rec["n"], vc4, vc6, vd, rec["u_valuation"], rec["component_group"],
            rec["semistability_degree"], str(rec["potentially_good"]).lower())


def _load_curve(path: str) -> WeierstrassModel:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    if isinstance(obj, dict) and "curve" in obj:
        obj = obj["curve"]
    return WeierstrassModel.from_json(obj)


def _parse_point(model: WeierstrassModel, text: str):
    if text.strip().lower() in ("infinity", "o", "inf"):
        return INFINITY
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--point expects X,Y, got {text!r}")
    return model.point(to_rational(parts[0]), to_rational(parts[1]))


def _triple(args) -> ValuationTriple:
    return ValuationTriple(args.vc4, args.vc6, int(args.vdelta))


# ---------------------------------------------------------------- commands

def cmd_invariants(args) -> int:
    model = _load_curve(args.curve)
    inv = model.invariants
    _emit({
        "curve": model.to_json(),
        **{k: element_to_json(v) for k, v in inv._asdict().items()},
    })
    return EXIT_PASS


def cmd_classify(args) -> int:
    model = _load_curve(args.curve)
    ctx = LocalContext(args.p, args.e)
    raw = local_valuations(model, ctx)
    rec = classify_triple(raw).to_json()
    if args.csv:
        _emit_csv([RECORD_CSV_HEADER, _record_csv_row(rec)])
    else:
        _emit({"p": ctx.p, "e": ctx.e, "raw_triple": raw.to_json(), **rec})
    return EXIT_PASS


def cmd_classify_triple(args) -> int:
    rec = classify_triple(_triple(args)).to_json()
    if args.csv:
        _emit_csv([RECORD_CSV_HEADER, _record_csv_row(rec)])
    else:
        _emit(rec)
    return EXIT_PASS


def cmd_basechange(args) -> int:
    start = classify_triple(_triple(args))
    result = base_change(start.minimal_triple, args.degree, args.p)
    if args.csv:
        _emit_csv([("degree", *RECORD_CSV_HEADER),
                   (1, *_record_csv_row(start.to_json())),
                   (args.degree, *_record_csv_row(result.to_json()))])
    else:
        _emit({"degree": args.degree, "p": args.p, "input": start.to_json(), "result": result.to_json()})
    return EXIT_PASS


def cmd_order(args) -> int:
    model = _load_curve(args.curve)
    P = _parse_point(model, args.point)
    order = point_order(model, P, args.max)
    _emit({"point": P.to_json(), "order": order if order is not None else "exceeds max",
           "max": args.max})
    return EXIT_PASS


def cmd_point_analysis(args) -> int:
    model = _load_curve(args.curve)
    e = 1 if model.field is None else 2
    ctx = LocalContext(args.p, e)
    P = _parse_point(model, args.point)
    _emit({"point": P.to_json(), "p": ctx.p, **point_reduction(model, ctx, P)})
    return EXIT_PASS


def cmd_family(args) -> int:
    fam = args.family
    if fam == "x1-5":
        if args.s is None or args.t is None:
            raise UsageError("x1-5 needs --s and --t")
        params = {"s": to_rational(args.s), "t": to_rational(args.t)}
    elif fam in ("x1-11", "x1-13"):
        if (args.t is None) == (args.n is None):
            raise UsageError(f"{fam} needs exactly one of --t or --n")
        t = to_rational(args.t) if args.t is not None else FAMILY_ORDER[fam] * args.n - 3
        params = {"t": t}
    else:
        if args.b is None or args.c is None:
            raise UsageError("tate-normal needs --b and --c")
        params = {"b": to_rational(args.b), "c": to_rational(args.c)}
    field, model = family_member(fam, **params)
    out = model.to_json()
    if field is not None:
        out["field"] = {**field.to_json(), "discriminant": element_to_json(field.discriminant)}
    else:
        out["field"] = {"kind": "rational"}
    provenance = {"family": fam, "params": {k: element_to_json(v) for k, v in params.items()}}
    if args.n is not None and fam in ("x1-11", "x1-13"):
        provenance["n"] = args.n
    out["provenance"] = provenance
    out["marked_point"] = {"x": "0", "y": "0"}
    _emit(out)
    return EXIT_PASS


def cmd_sweep(args) -> int:
    try:
        obj = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {args.spec}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.spec} is not valid JSON: {exc}") from exc
    if args.workers is not None:
        obj["workers"] = args.workers
    spec = SweepSpec.from_json(obj)
    if args.bound is not None:
        spec = spec.with_bound(args.bound)
    report = run_sweep(spec)
    if args.csv:
        _emit_csv(report.csv_rows())
    else:
        body = report.to_json()
        if args.summary:
            body.pop("rows")
        _emit(body)
    return report.exit_code


def cmd_allowed_types(args) -> int:
    _emit(sorted_types(allowed_additive_types(args.p, args.n, args.vkp)))
    return EXIT_PASS


def cmd_theorem1(args) -> int:
    _emit({"p": args.p, "vkp": args.vkp, "m": args.m,
           "purely_additive_excluded": purely_additive_excluded(args.p, args.vkp, args.m)})
    return EXIT_PASS


def cmd_surface_bound(args) -> int:
    _emit(surface_feasibility_report(args.p))
    return EXIT_PASS


def cmd_supersingular(args) -> int:
    result = potentially_supersingular(args.type, args.p)
    _emit({"type": args.type, "p": args.p,
           "potentially_supersingular": "indeterminate" if result is None else result})
    return EXIT_PASS


def cmd_lfunction(args) -> int:
    _emit({"x": args.x, "L": l_function(args.x)})
    return EXIT_PASS


def cmd_verify_claim_gcd(args) -> int:
    report = verify_bezout_certificate()
    _emit(report)
    return EXIT_PASS if report["verdict"] == "pass" else EXIT_FAIL


def cmd_fixtures(args) -> int:
    data = load_fixtures(args.path)
    if data is None:
        raise UsageError("fixture file not found")
    results = [check_fixture(entry) for entry in data["curves"]]
    _emit({"source": data.get("source"), "results": results})
    return EXIT_PASS if all(r["ok"] for r in results) else EXIT_FAIL


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="torsred", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def triple_args(p):
        p.add_argument("--vc4", required=True, help="v(c4), or 'inf' when c4 = 0")
        p.add_argument("--vc6", required=True, help="v(c6), or 'inf' when c6 = 0")
        p.add_argument("--vdelta", required=True, type=int)

    p = sub.add_parser("invariants", help="b- and c-invariants, discriminant, j")
    p.add_argument("curve")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("classify", help="Kodaira type of a curve at p")
    p.add_argument("curve")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("classify-triple", help="Kodaira type from (v(c4), v(c6), v(Delta))")
    triple_args(p)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_classify_triple)

    p = sub.add_parser("basechange", help="type after a tame totally ramified extension")
    triple_args(p)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_basechange)

    p = sub.add_parser("order", help="order of a point")
    p.add_argument("curve")
    p.add_argument("--point", required=True)
    p.add_argument("--max", type=int, default=200)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("point-analysis", help="reduction of a point at p")
    p.add_argument("curve")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_point_analysis)

    p = sub.add_parser("family", help="construct a family member")
    p.add_argument("family", choices=("x1-5", "x1-11", "x1-13", "tate-normal"))
    p.add_argument("--s")
    p.add_argument("--t")
    p.add_argument("--n", type=int)
    p.add_argument("--b")
    p.add_argument("--c")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("sweep", help="run a sweep spec and check its assertion")
    p.add_argument("spec")
    p.add_argument("--bound", type=int, help="override the upper end of every range")
    p.add_argument("--workers", type=int)
    p.add_argument("--summary", action="store_true", help="omit per-row output")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("allowed-types", help="additive types allowed with a point of order p^n")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--vkp", type=int, required=True)
    p.set_defaults(func=cmd_allowed_types)

    p = sub.add_parser("theorem1", help="is purely additive reduction excluded")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--vkp", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_theorem1)

    p = sub.add_parser("surface-bound", help="abelian-surface case split at v(p) = 1")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_surface_bound)

    p = sub.add_parser("supersingular", help="potential supersingularity from the type")
    p.add_argument("--type", required=True)
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_supersingular)

    p = sub.add_parser("lfunction", help="the L(x) degree function")
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(func=cmd_lfunction)

    p = sub.add_parser("verify-claim-gcd", help="recompute the c4/c6 Bezout certificate")
    p.set_defaults(func=cmd_verify_claim_gcd)

    p = sub.add_parser("fixtures", help="check the vendored database curves")
    p.add_argument("--path")
    p.set_defaults(func=cmd_fixtures)
    return parser


def _join_point_values(argv: list[str]) -> list[str]:
    """Glue ``--point X,Y`` so argparse does not read a negative X as an option."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--point":
            value = next(it, None)
            out.append(tok if value is None else f"--point={value}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_join_point_values(argv))
        return args.func(args)
    except UsageError as exc:
        _emit({"error": {"kind": "usage", "message": str(exc)}})
        return EXIT_USAGE
    except TorsredError as exc:
        _emit({"error": {"kind": exc.kind, "message": str(exc)}})
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
