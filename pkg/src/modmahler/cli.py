"""Command line interface: verify cases and inspect the individual stages."""

import argparse
import json
import re
import sys
from fractions import Fraction

from .cases import case_info, list_cases, load_case
from .eis import char_by_label, newform_coeffs, E3Spec, E3_qexp
from .exactq import parse_poly
from .lfun import fricke_sign, lambda_cusp, lambda_cusp_quad, lambda_eis_reg
from .mahler import TorusQuadrature, mahler_measure, mahler_montecarlo
from .modsym import boundary, cusp_str, manin_decompose, parse_weight_poly, phi_pullback
from .pipeline import DEFAULT_GRID, DEFAULT_LEVELS, PipelineAbort, modular_side, symbol_data, verify_case
from .siegel import eval_at_cusp, ord_at_cusp, parse_unit


def _parse_e3(text):
    m = re.match(r"^\s*E3\[([^,\]]+),([^,\]]+)(?:,(\d+))?\]\s*$", text)
    if not m:
        raise ValueError("expected E3[phi,psi,t], got %r" % text)
    return E3Spec(char_by_label(m.group(1)), char_by_label(m.group(2)), int(m.group(3) or 1))


def cmd_verify(args):
    names = list_cases() if args.case == "all" else [args.case]
    reports, aborted = [], []
    for name in names:
        try:
            rep = verify_case(name, args.tol, args.grid, args.levels, args.order)
        except PipelineAbort as e:
            aborted.append((name, e))
            if args.json:
                print(json.dumps({"case": name, "aborted": e.stage, "message": e.message}))
            else:
                print("case %s aborted at stage '%s': %s" % (name, e.stage, e.message))
            continue
        reports.append(rep)
        print(rep.dumps() if args.json else rep.summary())
        if not args.json:
            print()
    if args.report:
        from .report import write_report
        for p in write_report(reports, aborted, args.report):
            print("wrote %s" % p, file=sys.stderr)
    ok = not aborted and reports and all(r.passed for r in reports)
    return 0 if ok else 1


def cmd_cases(args):
    for name in list_cases():
        info = case_info(name)
        if args.json:
            print(json.dumps(info))
        else:
            print("%-7s %-45s %s" % (name, info["polynomial"], info["expected"]))
    return 0


def cmd_mahler(args):
    P = parse_poly(args.poly)
    var = "XYZ".index(args.var) if args.var else None
    est = mahler_measure(P, TorusQuadrature(args.grid, args.levels), var)
    out = {"quadrature": est}
    if args.mc:
        out["montecarlo"] = mahler_montecarlo(P, args.mc, args.seed)
    for k, e in out.items():
        if args.json:
            print(json.dumps({"method": k, "value": e.value, "error": e.error, "nodes": e.nodes,
                              "seconds": e.seconds, "near_unit": e.near_unit}))
        else:
            print("%-10s %s" % (k, e))
    return 0


def cmd_lvalue(args):
    if args.form:
        f = newform_coeffs(args.form)
        eps, _ = fricke_sign(f)
        v = lambda_cusp(f, args.s, eps=eps)
        check = lambda_cusp_quad(f, args.s)
        res = {"form": args.form, "s": args.s, "fricke_sign": eps, "value": v,
               "error": abs(v - check), "error_note": "difference from direct quadrature"}
        if args.json:
            print(json.dumps(res))
        else:
            print("Lambda(%s, %g) = %.15f  (Fricke sign %+d, |series - quadrature| = %.1e)"
                  % (args.form, args.s, v, eps, res["error"]))
        return 0
    combo = []
    for item in args.eis:
        c, _, lab = item.partition("*") if "*" in item else ("1", "", item)
        combo.append((c, _parse_e3(lab)))
    ev = lambda_eis_reg([(Fraction(c), sp) for c, sp in combo])
    if args.json:
        print(json.dumps({"exact": {k: str(v) for k, v in ev.exact.items()}, "other": ev.other,
                          "value": ev.value(), "numeric": ev.numeric, "error": ev.certificate}))
    else:
        print("Lambda*(%s, 0) = %s" % (" + ".join(args.eis), ev))
        print("           = %.15f  (independent numeric %.15f, difference %.1e)"
              % (ev.value(), ev.numeric, ev.certificate))
    return 0


def cmd_qexp(args):
    if args.unit:
        s = parse_unit(args.unit).qexp(args.order)
    elif args.form:
        s = newform_coeffs(args.form).qexp(args.order)
    elif args.eis:
        s = E3_qexp(_parse_e3(args.eis), args.order)
    elif args.case:
        ident, _, _ = modular_side(load_case(args.case), None)
        print("F(tau/%d) = %s" % (ident.rescale, ident))
        print(" + ".join("%s*q^%d" % (c, n) for n, c in enumerate(ident.series[:args.order]) if c))
        return 0
    else:
        raise SystemExit("qexp needs one of --unit, --form, --eis, --case")
    print(s)
    return 0


def cmd_decompose(args):
    P = parse_weight_poly(args.poly)
    terms = manin_decompose(P, args.alpha, args.beta, use_sigma=not args.keep_y)
    if args.json:
        print(json.dumps([t.to_json() for t in terms]))
    else:
        print("%s{%s,%s} =" % (args.poly, args.alpha, args.beta))
        for t in terms:
            print("  %s" % t)
        bd = boundary(terms)
        print("boundary: %s" % ", ".join("%s: (%s)X + (%s)Y" % (cusp_str(c), m, n) for c, (m, n) in sorted(bd.items())))
    if args.case:
        _, _, base, N = symbol_data(load_case(args.case))
        print("phi = %s" % phi_pullback(base, terms, N))
    return 0


def cmd_siegel(args):
    F = parse_unit(args.unit)
    for cp in args.cusp:
        val = eval_at_cusp(F, cp)
        ordv = ord_at_cusp(F, cp)
        num = "" if isinstance(val, str) else "  ~ %s" % complex(val)
        print("cusp %-5s order %-6s value %s%s" % (cp, ordv, val, num))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="modmahler", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("verify", help="verify a registered case (or a case file, or 'all')")
    p.add_argument("case")
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.add_argument("--levels", type=int, default=DEFAULT_LEVELS)
    p.add_argument("--order", type=int, default=None, help="q-expansion coefficients (default: Sturm bound)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--report", metavar="DIR", help="write TSV tables and PNG figures to DIR")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cases", help="list registered cases")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cases)

    p = sub.add_parser("mahler", help="numerical Mahler measure")
    p.add_argument("--poly", required=True)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.add_argument("--levels", type=int, default=DEFAULT_LEVELS)
    p.add_argument("--var", choices=["X", "Y", "Z"])
    p.add_argument("--mc", type=int, default=0, help="also run a Monte Carlo estimate with this many samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_mahler)

    p = sub.add_parser("lvalue", help="completed L-values")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--form", help="stored newform label, e.g. f8")
    g.add_argument("--eis", nargs="+", help="terms like '2*E3[chi4,1,1]'")
    p.add_argument("--s", type=float, default=3.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_lvalue)

    p = sub.add_parser("qexp", help="q-expansions")
    p.add_argument("--unit")
    p.add_argument("--form")
    p.add_argument("--eis")
    p.add_argument("--case")
    p.add_argument("--order", type=int, default=12)
    p.set_defaults(func=cmd_qexp)

    p = sub.add_parser("decompose", help="Manin decomposition of P{alpha,beta}")
    p.add_argument("--poly", default="Y")
    p.add_argument("--alpha", default="1/2")
    p.add_argument("--beta", default="oo")
    p.add_argument("--keep-y", action="store_true", help="keep g_*Y{0,oo} terms instead of rewriting them")
    p.add_argument("--case", help="also pull back the symbol data of this case")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("siegel", help="values and orders of a unit at cusps")
    p.add_argument("--unit", required=True)
    p.add_argument("--cusp", nargs="+", default=["oo"])
    p.set_defaults(func=cmd_siegel)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
