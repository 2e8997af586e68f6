"""perfectoid-lab command line: Witt arithmetic, tilting, A-ring actions,
descent, and the verification suites, all over JSON on stdin/stdout.

Exit codes: 0 pass, 1 check failure, 2 usage/config/schema error.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from .aring import a_gamma, a_phi, split_lift
from .descent import cc_descent, pgm_validate, random_gauge_module
from .errors import PerfectoidError, SchemaError
from .perfseries import FieldContext
from .rationals import format_rational
from .serialize import (
    aseries_from_json,
    aseries_to_json,
    context_from_params,
    descent_report_to_json,
    module_from_json,
    module_to_json,
    parse_gamma,
    perfseries_to_json,
    wittvec_from_json,
    wittvec_to_json,
)
from .suites import Config, run_suite
from .symstrict import carry_tables
from .tilting import (
    preset_primitive,
    primitive_check,
    stable_reduce,
    untilt_add,
    untilt_class,
    untilt_inv,
    untilt_mul,
    untilt_norm,
    untilt_one,
    untilt_root,
)
from .wittcore import gauss_norm, w_add, w_frobenius, w_inv, w_mul

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2


def _load_config(args):
    data = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    cfg = Config.from_json(data)
    for field in ("p", "N", "seed"):
        val = getattr(args, field.lower() if field != "N" else "prec", None)
        if val is not None:
            if field == "p":
                cfg = Config.from_json({**cfg.to_json(), "p": val})
            elif field == "N":
                cfg = Config.from_json({**cfg.to_json(), "N": val})
            else:
                cfg = Config.from_json({**cfg.to_json(), "seed": val})
    if getattr(args, "cache_dir", None):
        os.environ["PERFECTOID_CACHE_DIR"] = args.cache_dir
    return cfg


def _read_json_stdin():
    try:
        return json.load(sys.stdin)
    except json.JSONDecodeError as exc:
        raise SchemaError("stdin", f"invalid JSON: {exc}") from None


def _emit(data):
    json.dump(data, sys.stdout, sort_keys=True, indent=1)
    sys.stdout.write("\n")


# -- witt -------------------------------------------------------------------

def cmd_witt(args):
    if args.witt_cmd == "table":
        table = carry_tables(args.p, args.prec)
        payload = table.to_json()
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, sort_keys=True, indent=1)
        else:
            _emit(payload)
        return EXIT_PASS
    data = _read_json_stdin()
    if args.witt_cmd in ("add", "mul"):
        if not isinstance(data, list) or len(data) != 2:
            raise SchemaError("stdin", "expected a JSON array [x, y]")
        x = wittvec_from_json(data[0], "x")
        y = wittvec_from_json(data[1], "y")
        out = w_add(x, y) if args.witt_cmd == "add" else w_mul(x, y)
        _emit(wittvec_to_json(out))
    elif args.witt_cmd == "inv":
        x = wittvec_from_json(data, "x")
        _emit(wittvec_to_json(w_inv(x)))
    elif args.witt_cmd == "frob":
        x = wittvec_from_json(data, "x")
        _emit(wittvec_to_json(w_frobenius(x, args.k)))
    elif args.witt_cmd == "norm":
        x = wittvec_from_json(data, "x")
        g = gauss_norm(x, Fraction(args.r))
        _emit({"r": format_rational(g.r), "neg_log_norm": format_rational(g.value),
               "truncated": g.truncated})
    return EXIT_PASS


# -- tilt -------------------------------------------------------------------

def _primitive_from_args(args, cfg):
    ctx = cfg.context(args.preset)
    return preset_primitive(args.preset, ctx, cfg.n)


def cmd_tilt(args):
    cfg = _load_config(args)
    if args.tilt_cmd == "primitive":
        prim = _primitive_from_args(args, cfg)
        _emit({"preset": prim.kind, "z": wittvec_to_json(prim.z)})
        return EXIT_PASS
    if args.tilt_cmd == "reduce":
        prim = _primitive_from_args(args, cfg)
        x = wittvec_from_json(_read_json_stdin(), "x")
        _emit(wittvec_to_json(stable_reduce(x, prim)))
        return EXIT_PASS
    if args.tilt_cmd == "arith":
        prim = _primitive_from_args(args, cfg)
        data = _read_json_stdin()
        if args.op == "inv":
            a = untilt_class(prim, wittvec_from_json(data, "x"))
            out = untilt_inv(a)
        else:
            if not isinstance(data, list) or len(data) != 2:
                raise SchemaError("stdin", "expected a JSON array [x, y]")
            a = untilt_class(prim, wittvec_from_json(data[0], "x"))
            b = untilt_class(prim, wittvec_from_json(data[1], "y"))
            out = untilt_add(a, b) if args.op == "add" else untilt_mul(a, b)
        nv = untilt_norm(out)
        _emit({"rep": wittvec_to_json(out.rep),
               "neg_log_norm": format_rational(nv.neg_log_norm),
               "norm_is_lower_bound": nv.lower_bound})
        return EXIT_PASS
    if args.tilt_cmd == "root":
        with open(args.poly, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        preset = data.get("preset", args.preset)
        cfg2 = Config.from_json({**cfg.to_json(), "preset": preset})
        prim = preset_primitive(preset, cfg2.context(preset), cfg2.n)
        coeffs = [untilt_class(prim, wittvec_from_json(c, f"coeffs[{i}]"))
                  for i, c in enumerate(data["coeffs"])]
        res = untilt_root(coeffs, args.steps)
        _emit({
            "root": wittvec_to_json(res.root.rep),
            "exact": res.exact,
            "steps": [{
                "index": s.index,
                "residual_neg_log": format_rational(s.residual_neg_log),
                "step_neg_log": format_rational(s.step_neg_log),
                "required_residual": format_rational(s.required_residual),
                "required_step": format_rational(s.required_step),
            } for s in res.steps],
        })
        return EXIT_PASS
    raise SchemaError("tilt", f"unknown subcommand {args.tilt_cmd!r}")


# -- aring --------------------------------------------------------------------

def cmd_aring(args):
    cfg = _load_config(args)
    if args.aring_cmd in ("phi", "gamma"):
        x = aseries_from_json(_read_json_stdin(), "x")
        if args.aring_cmd == "phi":
            out = a_phi(x)
        else:
            gamma = parse_gamma(args.gamma, x.p)
            out = a_gamma(x, gamma, hi=args.hi)
        _emit(aseries_to_json(out))
        return EXIT_PASS
    if args.aring_cmd == "split":
        with open(args.infile, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        x = wittvec_from_json(data, "x")
        gamma = parse_gamma(args.gamma, x.ctx.p)
        res = split_lift(x, gamma)
        _emit({
            "y": aseries_to_json(res.y),
            "z": {format_rational(e): aseries_to_json(v)
                  for e, v in sorted(res.z.items())},
            "window": format_rational(res.window),
            "residual_ok": res.residual_ok,
        })
        return EXIT_PASS
    raise SchemaError("aring", f"unknown subcommand {args.aring_cmd!r}")


# -- descend ------------------------------------------------------------------

def cmd_descend(args):
    cfg = _load_config(args)
    if args.descend_cmd == "gen":
        ctx = cfg.context("cyclotomic")
        module, v, base = random_gauge_module(args.seed, args.d, ctx, cfg.n)
        _emit(module_to_json(module))
        return EXIT_PASS
    with open(args.infile, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    module = module_from_json(data)
    if module.layer.name == "W":
        ctx = module.layer.ctx
        # precision budget: refuse configurations whose guaranteed loss
        # exceeds the window (each digit costs roughly one pi-power per
        # p-adic level plus the inversion margin)
        need = 4 * module.layer.n
        if ctx.prec_default < need:
            print(f"precision budget too small: need e_max >= {need} and a "
                  f"window of at least {need} columns at N = {module.layer.n}",
                  file=sys.stderr)
            return EXIT_USAGE
    report = cc_descent(module)
    payload = descent_report_to_json(report)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
    else:
        _emit(payload)
    return EXIT_PASS if report.ok() else EXIT_CHECK_FAILURE


# -- verify -------------------------------------------------------------------

def cmd_verify(args):
    cfg = _load_config(args)
    def progress(row):
        status = "PASS" if row["passed"] else "FAIL"
        print(f"{status} {row['suite']}.{row['check']} ({row['cases']} cases)",
              file=sys.stderr)
    report = run_suite(args.suite, cfg, progress=progress)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, sort_keys=True, indent=1)
    else:
        _emit(report)
    return EXIT_PASS if report["passed"] else EXIT_CHECK_FAILURE


# -- parser -------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="perfectoid-lab",
        description="exact arithmetic for truncated Witt vectors, tilting, "
                    "and overconvergent descent")
    ap.add_argument("--config", help="JSON config file")
    ap.add_argument("--cache-dir", dest="cache_dir",
                    help="carry-table cache directory "
                         "(or env PERFECTOID_CACHE_DIR)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    witt = sub.add_parser("witt", help="Witt vector arithmetic")
    wsub = witt.add_subparsers(dest="witt_cmd", required=True)
    wt = wsub.add_parser("table", help="build/cache carry tables")
    wt.add_argument("--p", type=int, required=True)
    wt.add_argument("--prec", type=int, required=True, help="p-adic length N")
    wt.add_argument("--out")
    for name in ("add", "mul", "inv"):
        ws = wsub.add_parser(name)
        ws.add_argument("--p", type=int)
        ws.add_argument("--prec", type=int)
    wf = wsub.add_parser("frob")
    wf.add_argument("--k", type=int, default=1)
    wf.add_argument("--p", type=int)
    wf.add_argument("--prec", type=int)
    wn = wsub.add_parser("norm")
    wn.add_argument("--r", required=True, help="radius (rational, e.g. 1/2)")
    wn.add_argument("--p", type=int)
    wn.add_argument("--prec", type=int)

    tilt = sub.add_parser("tilt", help="untilting machinery")
    tsub = tilt.add_subparsers(dest="tilt_cmd", required=True)
    tp = tsub.add_parser("primitive")
    tr = tsub.add_parser("reduce")
    ta = tsub.add_parser("arith")
    ta.add_argument("--op", choices=("add", "mul", "inv"), required=True)
    tro = tsub.add_parser("root")
    tro.add_argument("--poly", required=True, help="polynomial JSON file")
    tro.add_argument("--steps", type=int, required=True)
    for sp in (tp, tr, ta, tro):
        sp.add_argument("--preset", choices=("cyclotomic", "kummer"),
                        default="cyclotomic")
        sp.add_argument("--config")

    aring = sub.add_parser("aring", help="imperfect period ring actions")
    asub = aring.add_subparsers(dest="aring_cmd", required=True)
    aph = asub.add_parser("phi")
    aga = asub.add_parser("gamma")
    aga.add_argument("--gamma", required=True, help='e.g. "1+p^2" or "5"')
    aga.add_argument("--hi", type=int, help="window bound for negative powers")
    asp = asub.add_parser("split")
    asp.add_argument("--gamma", required=True)
    asp.add_argument("--in", dest="infile", required=True)
    for sp in (aph, aga, asp):
        sp.add_argument("--config")

    desc = sub.add_parser("descend", help="overconvergent descent")
    desc.add_argument("--in", dest="infile")
    desc.add_argument("--N", dest="prec", type=int)
    desc.add_argument("--report")
    desc.add_argument("--config")
    dsub = desc.add_subparsers(dest="descend_cmd")
    dgen = dsub.add_parser("gen", help="generate a seeded gauged module")
    dgen.add_argument("--seed", type=int, required=True)
    dgen.add_argument("--d", type=int, default=1)
    dgen.add_argument("--config")

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("suite",
                     choices=("witt", "norms", "tilt", "gamma", "descent",
                              "all"))
    ver.add_argument("--config")
    ver.add_argument("--seed", type=int)
    ver.add_argument("--report")
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.cmd == "witt":
            return cmd_witt(args)
        if args.cmd == "tilt":
            return cmd_tilt(args)
        if args.cmd == "aring":
            return cmd_aring(args)
        if args.cmd == "descend":
            if getattr(args, "descend_cmd", None) == "gen":
                return cmd_descend(args)
            if not getattr(args, "infile", None):
                ap.error("descend requires --in MODULE.json (or the gen "
                         "subcommand)")
            return cmd_descend(args)
        if args.cmd == "verify":
            return cmd_verify(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PerfectoidError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILURE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
