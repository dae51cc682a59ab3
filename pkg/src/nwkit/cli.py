"""Command-line entry point: ``nwkit <subcommand> ...``.

Every report is a JSON object (or a CSV table for the tabular subcommands)
carrying a ``manifest`` with the parameters that determine it.  Wall time is
left out unless ``--timing`` is given so that equal manifests give
byte-identical output.  Exit codes: 0 success, 1 domain error (structured
JSON on stdout), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from flint import acb, arb

from . import __version__, balls
from .errors import NWError, ParseError
from .poly import SparsePoly, parse_poly
from .series import Indeterminate

SUBCOMMANDS = ("qexp", "derive", "siegel", "auxpoly", "zeroscan", "eval", "transform",
               "philippon", "liouville", "periods", "prop47", "hyper5", "selftest")


class UsageError(Exception):
    pass


# -- serialization -----------------------------------------------------------------

def to_jsonable(x, bits: int):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (arb, acb)):
        return balls.ball_json(x, bits)
    if isinstance(x, SparsePoly):
        return x.to_str()
    if isinstance(x, Indeterminate):
        return str(x)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v, bits) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v, bits) for v in x]
    if hasattr(x, "to_json"):
        return to_jsonable(x.to_json(), bits)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def dump_csv(rows: list[dict], manifest: dict) -> str:
    buf = io.StringIO()
    buf.write("# manifest: " + json.dumps(manifest, sort_keys=True) + "\n")
    if rows:
        cols = list(rows[0].keys())
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: _csv_cell(r.get(k)) for k in cols})
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, dict) and "mid" in v:
        return v["mid"]
    if isinstance(v, dict) and "re" in v:
        return f"{v['re']['mid']}+{v['im']['mid']}j"
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return v


# -- argument helpers --------------------------------------------------------------

def _int_list(text: str) -> list[int]:
    """'3', '1,2,5' or '1-4'."""
    try:
        if "-" in text.strip().lstrip("-") and "," not in text:
            a, b = text.split("-", 1)
            return list(range(int(a), int(b) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"expected an integer list, got {text!r}") from exc


def _complex(text: str) -> acb:
    try:
        return balls.parse_complex(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"expected 're,im' with decimal or p/q parts, got {text!r}") from exc


def _complex_exact(text: str) -> tuple[Fraction, Fraction]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        parts.append("0")
    try:
        return Fraction(parts[0]), Fraction(parts[1])
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"expected 're,im' with decimal or p/q parts, got {text!r}") from exc


def _ball_at(re_im: tuple[Fraction, Fraction], bits: int) -> acb:
    with balls.workprec(bits + 40):
        return acb(balls.exact(re_im[0]), balls.exact(re_im[1]))


# -- subcommands -------------------------------------------------------------------

def cmd_qexp(args) -> dict:
    from .eisenstein import delta_series, eisenstein_series, j_series

    N = args.terms
    if N < 0:
        raise UsageError("--terms must be >= 0")
    w = args.weight
    if w in ("2", "4", "6"):
        s = eisenstein_series(int(w), N)
    elif w == "delta":
        s = delta_series(N)
    elif w == "j":
        jl = j_series(N + 2)
        exps = list(range(-jl.pole_order, N + 1))
        coeffs = [jl.coeff(e) for e in exps]
        if args.format == "text":
            return {"_text": f"N={N}\npole={jl.pole_order}\n" + "".join(
                f"{e} {c.numerator}/{c.denominator}\n" for e, c in zip(exps, coeffs))}
        return {"series": "j", "terms": N, "pole_order": jl.pole_order,
                "first_exponent": exps[0], "coefficients": coeffs}
    else:
        raise UsageError("--weight must be one of 2, 4, 6, delta, j")
    if args.format == "text":
        return {"_text": s.dumps()}
    return {"series": w if w in ("delta",) else f"E{w}", "terms": N, "coefficients": list(s.coeffs)}


def _load_field(spec: str):
    from .derivations import Derivation, ramanujan_v, ramanujan_w
    from .poly import default_names

    if spec == "v":
        return ramanujan_v()
    if spec == "w":
        return ramanujan_w()
    if spec.startswith("custom:"):
        path = Path(spec[len("custom:"):])
        try:
            lines = [ln.split("#", 1)[0].strip() for ln in path.read_text().splitlines()]
        except OSError as exc:
            raise ParseError(f"cannot read field file: {exc}") from exc
        lines = [ln for ln in lines if ln]
        n = len(lines)
        if n == 0:
            raise ParseError("field file has no components")
        names = default_names(n)
        return Derivation(tuple(parse_poly(ln, n, names) for ln in lines), names)
    raise UsageError("--field must be v, w or custom:<file>")


def cmd_derive(args) -> dict:
    from .derivations import apply, darboux_search, invariance_check, iterated_wk
    from .poly import default_names

    D = _load_field(args.field)
    names = D.names or default_names(D.nvars)
    out: dict = {"field": D.to_str(), "nvars": D.nvars}
    if args.apply:
        P = parse_poly(args.apply, D.nvars, names)
        out["P"] = P.to_str(names)
        if args.iterate is not None:
            if args.field == "w":
                img = iterated_wk(P, args.iterate, D)
                out["operator"] = f"w^[{args.iterate}]"
            else:
                img = P
                for _ in range(args.iterate):
                    img = apply(D, img)
                out["operator"] = f"D^{args.iterate}"
        else:
            img = apply(D, P)
            out["operator"] = "D"
        out["image"] = img.to_str(names)
        if args.check_invariance:
            res = invariance_check(D, P)
            out["invariant"] = bool(res)
            out["cofactor"] = res.to_str(names) if res else None
    if args.darboux is not None:
        found = darboux_search(D, args.darboux)
        out["darboux"] = {
            "maxdeg": args.darboux,
            "polynomials": [{"P": p.to_str(names), "cofactor": c} for p, c in found.polynomials],
            "pencils": [{"members": [p.to_str(names) for p in fam], "cofactor": c} for fam, c in found.pencils],
            "nonrational_eigenvalue": found.nonrational_eigenvalue,
        }
    if not args.apply and args.darboux is None:
        raise UsageError("derive needs --apply and/or --darboux")
    return out


def cmd_siegel(args) -> dict:
    from .siegel import IntMatrix, solve_report

    try:
        text = Path(args.matrix).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read matrix file: {exc}") from exc
    return solve_report(IntMatrix.loads(text))


def _aux_one(d: int, r, quartic: bool):
    from .auxpoly import construct_aux_poly

    return construct_aux_poly(d, r, quartic)


def cmd_auxpoly(args) -> dict | list:
    from .auxpoly import height_growth_table

    ds = _int_list(args.degree)
    if args.growth:
        return {"_table": height_growth_table(ds)}
    if args.jobs > 1 and len(ds) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            reps = list(ex.map(_aux_one, ds, [args.order] * len(ds), [args.quartic] * len(ds)))
    else:
        reps = [_aux_one(d, args.order, args.quartic) for d in ds]
    if args.emit_poly:
        Path(args.emit_poly).write_text("".join(r.P.to_str() + "\n" for r in reps))
    return {"reports": [r.to_json() for r in reps]}


def cmd_zeroscan(args) -> dict:
    from .zeroscope import multiplicity_scan

    recs, summary = multiplicity_scan(args.family, args.truncation, jobs=args.jobs, envelope=args.envelope)
    rows = [r.to_json() for r in recs]
    if args.report == "csv":
        return {"_table": rows}
    return {"family": args.family, "records": rows, "summary": summary}


def cmd_eval(args) -> dict:
    from .evalnum import eisenstein_at

    z = _ball_at(_complex_exact(args.z), args.bits)
    val = eisenstein_at(args.weight, z, args.bits)
    return {"weight": args.weight, "z": z, "value": val}


def cmd_transform(args) -> dict:
    from .evalnum import quasimodular_transform_check

    try:
        g = [int(t) for t in args.gamma.split(",")]
    except ValueError as exc:
        raise UsageError("--gamma expects a,b,c,d") from exc
    if len(g) != 4:
        raise UsageError("--gamma expects four integers a,b,c,d")
    tau = _ball_at(_complex_exact(args.tau), args.bits)
    res = quasimodular_transform_check(g, tau, args.bits)
    return {"gamma": list(res.gamma), "tau": res.tau,
            "residuals": {"E2": res.residuals[0], "E4": res.residuals[1], "E6": res.residuals[2]},
            "widths": res.widths(), "all_contain_zero": res.all_contain_zero()}


def cmd_philippon(args) -> dict:
    from .evalnum import philippon_window
    from .zeroscope import cauchy_gap_check

    z = _ball_at(_complex_exact(args.z), args.bits)
    ks = _int_list(args.k)
    window = None
    if args.window:
        a, b = (float(t) for t in args.window.split(","))
        window = (a, b)
    rows = philippon_window(z, range(1, args.dmax + 1), ks, args.bits, window)
    if args.rho is not None:
        from .auxpoly import construct_aux_poly

        for row in rows:
            if row["k"] == 0:
                rep = cauchy_gap_check(construct_aux_poly(row["d"]).P, z, Fraction(args.rho), args.bits)
                row["cauchy_rhs"] = rep.rhs
                row["cauchy_pass"] = rep.passed
    if args.report == "csv":
        return {"_table": rows}
    return {"z": z, "window": list(window) if window else None, "rows": rows}


def cmd_liouville(args) -> dict:
    from .liouville import liouville_check

    try:
        coeffs = [int(t) for t in args.minpoly.split(",")]
    except ValueError as exc:
        raise UsageError("--minpoly expects integer coefficients, leading first") from exc
    rep = liouville_check(coeffs, args.qmax, bits=args.bits)
    return rep.to_json(args.bits)


def _periods_one(text: str, bits: int, reduce: bool) -> dict:
    from .periods import EllipticCurveQ, elliptic_periods

    return elliptic_periods(EllipticCurveQ.parse(text), bits, reduce=reduce).to_json()


def cmd_periods(args) -> dict:
    curves = args.curve
    if args.jobs > 1 and len(curves) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            out = list(ex.map(_periods_one, curves, [args.bits] * len(curves), [not args.no_reduce] * len(curves)))
    else:
        out = [_periods_one(c, args.bits, not args.no_reduce) for c in curves]
    return out[0] if len(out) == 1 else {"curves": out}


def cmd_prop47(args) -> dict:
    from .periods import EllipticCurveQ, prop47_check

    return prop47_check(EllipticCurveQ.parse(args.curve), args.bits).to_json()


def cmd_hyper5(args) -> dict:
    from .periods import hyperelliptic_c5_periods

    if not (1 <= args.k <= 4 and 1 <= args.l <= 4):
        raise UsageError("--k and --l must lie in 1..4")
    return hyperelliptic_c5_periods(args.k, args.l, args.bits).to_json()


def cmd_selftest(args) -> dict:
    from .selftest import run_selftest

    out = run_selftest(args.truncation, args.seed)
    if not out["all_passed"]:
        raise SelftestFailure(json.dumps(out["checks"], sort_keys=True))
    return out


class SelftestFailure(NWError):
    code = "selftest_failed"


COMMANDS = {
    "qexp": cmd_qexp, "derive": cmd_derive, "siegel": cmd_siegel, "auxpoly": cmd_auxpoly,
    "zeroscan": cmd_zeroscan, "eval": cmd_eval, "transform": cmd_transform,
    "philippon": cmd_philippon, "liouville": cmd_liouville, "periods": cmd_periods,
    "prop47": cmd_prop47, "hyper5": cmd_hyper5, "selftest": cmd_selftest,
}


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bits", type=int, default=balls.DEFAULT_BITS,
                        help="working precision in bits (default $NW_DEFAULT_BITS or 200)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised families")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for parallel subcommands")
    common.add_argument("--report", choices=("json", "csv"), default="json",
                        help="output format; csv only for tables")
    common.add_argument("--timing", action="store_true", help="record wall time in the manifest")

    p = argparse.ArgumentParser(prog="nwkit", description="Exact and certified computations around "
                                "Eisenstein series, auxiliary polynomials and periods.")
    p.add_argument("--version", action="version", version=f"nwkit {__version__}")
    sub = p.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    sub.required = True

    s = sub.add_parser("qexp", parents=[common], help="q-expansions of E2, E4, E6, Delta, j")
    s.add_argument("--weight", required=True, help="2, 4, 6, delta or j")
    s.add_argument("--terms", type=int, required=True, help="truncation order N")
    s.add_argument("--format", choices=("json", "text"), default="json")

    s = sub.add_parser("derive", parents=[common], help="apply a derivation, check invariance, Darboux search")
    s.add_argument("--field", required=True, help="v, w or custom:<file> (one component per line)")
    s.add_argument("--apply", help="polynomial to act on")
    s.add_argument("--iterate", type=int, help="k: w^[k] for the field w, D^k otherwise")
    s.add_argument("--check-invariance", action="store_true")
    s.add_argument("--darboux", type=int, metavar="MAXDEG", help="constant-cofactor Darboux search")

    s = sub.add_parser("siegel", parents=[common], help="small kernel vector of an integer matrix")
    s.add_argument("--matrix", required=True, help="file: 'r s' then r rows of s integers")

    s = sub.add_parser("auxpoly", parents=[common], help="auxiliary polynomials P_d")
    s.add_argument("--degree", required=True, help="d, a list 1,2,3 or a range 1-3")
    s.add_argument("--order", type=int, help="vanishing order r (default floor(s/2))")
    s.add_argument("--quartic", action="store_true", help="use r = floor(d^4/4)")
    s.add_argument("--emit-poly", help="write the polynomials to this file")
    s.add_argument("--growth", action="store_true", help="height growth table instead of reports")

    s = sub.add_parser("zeroscan", parents=[common], help="vanishing orders over a family")
    s.add_argument("--family", required=True, help="coords | random:<count>:<maxdeg>:<seed> | aux:<dmax> | file:<path>")
    s.add_argument("--truncation", type=int, default=64, help="starting truncation (doubled while indeterminate)")
    s.add_argument("--envelope", type=int, default=48, help="C in the envelope ord <= C deg^4")

    s = sub.add_parser("eval", parents=[common], help="certified E2/E4/E6 at a point of the unit disc")
    s.add_argument("--weight", type=int, choices=(2, 4, 6), required=True)
    s.add_argument("--z", required=True, help="re,im")

    s = sub.add_parser("transform", parents=[common], help="quasimodular transformation residuals")
    s.add_argument("--gamma", required=True, help="a,b,c,d with ad - bc = 1")
    s.add_argument("--tau", required=True, help="re,im with im > 0")

    s = sub.add_parser("philippon", parents=[common], help="log|Q_d| diagnostic table")
    s.add_argument("--z", required=True, help="re,im")
    s.add_argument("--dmax", type=int, required=True)
    s.add_argument("--k", default="0", help="k values, e.g. 0,1,2")
    s.add_argument("--window", help="a,b: flag ratios outside [-a, -b]")
    s.add_argument("--rho", help="also run the Cauchy check at this radius for k = 0 rows")

    s = sub.add_parser("liouville", parents=[common], help="Liouville gaps along convergents")
    s.add_argument("--minpoly", required=True, help="integer coefficients, leading first")
    s.add_argument("--qmax", type=int, required=True)

    s = sub.add_parser("periods", parents=[common], help="periods and quasi-periods of y^2 = 4x^3 - ux - v")
    s.add_argument("--curve", required=True, action="append", help="u,v (repeatable)")
    s.add_argument("--no-reduce", action="store_true", help="keep the computed basis instead of reducing tau")

    s = sub.add_parser("prop47", parents=[common], help="E2, E4, E6 at tau versus period expressions")
    s.add_argument("--curve", required=True, help="u,v")

    s = sub.add_parser("hyper5", parents=[common], help="periods of y^2 = 1 - x^5 versus Beta values")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--l", type=int, required=True)

    s = sub.add_parser("selftest", parents=[common], help="exact identity suite")
    s.add_argument("--truncation", type=int, default=120)
    return p


PARAM_SKIP = {"subcommand", "timing", "jobs", "report"}


def make_manifest(args, wall: float | None) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in PARAM_SKIP}
    m = {
        "subcommand": args.subcommand,
        "params": params,
        "seed": args.seed,
        "truncation": getattr(args, "truncation", None) or getattr(args, "terms", None),
        "bits": args.bits,
        "version": __version__,
    }
    if wall is not None:
        m["wall_time_s"] = round(wall, 6)
    return m


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    t0 = time.perf_counter()
    try:
        result = COMMANDS[args.subcommand](args)
    except UsageError as exc:
        sys.stderr.write(f"nwkit {args.subcommand}: {exc}\n")
        sys.stdout.write(dump_json({"error": "usage", "message": str(exc)}))
        return 2
    except NWError as exc:
        body = exc.to_json()
        body["manifest"] = make_manifest(args, None)
        sys.stdout.write(dump_json(body))
        return 1
    wall = time.perf_counter() - t0 if args.timing else None
    manifest = make_manifest(args, wall)
    if isinstance(result, dict) and "_text" in result:
        sys.stdout.write(result["_text"])
        return 0
    if isinstance(result, dict) and "_table" in result:
        rows = to_jsonable(result["_table"], args.bits)
        if args.report == "csv":
            sys.stdout.write(dump_csv(rows, manifest))
        else:
            sys.stdout.write(dump_json({"rows": rows, "manifest": manifest}))
        return 0
    body = to_jsonable(result, args.bits)
    body["manifest"] = manifest
    sys.stdout.write(dump_json(body))
    return 0


if __name__ == "__main__":
    sys.exit(main())
