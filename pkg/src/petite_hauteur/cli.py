"""Command-line front end: ``petite-hauteur {height,nt,gbar,equidist}``.

Exit status: 0 on success, 2 for usage or parse errors, 3 when a numerical
computation did not converge (whatever was computed is still written).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

from .elliptic.curve import INFINITY, parse_curve, parse_point
from .elliptic.height import DEFAULT_TOLERANCE, is_torsion, neron_tate
from .errors import ConvergenceFailure, HeightError, ParseError, PrecisionFailure, UndefinedNaiveHeight
from .gm_heights import ReducibleOrbitWarning, mahler_measure, make_orbit, weil_height
from .polyroots import DEFAULT_PRECISION, format_polynomial, normalize_primitive, parse_polynomials

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3
PRECISION_ENV = "PETITE_HAUTEUR_PRECISION"
SIGNIFICANT = 12
FAMILIES = ("kummer", "trinomial", "cyclotomic", "coupled", "torsion", "product")
_VALUE_OPTIONS = ("--coeffs", "--curve", "--point", "--points", "--weights")


class UsageError(Exception):
    pass


class NotConverged(Exception):
    pass


# ---------------------------------------------------------------------------
# argument handling


def _int_list(text: str) -> list:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None


def _glue_negative_values(argv):
    # "--coeffs -2,1" would otherwise be read as an unknown option
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and len(argv[i + 1]) > 1 and (argv[i + 1][1].isdigit() or argv[i + 1][1] == "/"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="working precision in bits (default 256)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE, help="height tolerance (default 1e-5)")
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default: logical cores)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output file (default: stdout)")

    parser = argparse.ArgumentParser(prog="petite-hauteur", description="Heights and equidistribution of small points.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("height", parents=[common], help="Weil height of algebraic numbers")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--coeffs", help="ascending integer coefficients, comma separated")
    src.add_argument("--file", help="polynomial file: one polynomial per line, ascending coefficients")

    p = sub.add_parser("nt", parents=[common], help="Neron-Tate height of a rational point")
    p.add_argument("--curve", required=True, help="a1,a2,a3,a4,a6")
    p.add_argument("--point", required=True, action="append", help="x_num/x_den,y_num/y_den or inf (repeatable)")

    p = sub.add_parser("gbar", parents=[common], help="height and minimum of the compactified extension")
    p.add_argument("--curve", required=True)
    p.add_argument("--points", required=True, help="points q_1..q_t separated by ';'")
    p.add_argument("--weights", default=None, help="optional integers n_0..n_t for the generalized bundle")

    p = sub.add_parser("equidist", parents=[common], help="Weyl sums, discrepancy and radial tails of orbit families")
    p.add_argument("--family", required=True, help="one of " + ", ".join(FAMILIES))
    p.add_argument("--n", default=None, help="degrees (kummer, trinomial), comma separated")
    p.add_argument("--a", type=int, default=2, help="kummer base a in x^n - a")
    p.add_argument("--N", default=None, help="cyclotomic orders, comma separated")
    p.add_argument("--M", type=int, default=None, help="second order for coupled pairs")
    p.add_argument("--curve", default=None)
    p.add_argument("--order", default=None, help="torsion orders, comma separated")
    p.add_argument("--chars", type=int, default=5, help="character bound K")
    return parser


# ---------------------------------------------------------------------------
# formatting


def _num(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.{SIGNIFICANT}g}")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return _num(obj)


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        items = obj.items()
    elif isinstance(obj, list) and obj and all(isinstance(v, list) and len(v) >= 2 for v in obj):
        # (key, value[, ...]) rows such as Weyl pairs and radial triples
        items = []
        for row in obj:
            key = row[0]
            key = "_".join(str(k) for k in key) if isinstance(key, list) else str(key)
            value = row[1] if len(row) == 2 else row[1:]
            items.append((key, value))
    elif isinstance(obj, list):
        return {prefix: ";".join(str(v) for v in obj)}
    else:
        return {prefix: obj}
    out = {}
    for k, v in items:
        out.update(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
    return out


def render(records, fmt: str) -> str:
    records = [_clean(r) for r in records]
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    rows = [_flatten(r) for r in records]
    columns = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# workers (top level so that they can be shipped to processes)


def _height_item(args):
    coeffs, precision = args
    poly = normalize_primitive(coeffs)
    orbit = make_orbit(poly, precision)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReducibleOrbitWarning)
        hb = weil_height(orbit)
    return {
        "poly": format_polynomial(poly),
        "degree": hb.degree,
        "total": hb.total,
        "archimedean": hb.archimedean,
        "finite": hb.finite,
        "mahler": mahler_measure(orbit),
        "irreducibility": orbit.irreducibility.status.value,
    }


def _nt_item(args):
    curve_text, point_text, tol = args
    E = parse_curve(curve_text)
    P = parse_point(point_text)
    if P.is_infinity:
        raise UndefinedNaiveHeight("the point at infinity has no naive height")
    res = neron_tate(E, P, tol)
    return {
        "curve": curve_text,
        "point": point_text,
        "value": res.value,
        "error_bound": res.error_bound,
        "depth": res.depth,
        "converged": res.converged,
        "torsion": is_torsion(E, P),
    }


def _equidist_item(args):
    from . import equidist as eq

    family, params, K, precision = args
    if family == "kummer":
        return eq.orbit_report(family, params, eq.gen_kummer(params["a"], params["n"], precision), K)
    if family == "trinomial":
        return eq.orbit_report(family, params, eq.gen_trinomial(params["n"], precision), K)
    if family == "cyclotomic":
        return eq.measure_report(family, params, eq.gen_cyclotomic(params["N"]), K)
    if family == "coupled":
        return eq.measure_report(family, params, eq.coupled_cyclotomic(params["N"], params["M"]), K)
    E = parse_curve(params["curve"])
    torus = eq.torsion_measure(E, params["order"], precision)
    if family == "torsion":
        return eq.measure_report(family, params, torus, K)
    prod = eq.product_measure(torus, eq.gen_cyclotomic(params["N"]))
    return eq.measure_report(family, params, prod, K)


def _run(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_height(ns, precision, jobs):
    if ns.coeffs is not None:
        polys = [normalize_primitive(_int_list(ns.coeffs))]
    else:
        try:
            with open(ns.file, encoding="utf-8") as fh:
                polys = parse_polynomials(fh.read())
        except OSError as exc:
            raise UsageError(str(exc)) from None
    return _run(_height_item, [(p.coeffs, precision) for p in polys], jobs), False


def _cmd_nt(ns, precision, jobs):
    parse_curve(ns.curve)
    items = [(ns.curve, pt, ns.tol) for pt in ns.point]
    records = _run(_nt_item, items, jobs)
    return records, any(not r["converged"] for r in records)


def _cmd_gbar(ns, precision, jobs):
    from .semiabelian import SemiAbelianDatum, gbar_height, gbar_height_alt, generalized_height

    E = parse_curve(ns.curve)
    points = tuple(parse_point(tok) for tok in ns.points.split(";") if tok.strip())
    datum = SemiAbelianDatum(E, points)
    inv = gbar_height(datum, ns.tol)
    alt, alt_err = gbar_height_alt(datum, ns.tol, with_error=True)
    record = {
        "curve": ns.curve,
        "points": [str(P) for P in points],
        "t": inv.t,
        "hhat_gbar": inv.hhat_gbar,
        "hhat_error": inv.hhat_error,
        "hhat_gbar_alt": alt,
        "hhat_alt_error": alt_err,
        "agreement_residual": abs(inv.hhat_gbar - alt),
        "mu_gbar": inv.mu_gbar,
        "mu_error": inv.mu_error,
        "h_q": inv.h_q,
        "h_terms": list(inv.h_terms),
        "isotrivial": inv.isotrivial,
        "converged": inv.converged,
    }
    if ns.weights is not None:
        value, err = generalized_height(datum, _int_list(ns.weights), ns.tol, with_error=True)
        record["weights"] = _int_list(ns.weights)
        record["generalized"] = value
        record["generalized_error"] = err
    return [record], not inv.converged


def _require(value, flag, family):
    if value is None:
        raise UsageError(f"--family {family} needs {flag}")
    return value


def _cmd_equidist(ns, precision, jobs):
    fam = ns.family
    if fam not in FAMILIES:
        raise UsageError(f"unknown family {fam!r}; expected one of {', '.join(FAMILIES)}")
    if fam == "kummer":
        items = [{"a": ns.a, "n": n} for n in _int_list(_require(ns.n, "--n", fam))]
    elif fam == "trinomial":
        items = [{"n": n} for n in _int_list(_require(ns.n, "--n", fam))]
    elif fam == "cyclotomic":
        items = [{"N": N} for N in _int_list(_require(ns.N, "--N", fam))]
    elif fam == "coupled":
        M = _require(ns.M, "--M", fam)
        items = [{"N": N, "M": M} for N in _int_list(_require(ns.N, "--N", fam))]
    elif fam == "torsion":
        curve = str(parse_curve(_require(ns.curve, "--curve", fam)))
        items = [{"curve": curve, "order": k} for k in _int_list(_require(ns.order, "--order", fam))]
    else:
        curve = str(parse_curve(_require(ns.curve, "--curve", fam)))
        Ns = _int_list(_require(ns.N, "--N", fam))
        items = [{"curve": curve, "order": k, "N": N}
                 for k in _int_list(_require(ns.order, "--order", fam)) for N in Ns]
    return _run(_equidist_item, [(fam, p, ns.chars, precision) for p in items], jobs), False


COMMANDS = {"height": _cmd_height, "nt": _cmd_nt, "gbar": _cmd_gbar, "equidist": _cmd_equidist}


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        precision = ns.precision if ns.precision is not None else _default_precision()
        if precision < 64:
            raise UsageError("--precision must be at least 64 bits")
        if not ns.tol > 0:
            raise UsageError("--tol must be positive")
        jobs = ns.jobs if ns.jobs is not None else (os.cpu_count() or 1)
        records, incomplete = COMMANDS[ns.command](ns, precision, jobs)
    except (UsageError, ParseError, UndefinedNaiveHeight) as exc:
        print(f"petite-hauteur: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceFailure, PrecisionFailure) as exc:
        print(f"petite-hauteur: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except HeightError as exc:
        # off-curve points, singular curves, invalid polynomials
        print(f"petite-hauteur: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(render(records, ns.format), ns.out)
    if incomplete:
        print("petite-hauteur: warning: some heights did not reach the tolerance", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
