"""``ramicalc`` command-line front-end.

Every subcommand reads one JSON document (a path, ``-`` for stdin, or
``--inline``) and prints a JSON report.  Exit codes: 0 when all checks pass,
1 when a check fails or the computation raises, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable

from . import __version__
from .annuli import (
    MINUS,
    PLUS,
    annulus_degree,
    break_flows,
    different_identity_check,
    export_flows,
    gauss_directions,
    gauss_harmonicity,
    sigma_composition_check,
    sigma_epsilon,
)
from .disc.polygon import newton_polygon, profile, zero_norms
from .disc.radiality import (
    classify_radiality,
    radial_arithmetic_check,
    recentered_profile_matches,
    verify_witness,
)
from .disc.recenter import generic_norms, profile_at_point, residual_degrees
from .errors import (
    AlphaZeroNonzero,
    CenterOutsideDisc,
    EmptySupport,
    InvalidGroup,
    InvalidPiecewise,
    NonIncreasingAlphas,
    NonMonotoneBreaks,
    NonMonotoneValues,
    NonNormalSubgroup,
    NotASubgroup,
    NotInLambdaP,
    NotOnUnitCircle,
    NotPrime,
    PrimeMismatch,
    RadiusOutOfRange,
    RamicalcError,
    SchemaError,
)
from .io import (
    get_prime,
    parse_annulus,
    parse_function,
    parse_group,
    parse_inertia,
    parse_lambda,
    parse_scalar,
    parse_series,
    parse_subgroup,
    require_object,
)
from .lambda_calc import (
    LambdaP,
    canonical_factorization,
    chain_condition,
    compose,
    compose_chain,
    enumerate_simple_chains,
    identity,
    is_simple,
    pw_equals,
)
from .ramification import (
    canonical_tower,
    enumerate_towers,
    herbrand_degree_check,
    herbrand_galois,
    herbrand_of_subgroup,
    herbrand_relative,
    ramification_filtration,
    validate_inertia,
    verify_tower,
)
from .valuation import INF, as_rational, fmt_rational

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

# errors that mean the input itself is malformed
INPUT_ERRORS = (
    SchemaError,
    NotPrime,
    PrimeMismatch,
    InvalidGroup,
    NotASubgroup,
    NonNormalSubgroup,
    NonMonotoneValues,
    NonIncreasingAlphas,
    AlphaZeroNonzero,
    NonMonotoneBreaks,
    InvalidPiecewise,
    EmptySupport,
    CenterOutsideDisc,
    RadiusOutOfRange,
    NotOnUnitCircle,
)

UNIQUENESS_LIMIT = 3


class Job:
    def __init__(self, command: str, doc, options: dict):
        self.command = command
        self.doc = doc
        self.options = options
        self.csv_text: str | None = None


# ---------------------------------------------------------------- handlers


def _lambda_factor(job: Job) -> dict:
    f = parse_lambda(job.doc)
    factors = canonical_factorization(f)
    back = compose_chain(factors, f.p)
    out = {
        "function": f.to_json(),
        "coefficients_v": [fmt_rational(c) for c in f.coeffs_v],
        "local_degrees": list(f.local_degrees),
        "factors": [{**g.to_json(), "simple": is_simple(g), "degree": g.degree} for g in factors],
        "recomposition": "pass" if pw_equals(back, f.pw) else "fail",
        "chain_condition": chain_condition(factors),
    }
    ok = out["recomposition"] == "pass" and out["chain_condition"]
    if f.n <= UNIQUENESS_LIMIT:
        chains = enumerate_simple_chains(f)
        out["simple_chains_found"] = len(chains)
        ok = ok and len(chains) == 1
    out["pass"] = ok
    return out


def _lambda_compose(job: Job) -> dict:
    doc = require_object(job.doc, "document")
    raw = doc.get("functions")
    if not isinstance(raw, list) or not raw:
        raise SchemaError("'functions' must be a non-empty list, innermost first")
    fs = [parse_function({"p": doc["p"], **x} if "p" in doc and isinstance(x, dict) else x) for x in raw]
    total = identity(fs[0].p)
    for g in fs:
        total = compose(g, total)
    out = {"composite": total.to_json()}
    try:
        lam = LambdaP.from_pw(total)
        out["lambda_p"] = lam.to_json()
        out["canonical_factors"] = [g.to_json() for g in canonical_factorization(lam)]
    except NotInLambdaP as exc:
        out["lambda_p"] = None
        out["not_in_lambda_p"] = str(exc)
    out["pass"] = True
    return out


def _group_job(job: Job):
    doc = require_object(job.doc, "document")
    p = get_prime(doc)
    g = parse_group(doc.get("group"))
    inertia = parse_inertia(g, doc.get("inertia"))
    return doc, p, g, inertia


def _filtration_json(g, inertia, p) -> list:
    return [{"r_v": fmt_rational(r.v), "order": h.order, "bits": h.bits} for r, h in ramification_filtration(g, inertia, p)]


def _herbrand(job: Job) -> dict:
    doc, p, g, inertia = _group_job(job)
    validity = validate_inertia(g, inertia)
    if not validity["valid"]:
        return {"group_order": g.order, "inertia_valid": validity, "pass": False}
    h = parse_subgroup(g, doc["subgroup"]) if "subgroup" in doc else None
    f = herbrand_galois(g, inertia, p) if h is None else herbrand_of_subgroup(g, inertia, h, p)
    degrees = herbrand_degree_check(g, inertia, p, h)
    return {
        "group_order": g.order,
        "inertia_valid": validity,
        "filtration": _filtration_json(g, inertia, p),
        "herbrand": f.to_json(),
        "local_degrees": list(f.local_degrees),
        "degree_check": degrees,
        "pass": degrees["pass"],
    }


def _tower(job: Job) -> dict:
    doc, p, g, inertia = _group_job(job)
    h = parse_subgroup(g, doc["subgroup"]) if "subgroup" in doc else g.trivial
    t = canonical_tower(g, inertia, h, p)
    total = herbrand_relative(g, inertia, h, p)
    report = verify_tower(t, total)
    out = {"tower": t.to_json(), "total": total.to_json(), "verification": report}
    ok = report["pass"]
    if doc.get("enumerate", False):
        chains = enumerate_towers(g, inertia, h, p)
        canon = tuple(x.bits for x in t.chain)
        out["qualifying_chains"] = [list(c) for c in chains]
        out["unique"] = chains == [canon]
        ok = ok and out["unique"]
    out["pass"] = ok
    return out


def _polygon(job: Job) -> dict:
    f = parse_series(job.doc)
    poly = newton_polygon(f)
    return {
        "series": f.to_json(),
        "polygon": poly.to_json(),
        "zero_norms": [{"v": fmt_rational(v), "multiplicity": m} for v, m in zero_norms(poly)],
        "pass": True,
    }


def _profile(job: Job) -> dict:
    doc = require_object(job.doc, "document")
    f = parse_series(doc)
    out = {"series": f.to_json(), "profile": profile(f).to_json()}
    if "rho_v" in doc:
        rho = parse_scalar(doc["rho_v"])
        out["rho_v"] = fmt_rational(rho.v)
        out["generic_norms_v"] = {str(i): fmt_rational(x.v) for i, x in generic_norms(f, rho).items()}
        out["local_profile"] = profile_at_point(f, rho).to_json()
        s, i = residual_degrees(f, rho)
        out["residual_degrees"] = {"separable": s, "inseparable": i}
    out["pass"] = True
    return out


def _radial(job: Job) -> dict:
    doc = require_object(job.doc, "document")
    f = parse_series(doc)
    cert = classify_radiality(f)
    out = {"series": f.to_json(), "certificate": cert.to_json()}
    ok = True
    if cert.witness is not None:
        out["witness_verified"] = verify_witness(f, cert.witness)
        ok = out["witness_verified"]
    arith = radial_arithmetic_check(f, cert)
    out["arithmetic"] = arith
    ok = ok and arith["pass"]
    centers = doc.get("centers")
    if centers is not None:
        if not isinstance(centers, list):
            raise SchemaError("'centers' must be a list of rationals")
        rec = recentered_profile_matches(f, [as_rational(a) for a in centers])
        out["recentered"] = rec
        if cert.is_radial:
            ok = ok and all(r["same"] for r in rec)
    out["pass"] = ok
    return out


def _sigma(job: Job) -> dict:
    doc = require_object(job.doc, "document")
    if "compose" in doc:
        pair = require_object(doc["compose"], "compose")
        res = sigma_composition_check(parse_series(pair.get("f")), parse_series(pair.get("g")))
        return {"composition": res, "pass": res["pass"]}
    ann = parse_annulus(doc)
    sigma, eps = sigma_epsilon(ann)
    return {
        "inner_v": fmt_rational(ann.inner_v),
        "outward": ann.outward,
        "degree": annulus_degree(ann),
        "sigma": sigma,
        "eps_v": fmt_rational(eps.v),
        "pass": True,
    }


def _different(job: Job) -> dict:
    ann = parse_annulus(job.doc)
    rep = different_identity_check(ann)
    fd = break_flows(ann)
    return {
        "inner_v": fmt_rational(ann.inner_v),
        "outward": ann.outward,
        "local_degrees": list(fd.degrees),
        "flows": [h.to_json() for h in fd.flows],
        **rep,
    }


def _harmonicity(job: Job) -> dict:
    f = parse_series(job.doc)
    dirs = gauss_directions(f)
    rep = gauss_harmonicity(f, job.options["convention"], dirs)
    if job.options["format"] != "json" or job.options.get("csv"):
        job.csv_text = export_flows(dirs, job.options["grid"])
        rep["csv"] = {
            "grid": job.options["grid"],
            "columns": job.csv_text.splitlines()[0].split(","),
            "path": job.options.get("csv"),
        }
    return rep


COMMANDS: dict[str, Callable[[Job], dict]] = {
    "lambda-factor": _lambda_factor,
    "lambda-compose": _lambda_compose,
    "herbrand": _herbrand,
    "tower": _tower,
    "polygon": _polygon,
    "profile": _profile,
    "radial": _radial,
    "sigma": _sigma,
    "different-check": _different,
    "harmonicity": _harmonicity,
}
CSV_COMMANDS = {"harmonicity"}


# ---------------------------------------------------------------- plumbing


def _clean(obj):
    """JSON-safe copy: Fractions and infinities become strings, other floats are refused."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(x) for x in obj]
    if isinstance(obj, Fraction):
        return fmt_rational(obj)
    if isinstance(obj, float):
        if obj == INF:
            return "inf"
        raise TypeError(f"float {obj!r} in a report")
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, ensure_ascii=False) + "\n"


def _error(exc: RamicalcError) -> dict:
    return {"code": exc.code, "message": str(exc)}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ramicalc", description="Exact piecewise-monomial ramification calculus.")
    ap.add_argument("--version", action="version", version=f"ramicalc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("input", nargs="?", help="JSON document path, or - for stdin")
        sp.add_argument("--inline", help="the JSON document itself")
        sp.add_argument("--format", choices=["json", "csv", "both"], default="json")
        sp.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
        if name == "harmonicity":
            sp.add_argument("--convention", choices=[PLUS, MINUS], default=PLUS)
            sp.add_argument("--csv", help="write the flow CSV to this path")
            sp.add_argument("--grid", type=int, default=5, help="CSV sample points (>= 2)")
    return ap


def _load(args) -> object:
    if args.inline is not None and args.input is not None:
        raise SchemaError("give either a path or --inline, not both")
    if args.inline is not None:
        text = args.inline
    elif args.input is None:
        raise SchemaError("no input document")
    elif args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SchemaError(f"cannot read {args.input}: {exc.strerror}") from exc
    try:
        return json.loads(text, parse_float=_no_float)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc


def _no_float(s: str):
    raise SchemaError(f"floating-point literal {s} not allowed; use a rational string")


def _options(args) -> dict:
    opts = {"format": args.format}
    if args.command == "harmonicity":
        if args.grid < 2:
            raise SchemaError("--grid must be >= 2")
        opts.update(convention=args.convention, grid=args.grid, csv=args.csv)
    elif args.format != "json":
        raise SchemaError(f"{args.command} has no CSV output")
    return opts


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    report: dict = {"command": args.command}
    job = None
    try:
        opts = _options(args)
        doc = _load(args)
        report["input"] = doc
        report["options"] = {k: v for k, v in opts.items() if k != "csv"}
        job = Job(args.command, doc, opts)
        result = COMMANDS[args.command](job)
        report["result"] = result
        report["pass"] = bool(result.get("pass", False))
        code = EXIT_OK if report["pass"] else EXIT_FAIL
    except INPUT_ERRORS as exc:
        report["error"] = _error(exc)
        report["pass"] = False
        print(f"ramicalc: input error: {exc.code}: {exc}", file=stderr)
        code = EXIT_INPUT
    except RamicalcError as exc:
        report["error"] = _error(exc)
        report["pass"] = False
        code = EXIT_FAIL
    text = dumps(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    csv_text = job.csv_text if job is not None else None
    if csv_text is not None and args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
    if args.format == "csv" and csv_text is not None and code != EXIT_INPUT:
        stdout.write(csv_text)
    elif not args.output:
        stdout.write(text)
        if args.format == "both" and csv_text is not None:
            stdout.write("\n" + csv_text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
