"""Command-line entry point: ``cantorsum <command> ...``.

Exit codes: 0 success, 1 error, 2 no witness found (certify-zero),
3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from ._exact import to_fraction
from .atlas import middle_set_classify, region_grid, region_svg, scan_projections
from .errors import BudgetExceeded, CantorSumError, ParseError
from .formats import csv_text, dumps, load_sum_system, sum_system_to_dict, witness_from_dict, parse_sum_system
from .ifs import SumSystem
from .measure import covering_sum, density_estimate
from .squares import NotFound, SearchBudget, certify_zero, corner_applicable

EXIT_OK, EXIT_ERROR, EXIT_NOT_FOUND, EXIT_BUDGET = 0, 1, 2, 3


def _fraction(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _positive(text: str) -> Fraction:
    v = _fraction(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _unit(text: str) -> Fraction:
    v = _fraction(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1): {text!r}")
    return v


def _half(text: str) -> Fraction:
    v = _fraction(text)
    if not 0 < v < Fraction(1, 2):
        raise argparse.ArgumentTypeError(f"must lie in (0, 1/2): {text!r}")
    return v


def _list_of(kind):
    def parse(text: str) -> list[Fraction]:
        items = [t for t in text.split(",") if t.strip()]
        if not items:
            raise argparse.ArgumentTypeError("empty list")
        return [kind(t) for t in items]

    return parse


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return v


def _config(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k == "func":
            continue
        if isinstance(v, list):
            v = [str(x) for x in v]
        elif isinstance(v, Fraction):
            v = str(v)
        out[k] = v
    return out


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _emit_csv(text: str, args, system: SumSystem | None = None):
    """Write CSV to -o (or stdout); with -o the run configuration goes alongside."""
    _emit(text, args.output)
    if args.output is not None:
        meta = {"tool": "cantorsum", "version": __version__, "config": _config(args)}
        if system is not None:
            meta["system"] = sum_system_to_dict(system)
        Path(args.output + ".meta.json").write_text(dumps(meta), encoding="utf-8")


def _budget(args) -> SearchBudget:
    return SearchBudget(max_squares=args.max_squares, max_words=args.max_squares)


# ---------------------------------------------------------------------------


def cmd_analyze(args) -> int:
    s = load_sum_system(args.ifs)
    sides = {}
    for name, sys_ in (("lambda_system", s.lambda_system), ("gamma_system", s.gamma_system)):
        sides[name] = {
            "maps": len(sys_),
            "ratios": [str(r) for r in sys_.ratios],
            "dimension": sys_.dimension,
            "hull": [str(sys_.hull[0]), str(sys_.hull[1])],
            "diameter": str(sys_.diameter),
            "homogeneous": sys_.is_homogeneous,
        }
    report = {
        "config": _config(args),
        "system": sum_system_to_dict(s),
        **sides,
        "eta": str(s.eta),
        "sum_dimension": s.sum_dimension,
        "sum_hull": [str(s.hull[0]), str(s.hull[1])],
        "r_min": str(s.r_min),
        "size_factor": str(s.size_factor),
        "corner_family_applies": corner_applicable(s),
    }
    _emit(dumps(report), args.output)
    return EXIT_OK


def cmd_certify(args) -> int:
    s = load_sum_system(args.ifs)
    results, code = [], EXIT_OK
    try:
        certs = certify_zero(s, args.eps, args.scale_floor, _budget(args), workers=args.threads)
    except BudgetExceeded as exc:
        report = {"config": _config(args), "system": sum_system_to_dict(s), "error": str(exc),
                  "depth_reached": exc.depth_reached}
        _emit(dumps(report), args.output)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    for c in certs:
        entry = {"epsilon": str(c.epsilon), "method": c.method, "found": c.found}
        if c.found:
            entry["witness"] = c.result.to_dict()
        else:
            r: NotFound = c.result
            entry["not_found"] = {"depth_reached": r.depth_reached, "squares_examined": r.squares_examined}
            code = EXIT_NOT_FOUND
        results.append(entry)
    report = {"config": _config(args), "system": sum_system_to_dict(s), "results": results}
    _emit(dumps(report), args.output)
    return code


def cmd_verify(args) -> int:
    text = Path(args.report).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", None, exc.lineno) from None
    if not isinstance(data, dict) or "system" not in data:
        raise ParseError("report must embed the system it was computed for", "system")
    s = parse_sum_system(json.dumps(data["system"]))
    if "results" in data:
        raw = [r["witness"] for r in data["results"] if r.get("found")]
    elif "square1" in data:
        raw = [data]
    else:
        raw = [data["witness"]] if "witness" in data else []
    if not raw:
        print("no witnesses in report", file=sys.stderr)
        return EXIT_ERROR
    ok = [witness_from_dict(w, s).verified_exact for w in raw]
    print(f"verified {sum(ok)}/{len(ok)}")
    return EXIT_OK if all(ok) else EXIT_ERROR


def cmd_scan(args) -> int:
    s = load_sum_system(args.ifs)
    if not args.eta_lo < args.eta_hi:
        raise CantorSumError("need --eta-lo < --eta-hi")
    recs = scan_projections(s, args.eta_lo, args.eta_hi, args.grid_n, args.eps, args.scale_floor,
                            _budget(args), workers=args.threads)
    rows = [(r.index, r.eta, r.theta, r.eps, r.witness_found, r.depth_reached) for r in recs]
    _emit_csv(csv_text(("index", "eta", "theta", "eps", "witness_found", "depth_reached"), rows), args, s)
    return EXIT_BUDGET if any(r.budget_exceeded for r in recs) else EXIT_OK


def cmd_classify(args) -> int:
    print(middle_set_classify(args.lam, args.gam, args.tol).label)
    return EXIT_OK


def cmd_region_map(args) -> int:
    if args.csv is None and args.svg is None:
        raise CantorSumError("give --csv and/or --svg")
    if args.csv is not None:
        Path(args.csv).write_text(csv_text(("lam", "gam", "label"), region_grid(args.grid_n, args.tol)),
                                  encoding="utf-8")
    if args.svg is not None:
        Path(args.svg).write_text(region_svg(args.grid_n, boundary_tol=args.tol), encoding="utf-8")
    return EXIT_OK


def _scales(args, s: SumSystem) -> list[Fraction]:
    if args.r:
        return args.r
    base = s.r_min
    # just above base^k so the k-th level is the one that qualifies
    return [base**k * (1 + Fraction(1, 10**12)) for k in range(1, args.levels + 1)]


def cmd_box_count(args) -> int:
    s = load_sum_system(args.ifs)
    rows = [(r, covering_sum(s, r)) for r in _scales(args, s)]
    _emit_csv(csv_text(("r", "value"), rows), args, s)
    return EXIT_OK


def cmd_density(args) -> int:
    s = load_sum_system(args.ifs)
    rows = [(a, r, density_estimate(s, a, r)) for a in args.a for r in args.r]
    _emit_csv(csv_text(("a", "r", "estimate"), rows), args, s)
    return EXIT_OK


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1; 2 is reserved for "no witness found"."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cantorsum", description="Witness search for arithmetic sums of affine Cantor sets.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def search_opts(q):
        q.add_argument("--scale-floor", type=_unit, default=Fraction(1, 10**6), help="smallest side ratio searched")
        q.add_argument("--threads", type=_count, default=1, help="worker threads (results do not depend on it)")
        q.add_argument("--max-squares", type=_count, default=3_000_000, help="square budget per search")

    q = sub.add_parser("analyze", help="dimensions, hulls and basic data of an IFS file")
    q.add_argument("ifs")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_analyze)

    q = sub.add_parser("certify-zero", help="search for close square pairs at each eps")
    q.add_argument("ifs")
    q.add_argument("--eps", type=_list_of(_positive), required=True, help="comma-separated schedule")
    search_opts(q)
    q.add_argument("-o", "--output", help="witness report JSON (default stdout)")
    q.set_defaults(func=cmd_certify)

    q = sub.add_parser("verify-witness", help="re-verify every witness in a report exactly")
    q.add_argument("report")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("scan-projections", help="witness search over a grid of eta")
    q.add_argument("ifs")
    q.add_argument("--eta-lo", type=_positive, required=True)
    q.add_argument("--eta-hi", type=_positive, required=True)
    q.add_argument("--grid-n", type=_count, default=100)
    q.add_argument("--eps", type=_positive, required=True)
    search_opts(q)
    q.add_argument("-o", "--output", help="atlas CSV (default stdout)")
    q.set_defaults(func=cmd_scan)

    q = sub.add_parser("classify-middle", help="region label of a middle-set pair")
    q.add_argument("--lambda", dest="lam", type=_half, required=True)
    q.add_argument("--gamma", dest="gam", type=_half, required=True)
    q.add_argument("--tol", type=float, default=1e-12, help="boundary tolerance")
    q.set_defaults(func=cmd_classify)

    q = sub.add_parser("region-map", help="region CSV and SVG over (0, 1/2)^2")
    q.add_argument("--grid-n", type=_count, default=200)
    q.add_argument("--tol", type=float, default=1e-12)
    q.add_argument("--csv")
    q.add_argument("--svg")
    q.set_defaults(func=cmd_region_map)

    q = sub.add_parser("box-count", help="covering sums at decreasing scales")
    q.add_argument("ifs")
    g = q.add_mutually_exclusive_group()
    g.add_argument("--r", type=_list_of(_unit), help="comma-separated scales")
    g.add_argument("--levels", type=_count, default=6, help="use r_min^k for k = 1..levels")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_box_count)

    q = sub.add_parser("density", help="upper density estimates nu(B(a, r)) / r^s")
    q.add_argument("ifs")
    q.add_argument("--a", type=_list_of(_fraction), required=True, help="comma-separated centres")
    q.add_argument("--r", type=_list_of(_positive), required=True, help="comma-separated radii")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_density)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CantorSumError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
