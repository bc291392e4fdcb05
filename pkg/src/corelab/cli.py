"""Command-line interface for enumeration, verification, fitting, and series.

Subcommands: enum, stat, verify, fit, series, experiment.  Output is a JSON
envelope (or csv/table projections of its result rows) with exact rationals
rendered as "p/q" strings.  Exit codes: 0 pass, 1 theorem-grade mismatch,
2 usage error, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction as Q
from math import comb, gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .cores import core_from_coroot, enumerate_simultaneous_cores
from .ehrhart import (
    coprime_fit_classes,
    _default_spec,
    fit_component,
    quasi_period,
    QuasiPolynomial,
    reciprocity_check,
    leading_coefficient_checks,
)
from .genfun import core_product_series, coxeter_char_poly, macdonald_series
from .lattice_enum import (
    alcove_size_sums,
    coroot_points_in_bA,
    core_points_in_sommers,
    coweight_points_in_bA,
    coroot_points_in_size_ellipsoid,
    _zise_closed_form,
)
from .rootsys import RootSystem, build_root_system, inner
from .stats import (
    _verdict,
    _w_b_inverse,
    experiment_cn_fuss,
    experiment_cn_selfconjugate_weighting,
    experiment_weak_order_maximality,
    floor_identity_check,
    haiman_count,
    is_simply_laced,
    moments,
    size_point,
    verify_max,
    zise_point,
)

SCHEMA_VERSION = 1
EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

VERIFY_SELECTORS = (
    "count",
    "max",
    "mean",
    "variance",
    "m3",
    "floor",
    "strange",
    "macdonald",
    "anderson",
    "genfun-A",
)

EXPERIMENTS = ("weak-order", "cn-fuss", "cn-weighting", "top-coeff")


class UsageError(ValueError):
    """Invalid configuration detected after argument parsing."""


class BudgetError(RuntimeError):
    """Estimated enumeration size exceeds the --max-points cap."""


def _rat(x) -> str:
    q = Q(x)
    return "%d/%d" % (q.numerator, q.denominator)


def _vec(x: Sequence[Q]) -> List[str]:
    return [_rat(v) for v in x]


def _root_system(args) -> RootSystem:
    if args.type is None or args.rank is None:
        raise UsageError("--type and --rank are required")
    try:
        return build_root_system(args.type, args.rank)
    except (ValueError, AssertionError) as exc:
        raise UsageError("invalid root system: %s" % exc)


def _dilations(args, required: bool = True) -> List[int]:
    if args.b is not None and args.b_range is not None:
        raise UsageError("give either --b or --b-range, not both")
    if args.b is not None:
        return [args.b]
    if args.b_range is not None:
        text = args.b_range
        parts = text.split("..")
        if len(parts) != 2:
            raise UsageError("--b-range must look like LO..HI")
        try:
            lo, hi = int(parts[0]), int(parts[1])
        except ValueError:
            raise UsageError("--b-range must look like LO..HI")
        if lo > hi:
            raise UsageError("--b-range must be nondecreasing")
        return list(range(lo, hi + 1))
    if required:
        raise UsageError("--b or --b-range is required")
    return []


def _count_estimate(rs: RootSystem, b: int, lattice: str) -> int:
    """Upper-end estimate of lattice points in the dilated alcove."""
    num = 1
    for e in rs.exponents:
        num *= b + e
    est = -(-num // rs.weyl_order)
    if lattice == "coweight":
        est *= rs.index_f
    return max(est, 1)


def _check_budget(estimate: int, args) -> None:
    if estimate > args.max_points:
        raise BudgetError(
            "estimated %d points exceeds --max-points %d" % (estimate, args.max_points)
        )


def _require_coprime(rs: RootSystem, b: int) -> None:
    if b < 1 or gcd(b, rs.coxeter_number) != 1:
        raise UsageError(
            "b must be positive and coprime to the Coxeter number %d"
            % rs.coxeter_number
        )


# ---------------------------------------------------------------- commands


def cmd_enum(args) -> Tuple[int, List[Dict]]:
    """List lattice points with their statistic.

    ``--stat size`` walks the height-``b`` region, whose coroot points are
    the cores (type A records carry the partition); it needs ``b`` coprime
    to ``h``.  ``--stat zise`` walks the dilated alcove and extends to any
    ``b`` through the closed quadratic on simply-laced systems.
    """
    rs = _root_system(args)
    bs = _dilations(args)
    if len(bs) != 1:
        raise UsageError("enum takes a single --b")
    b = bs[0]
    if b < 0:
        raise UsageError("b must be nonnegative")
    h = rs.coxeter_number
    coprime = b >= 1 and gcd(b, h) == 1
    _check_budget(_count_estimate(rs, b, args.lattice), args)
    results = []
    if args.stat == "size":
        if not coprime:
            raise UsageError(
                "size lives on the height-b region, so b must be coprime to"
                " the Coxeter number %d; use --stat zise on the alcove" % h
            )
        if args.lattice == "coroot":
            points = core_points_in_sommers(rs, b, jobs=args.jobs).points
        else:
            winv = _w_b_inverse(rs, b)
            alcove = coweight_points_in_bA(rs, b, jobs=args.jobs).points
            points = tuple(sorted(winv.apply(x) for x in alcove))
        with_cores = rs.family == "A" and args.lattice == "coroot"
        for x in points:
            record: Dict = {"point": _vec(x), "size": _rat(size_point(rs, x))}
            if with_cores:
                core = core_from_coroot(rs.rank + 1, x)
                record["core"] = list(core.partition.parts)
            results.append(record)
        return EXIT_OK, results
    if not coprime and not is_simply_laced(rs):
        raise UsageError(
            "zise at b not coprime to the Coxeter number %d needs the"
            " simply-laced closed form" % h
        )
    if args.lattice == "coroot":
        points = coroot_points_in_bA(rs, b, jobs=args.jobs).points
    else:
        points = coweight_points_in_bA(rs, b, jobs=args.jobs).points
    for x in points:
        value = zise_point(rs, b, x) if coprime else _zise_closed_form(rs, b, x)
        results.append({"point": _vec(x), "zise": _rat(value)})
    return EXIT_OK, results


def _moment_result(rs: RootSystem, b: int) -> Dict:
    report = moments(rs, b)
    result = {
        "family": report.family,
        "rank": report.rank,
        "b": report.b,
        "count": report.count,
        "max": _rat(report.max_value),
        "max_multiplicity": report.max_multiplicity,
        "mean": _rat(report.mean),
        "variance": None if report.m2 is None else _rat(report.m2),
        "m3": None if report.m3 is None else _rat(report.m3),
        "closed_forms": {
            name: None if value is None else _rat(value)
            for name, value in report.closed_forms
        },
        "verdicts": report.verdict_map(),
        "grade": report.grade,
    }
    return result


def cmd_stat(args) -> Tuple[int, List[Dict]]:
    rs = _root_system(args)
    sweep = args.b_range is not None
    results = []
    worst = EXIT_OK
    for b in _dilations(args):
        if sweep and (b < 1 or gcd(b, rs.coxeter_number) != 1):
            results.append({"b": b, "verdict": "skipped(b not coprime)"})
            continue
        _require_coprime(rs, b)
        _check_budget(_count_estimate(rs, b, "coroot"), args)
        result = _moment_result(rs, b)
        if result["grade"] == "mismatch":
            worst = EXIT_MISMATCH
        results.append(result)
    return worst, results


def _histogram_matches_series(rs: RootSystem, trunc: int) -> Tuple[bool, List[int]]:
    series = macdonald_series(rs, trunc)
    counts = [0] * (trunc + 1)
    for _, size in coroot_points_in_size_ellipsoid(rs, trunc):
        counts[int(size)] += 1
    return list(series.coeffs) == counts, counts


def _verify_one(selector: str, rs: RootSystem, b: Optional[int], args) -> Dict:
    n = rs.rank
    h = rs.coxeter_number
    result: Dict = {"selector": selector, "family": rs.family, "rank": n}
    if selector == "strange":
        lhs = 24 * inner(rs, rs.rho, rs.rho)
        rhs = 2 * rs.dual_coxeter_number * n * (h + 1)
        result.update(value=_rat(lhs), expected=_rat(Q(rhs)), verdict=_verdict(lhs, Q(rhs)))
        return result
    if selector == "macdonald":
        if not is_simply_laced(rs):
            raise UsageError("macdonald requires a simply-laced root system")
        trunc = args.trunc if args.trunc is not None else 20
        ok, counts = _histogram_matches_series(rs, trunc)
        result.update(
            trunc=trunc,
            value=counts,
            verdict="match" if ok else "mismatch(series != histogram)",
        )
        return result
    if selector == "genfun-A":
        if rs.family != "A":
            raise UsageError("genfun-A requires type A")
        trunc = args.trunc if args.trunc is not None else 20
        a = n + 1
        same = core_product_series(a, trunc).coeffs == macdonald_series(rs, trunc).coeffs
        result.update(
            trunc=trunc,
            verdict="match" if same else "mismatch(product != macdonald)",
        )
        return result
    # remaining selectors need a dilation
    if b is None:
        raise UsageError("selector %r needs --b or --b-range" % selector)
    result["b"] = b
    if selector == "count":
        _require_coprime(rs, b)
        _check_budget(_count_estimate(rs, b, "coroot"), args)
        got = Q(alcove_size_sums(rs, b, "coroot")[0])
        expected = haiman_count(rs, b)
        result.update(value=_rat(got), expected=_rat(expected), verdict=_verdict(got, expected))
        return result
    if selector == "floor":
        try:
            ok = floor_identity_check(rs, b)
        except ValueError as exc:
            raise UsageError(str(exc))
        result.update(verdict="match" if ok else "mismatch(identity failed)")
        return result
    if selector == "anderson":
        if rs.family != "A":
            raise UsageError("anderson requires type A")
        try:
            cores = enumerate_simultaneous_cores(n + 1, b)
        except ValueError as exc:
            raise UsageError(str(exc))
        got = Q(len(cores))
        expected = Q(comb(n + 1 + b, n + 1), n + 1 + b)
        result.update(value=_rat(got), expected=_rat(expected), verdict=_verdict(got, expected))
        return result
    if selector == "max":
        if not is_simply_laced(rs):
            raise UsageError("max closed form requires a simply-laced root system")
        _require_coprime(rs, b)
        _check_budget(_count_estimate(rs, b, "coroot"), args)
        try:
            value, multiplicity, argmax = verify_max(rs, b)
            verdict = "match" if multiplicity == 1 else "mismatch(multiplicity)"
        except AssertionError as exc:
            value, multiplicity, argmax = Q(0), 0, ()
            verdict = "mismatch(%s)" % exc
        result.update(
            value=_rat(value),
            multiplicity=multiplicity,
            argmax=_vec(argmax),
            verdict=verdict,
        )
        return result
    if selector in ("mean", "variance", "m3"):
        _require_coprime(rs, b)
        _check_budget(_count_estimate(rs, b, "coroot"), args)
        report = moments(rs, b)
        key = {"mean": "mean", "variance": "m2", "m3": "m3"}[selector]
        verdict = report.verdict_map().get(key, "no closed form")
        values = {"mean": report.mean, "variance": report.m2, "m3": report.m3}
        value = values[selector]
        result.update(
            value=None if value is None else _rat(value), verdict=verdict
        )
        return result
    raise UsageError("unknown selector %r" % selector)


COPRIME_SELECTORS = ("count", "max", "mean", "variance", "m3")


def cmd_verify(args) -> Tuple[int, List[Dict]]:
    rs = _root_system(args)
    bs = _dilations(args, required=False)
    ranged = args.b_range is not None
    results = []
    worst = EXIT_OK
    for selector in args.selectors:
        if selector not in VERIFY_SELECTORS:
            raise UsageError("unknown selector %r" % selector)
        needs_b = selector not in ("strange", "macdonald", "genfun-A")
        sweep: Sequence[Optional[int]] = bs if (needs_b and bs) else [None]
        for b in sweep:
            if (
                ranged
                and b is not None
                and selector in COPRIME_SELECTORS
                and (b < 1 or gcd(b, rs.coxeter_number) != 1)
            ):
                results.append(
                    {"selector": selector, "b": b, "verdict": "skipped(b not coprime)"}
                )
                continue
            result = _verify_one(selector, rs, b, args)
            if result["verdict"].startswith("mismatch"):
                worst = EXIT_MISMATCH
            results.append(result)
    return worst, results


def cmd_fit(args) -> Tuple[int, List[Dict]]:
    rs = _root_system(args)
    k = args.k if args.k is not None else 0
    if k < 0:
        raise UsageError("--k must be nonnegative")
    lattice = args.lattice
    if k >= 1 and not is_simply_laced(rs):
        raise UsageError("weighted fits require a simply-laced root system")
    m = quasi_period(rs, lattice)
    if args.residue is not None:
        if not 0 <= args.residue < m:
            raise UsageError("--residue out of range for period %d" % m)
        if k >= 1 and lattice == "coroot" and args.residue not in coprime_fit_classes(rs, lattice):
            raise UsageError(
                "residue class %d has no dilations coprime to h" % args.residue
            )
        classes = (args.residue,)
    elif k >= 1 and lattice == "coroot":
        classes = coprime_fit_classes(rs, lattice)
    else:
        classes = tuple(range(m))
    specs = [_default_spec(rs, k, lattice, j) for j in classes]
    estimate = sum(
        _count_estimate(rs, b, lattice) for spec in specs for b in spec.samples
    )
    _check_budget(estimate, args)
    components: List[Optional[Tuple[Q, ...]]] = [None] * m
    worst = EXIT_OK
    results: List[Dict] = []
    for spec in specs:
        try:
            poly = fit_component(spec)
        except ValueError as exc:
            if "period/degree" not in str(exc):
                raise UsageError(str(exc))
            results.append(
                {
                    "residue": spec.residue,
                    "holdouts": "fail(%s)" % exc,
                    "coefficients": None,
                }
            )
            worst = EXIT_MISMATCH
            continue
        components[spec.residue] = poly
        results.append(
            {
                "residue": spec.residue,
                "holdouts": "pass",
                "coefficients": [_rat(c) for c in poly],
            }
        )
    fitted = QuasiPolynomial(m, tuple(components), rs.rank + 2 * k)
    summary: Dict = {
        "lattice": lattice,
        "k": k,
        "period": m,
        "degree": rs.rank + 2 * k,
        "classes": list(classes),
        "quasipolynomial": fitted.as_json_dict(),
    }
    if lattice == "coweight" and worst == EXIT_OK and len(classes) == m:
        h = rs.coxeter_number
        ok = reciprocity_check(rs, k, fitted, range(1, h + 4))
        summary["reciprocity"] = "pass" if ok else "fail"
        if not ok:
            worst = EXIT_MISMATCH
    else:
        summary["reciprocity"] = "skipped"
    results.insert(0, summary)
    return worst, results


def cmd_series(args) -> Tuple[int, List[Dict]]:
    rs = _root_system(args)
    trunc = args.trunc if args.trunc is not None else 20
    if trunc < 0:
        raise UsageError("--trunc must be nonnegative")
    poly = coxeter_char_poly(rs)
    result: Dict = {
        "family": rs.family,
        "rank": rs.rank,
        "char_poly": list(poly.coeffs),
        "char_poly_at_one": poly(1),
        "index": rs.index_f,
        "trunc": trunc,
    }
    if is_simply_laced(rs):
        result["coefficients"] = list(macdonald_series(rs, trunc).coeffs)
        if rs.family == "A":
            result["core_product_matches"] = (
                core_product_series(rs.rank + 1, trunc).coeffs
                == tuple(result["coefficients"])
            )
    else:
        result["coefficients"] = None
    return EXIT_OK, [result]


def cmd_experiment(args) -> Tuple[int, List[Dict]]:
    name = args.experiment
    if name == "weak-order":
        rs = _root_system(args)
        bs = _dilations(args)
        results = []
        for b in bs:
            _require_coprime(rs, b)
            report = dict(experiment_weak_order_maximality(rs, b))
            raw = report.pop("verdict")
            violations = report.get("violations", ())
            report["verdict"] = (
                "consistent"
                if raw == "agree"
                else "counterexample(%d of %d escape)"
                % (len(violations), report.get("total", 0))
            )
            report["violations"] = [
                {"point": _vec(lam), "escaped": extra} for lam, extra in violations
            ]
            results.append(report)
        return EXIT_OK, results
    if name == "cn-fuss":
        if args.rank is None:
            raise UsageError("--rank is required")
        if args.m < 1:
            raise UsageError("--m must be positive")
        try:
            report = dict(experiment_cn_fuss(args.rank, args.m))
        except ValueError as exc:
            raise UsageError(str(exc))
        raw = report.pop("verdict")
        report["mean"] = _rat(report["mean"])
        report["conjecture"] = _rat(report["conjecture"])
        report["verdict"] = (
            "consistent"
            if raw == "agree"
            else "counterexample(mean %s != %s)" % (report["mean"], report["conjecture"])
        )
        return EXIT_OK, [report]
    if name == "cn-weighting":
        if args.rank is None:
            raise UsageError("--rank is required")
        if args.trials < 1:
            raise UsageError("--trials must be positive")
        try:
            report = dict(
                experiment_cn_selfconjugate_weighting(args.rank, args.trials, args.seed)
            )
        except ValueError as exc:
            raise UsageError(str(exc))
        raw = report.pop("verdict")
        report["verdict"] = (
            "consistent"
            if raw == "agree"
            else "counterexample(%d mismatches)" % len(report.get("mismatches", ()))
        )
        return EXIT_OK, [report]
    if name == "top-coeff":
        rs = _root_system(args)
        if args.k is None or args.k < 1:
            raise UsageError("--k >= 1 is required")
        if not is_simply_laced(rs):
            raise UsageError("top-coeff requires a simply-laced root system")
        spec = _default_spec(rs, args.k, "coroot", 1 if quasi_period(rs, "coroot") > 1 else 0)
        estimate = sum(_count_estimate(rs, b, "coroot") for b in spec.samples)
        _check_budget(estimate, args)
        report = dict(leading_coefficient_checks(rs, args.k))
        raw = report.pop("verdict")
        report["ratio"] = _rat(report["ratio"])
        report["expected"] = (
            None if report["expected"] is None else _rat(report["expected"])
        )
        if raw == "match":
            report["verdict"] = "consistent"
        elif raw.startswith("mismatch"):
            report["verdict"] = "counterexample%s" % raw[len("mismatch"):]
        else:
            report["verdict"] = raw
        return EXIT_OK, [report]
    raise UsageError("unknown experiment %r" % name)


# ---------------------------------------------------------------- plumbing


def _config_dict(args) -> Dict:
    keys = (
        "command",
        "type",
        "rank",
        "b",
        "b_range",
        "k",
        "trunc",
        "lattice",
        "format",
        "jobs",
        "max_points",
        "seed",
        "selectors",
        "experiment",
        "m",
        "trials",
        "stat",
        "residue",
    )
    out = {}
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            out[key] = value
    return out


def _flatten_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if value is None:
        return ""
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


def _render_csv(results: List[Dict]) -> str:
    fields = sorted({key for row in results for key in row})
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in results:
        writer.writerow([_flatten_cell(row.get(f)) for f in fields])
    return buf.getvalue()


def _render_table(results: List[Dict]) -> str:
    fields = sorted({key for row in results for key in row})
    rows = [[_flatten_cell(row.get(f)) for f in fields] for row in results]
    widths = [
        max(len(f), *(len(r[i]) for r in rows)) if rows else len(f)
        for i, f in enumerate(fields)
    ]
    lines = ["  ".join(f.ljust(w) for f, w in zip(fields, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _emit(args, exit_code: int, results: List[Dict], out) -> None:
    if args.format == "csv":
        out.write(_render_csv(results))
        return
    if args.format == "table":
        out.write(_render_table(results))
        return
    grade = "conjecture" if args.command == "experiment" else "theorem"
    if args.command == "experiment":
        verdict = "report"
    else:
        verdict = "pass" if exit_code == EXIT_OK else "fail"
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "config": _config_dict(args),
        "results": results,
        "grade": grade,
        "verdict": verdict,
    }
    out.write(json.dumps(envelope, indent=2, sort_keys=True) + "\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corelab",
        description="Lattice-point statistics of dilated alcoves and core partitions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--type", choices=list("ABCDEFG"))
        p.add_argument("--rank", type=int)
        p.add_argument("--b", type=int)
        p.add_argument("--b-range", dest="b_range")
        p.add_argument("--k", type=int)
        p.add_argument("--trunc", type=int)
        p.add_argument("--lattice", choices=("coweight", "coroot"), default=None)
        p.add_argument("--format", choices=("json", "csv", "table"), default="json")
        p.add_argument("--jobs", type=int, default=None)
        p.add_argument("--max-points", dest="max_points", type=int, default=50_000_000)
        p.add_argument("--seed", type=int, default=0)

    p_enum = sub.add_parser("enum", help="list lattice points or cores with sizes")
    common(p_enum)
    p_enum.add_argument("--stat", choices=("size", "zise"), default="zise")

    p_stat = sub.add_parser("stat", help="exact moments next to closed forms")
    common(p_stat)

    p_verify = sub.add_parser("verify", help="theorem checks, exact")
    p_verify.add_argument("selectors", nargs="+", metavar="selector")
    common(p_verify)

    p_fit = sub.add_parser("fit", help="fit weighted Ehrhart quasipolynomials")
    common(p_fit)
    p_fit.add_argument("--residue", type=int, default=None)

    p_series = sub.add_parser("series", help="character polynomial and q-series")
    common(p_series)

    p_exp = sub.add_parser("experiment", help="conjecture experiments, non-gating")
    p_exp.add_argument("experiment", choices=EXPERIMENTS)
    common(p_exp)
    p_exp.add_argument("--m", type=int, default=1)
    p_exp.add_argument("--trials", type=int, default=50)

    return parser


_DISPATCH: Dict[str, Callable] = {
    "enum": cmd_enum,
    "stat": cmd_stat,
    "verify": cmd_verify,
    "fit": cmd_fit,
    "series": cmd_series,
    "experiment": cmd_experiment,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if isinstance(code, int) else EXIT_USAGE
    if args.jobs is None:
        try:
            args.jobs = max(1, int(os.environ.get("CORELAB_JOBS", "1")))
        except ValueError:
            args.jobs = 1
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_USAGE
    if args.lattice is None:
        # each command defaults to its natural lattice: fits follow the
        # coweight Ehrhart theory, everything else follows the cores
        args.lattice = "coweight" if args.command == "fit" else "coroot"
    try:
        exit_code, results = _DISPATCH[args.command](args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET
    _emit(args, exit_code, results, out)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
