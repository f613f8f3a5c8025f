"""Command line front end.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 factorization budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys

from .arith import DEFAULT_BUDGET, FactorizationIncomplete, pell19_solutions
from .classifier import classify_global, x5_member
from .curves import SingularCurve, WeierstrassModel, reduced_minimal_model
from .families import C30, DegenerateParameters, build_pair, normalize_params
from .tate import global_tamagawa, tate_local

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _emit(obj, fmt: str, table_lines=None, out=None):
    out = out or sys.stdout
    if fmt == "json":
        print(json.dumps(obj, sort_keys=True), file=out)
    else:
        for line in table_lines or []:
            print(line, file=out)


# ---------------------------------------------------------------- classify


def _oracle_rows(spec, budget):
    pair = build_pair(spec)
    E = global_tamagawa(reduced_minimal_model(pair.E, budget), budget)
    Et = global_tamagawa(reduced_minimal_model(pair.E_tilde, budget), budget)
    return E, Et


def cmd_classify(args) -> int:
    b = None if args.b is None else args.b
    spec = normalize_params(args.family, args.a, b)
    c, ct, breakdown = classify_global(spec, args.budget)
    result = {
        "spec": str(spec),
        "c": c,
        "c_tilde": ct,
        "primes": [{"p": lp.p, "c_p": lp.c_p, "c_tilde_p": lp.c_tilde_p, "rule": lp.rule} for lp in breakdown],
    }
    lines = [f"{spec}: c = {c}, c~ = {ct}"]
    lines += [f"  p={lp.p:<8} c_p={lp.c_p:<4} c~_p={lp.c_tilde_p:<4} {lp.rule}" for lp in breakdown]
    status = EXIT_OK
    if args.oracle:
        (tc, tl), (ttc, ttl) = _oracle_rows(spec, args.budget)
        loc = {lr.p: lr.c_p for lr in tl}
        tloc = {lr.p: lr.c_p for lr in ttl}
        mismatches = []
        for lp in breakdown:
            if (loc.get(lp.p, 1), tloc.get(lp.p, 1)) != (lp.c_p, lp.c_tilde_p):
                mismatches.append(lp.p)
        listed = {lp.p for lp in breakdown}
        for p in sorted(set(loc) | set(tloc)):
            if p not in listed and (loc.get(p, 1), tloc.get(p, 1)) != (1, 1):
                mismatches.append(p)
        if (tc, ttc) != (c, ct):
            mismatches.append("global")
        result["oracle"] = {"c": tc, "c_tilde": ttc, "mismatches": mismatches}
        lines.append(f"oracle (Tate): c = {tc}, c~ = {ttc}, " + ("agrees" if not mismatches else f"MISMATCH at {mismatches}"))
        if mismatches:
            status = EXIT_DOMAIN
    _emit(result, args.format, lines)
    return status


# ---------------------------------------------------------------- tate


def cmd_tate(args) -> int:
    m = WeierstrassModel(*args.ai)
    if args.p is not None:
        locs = [tate_local(reduced_minimal_model(m, args.budget), args.p)]
    else:
        _, locs = global_tamagawa(m, args.budget)
    rows = [
        {
            "p": lr.p,
            "kodaira": str(lr.kodaira),
            "c_p": lr.c_p,
            "f_p": lr.f_p,
            "v_disc": lr.v_min,
            "reduction": lr.reduction_class,
        }
        for lr in locs
    ]
    lines = [f"{'p':>8} {'type':>6} {'c_p':>4} {'f_p':>4} {'v(D)':>5}  reduction"]
    lines += [f"{r['p']:>8} {r['kodaira']:>6} {r['c_p']:>4} {r['f_p']:>4} {r['v_disc']:>5}  {r['reduction']}" for r in rows]
    _emit({"model": str(m), "primes": rows}, args.format, lines)
    return EXIT_OK


# ---------------------------------------------------------------- survey


def cmd_survey(args) -> int:
    from . import survey

    modes = [args.X is not None, args.intro is not None, args.x7count is not None, args.fifth is not None]
    if sum(modes) != 1:
        raise _Usage("give exactly one of --X, --intro, --x7count, --fifth")
    if args.X is not None:
        if args.ell is None:
            raise _Usage("--X needs --ell")
        records = []
        row = survey.tilde_stats(
            args.ell,
            args.X,
            jobs=args.jobs,
            budget=args.budget,
            exclude_fifth_powers=args.exclude_fifth_powers,
            records=records,
            checkpoint=args.checkpoint,
        )
        if args.output:
            with open(args.output, "w") as fh:
                if args.format == "json":
                    json.dump(row.summary(), fh, sort_keys=True)
                    fh.write("\n")
                else:
                    fh.write(survey.CurveRecord.CSV_HEADER + "\n")
                    for rec in records:
                        fh.write(rec.csv() + "\n")
        if args.format == "json":
            print(json.dumps(row.summary(), sort_keys=True))
        else:
            print(f"N={row.N} G={row.G} {row.percent:.2f}%")
            if row.boundary:
                print(f"warning: {row.boundary} curve(s) on the height boundary", file=sys.stderr)
        return EXIT_OK
    if args.intro is not None:
        value = survey.intro_count(args.intro, args.budget)
        key = "intro"
    elif args.x7count is not None:
        value = survey.x7_prime_count(args.x7count)
        key = "x7count"
    else:
        value = survey.fifth_power_experiment(args.fifth, args.budget)
        key = "fifth"
    if args.format == "json":
        print(json.dumps({key: value}))
    elif isinstance(value, tuple):
        print(" ".join(str(v) for v in value))
    else:
        print(value)
    return EXIT_OK


# ---------------------------------------------------------------- fixtures


def cmd_fixtures(args) -> int:
    from .fixtures import FIXTURES, run_all

    report = run_all()
    notes = {f.label: f.note for f in FIXTURES if f.note}
    lines = []
    for name, problems in report.items():
        mark = "ok  " if not problems else "FAIL"
        extra = f"  ({notes[name]})" if name in notes else ""
        lines.append(f"{mark} {name}{extra}")
        lines += [f"     {msg}" for msg in problems]
    _emit({k: v for k, v in report.items()}, args.format, lines)
    return EXIT_OK if all(not v for v in report.values()) else EXIT_DOMAIN


# ---------------------------------------------------------------- xsets


def cmd_xsets(args) -> int:
    from .survey import x7_primes

    out = {}
    lines = []
    if args.pell is not None:
        sols = [(a, b) for a, b in pell19_solutions(args.pell) if a > 0]
        x5 = [(a, b) for a, b in sols if x5_member(a, b)]
        out["x5"] = x5
        lines.append(f"X_5 solutions with 0 < a, |b| <= {args.pell}: {len(x5)}")
        lines += [f"  ({a}, {b})" for a, b in x5]
    if args.x7box is not None:
        primes = sorted(x7_primes(args.x7box))
        out["x7"] = primes if args.list else len(primes)
        lines.append(f"X_7 primes over [1, {args.x7box}]^2: {len(primes)}")
        if args.list:
            lines += [f"  {q}" for q in primes]
    if not out:
        raise _Usage("give --pell and/or --x7box")
    _emit(out, args.format, lines)
    return EXIT_OK


# ---------------------------------------------------------------- parser


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="Pollard rho iteration budget")
    common.add_argument("--jobs", type=int, default=1)

    parser = argparse.ArgumentParser(prog="tamagawa-isogeny", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="Tamagawa numbers of E_T(a,b) and its quotient")
    p.add_argument("family")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int, nargs="?")
    p.add_argument("--oracle", action="store_true", help="compare against Tate's algorithm")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("tate", parents=[common], help="Tate's algorithm on [a1,a2,a3,a4,a6]")
    p.add_argument("ai", type=int, nargs=5, metavar="a")
    p.add_argument("--p", type=int)
    p.set_defaults(func=cmd_tate)

    p = sub.add_parser("survey", parents=[common], help="height surveys and counts")
    p.add_argument("--ell", type=int, choices=(5, 7))
    p.add_argument("--X", type=float)
    p.add_argument("--intro", type=int)
    p.add_argument("--x7count", type=int)
    p.add_argument("--fifth", type=int)
    p.add_argument("--output")
    p.add_argument("--checkpoint", help="NDJSON file of finished blocks; an interrupted run resumes from it")
    p.add_argument(
        "--exclude-fifth-powers",
        action="store_true",
        help="drop C5 pairs with ab a fifth power",
    )
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("fixtures", parents=[common], help="check the embedded database curves")
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("xsets", parents=[common], help="the sets X_5 and X_7")
    p.add_argument("--pell", type=int, help="bound for the X_5 search")
    p.add_argument("--x7box", type=int, help="box size for the X_7 scan")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_xsets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        parser.error(str(exc))  # exits with 2
    except FactorizationIncomplete as exc:
        print(f"error: factorization budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DegenerateParameters as exc:
        print(f"error: degenerate parameters: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (SingularCurve, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
