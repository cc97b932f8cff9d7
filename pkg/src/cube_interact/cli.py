"""``cube-interact`` command-line interface.

Exit codes: 0 ok, 1 verification failure, 2 malformed input, 3 unsupported
method or spec combination, 4 degenerate normalisation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import continuous as ct
from . import io as fio
from . import stats
from . import subsets as sb
from . import verify
from .errors import DegenerateError, DomainError, EvaluationError, InvalidArgument, SpecParseError, Unsupported
from .model import Multilinear, evaluate

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_UNSUPPORTED, EXIT_DEGENERATE = 0, 1, 2, 3, 4


def _config(args) -> ct.IntegratorConfig:
    return ct.IntegratorConfig(
        method=getattr(args, "method", "auto"),
        order=getattr(args, "order", ct.DEFAULT_CONFIG.order),
        samples=getattr(args, "samples", ct.DEFAULT_CONFIG.samples),
        seed=getattr(args, "seed", 0),
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_index(args) -> int:
    spec = fio.load_spec(args.spec, args.smooth)
    cfg = _config(args)
    if args.subset is not None:
        S = sb.parse_subset(args.subset, spec.n)
        table = ct.InteractionTable(spec.n, {S: ct.interaction(spec, S, cfg)})
    else:
        table = ct.interaction_table(spec, args.max_order, cfg)
    text = fio.table_to_csv(table) if args.format == "csv" else fio.table_to_json(table)
    _emit(text, args.out)
    return EXIT_OK


def _parse_point(items: list[str], n: int) -> list[Fraction]:
    if len(items) != n:
        raise InvalidArgument(f"--eval needs {n} coordinates, got {len(items)}")
    try:
        return [Fraction(t) for t in items]
    except (ValueError, ZeroDivisionError):
        raise InvalidArgument(f"cannot parse --eval point {items}") from None


def cmd_approx(args) -> int:
    spec = fio.load_spec(args.spec, args.smooth)
    if not 0 <= args.k <= spec.n:
        raise InvalidArgument(f"--k must lie in 0..{spec.n}")
    cfg = _config(args)
    table = ct.interaction_table(spec, args.k, cfg)
    poly = ct.poly_from_centered(spec.n, table.values())
    doc = fio.poly_to_dict(poly)
    doc["k"] = args.k
    doc["centered"] = [
        {"subset": [i + 1 for i in sb.members(S)], "index": fio.format_scalar(est.value)} for S, est in table.rows()
    ]
    text = _json(doc)
    _emit(text, args.out)
    if args.eval is not None:
        x = _parse_point(args.eval, spec.n)
        value = evaluate(Multilinear(poly), x)
        sys.stdout.write(_json({"x": [str(t) for t in x], "value": fio.format_scalar(value), "float": float(value)}))
    return EXIT_OK


def cmd_stats(args) -> int:
    spec = fio.load_spec(args.spec, args.smooth)
    k = spec.n if args.k is None else args.k
    if not 1 <= k <= spec.n:
        raise InvalidArgument(f"--k must lie in 1..{spec.n}")
    report = stats.fit_report(spec, k, _config(args))
    rows = sorted(report.r.items(), key=lambda kv: sb.sort_key(kv[0]))
    doc = {
        "n": spec.n,
        "mean": fio.format_scalar(report.mean),
        "variance": fio.format_scalar(report.variance),
        "sigma": report.sigma,
        "r": [{"subset": sb.format_subset(S), "r": r} for S, r in rows],
        "r2": [float(v) for v in report.r2],
        "r2_exact": [fio.format_scalar(v) for v in report.r2],
    }
    _emit(_json(doc), args.out)
    return EXIT_OK


def cmd_estimate(args) -> int:
    spec = fio.load_spec(args.spec, args.smooth)
    S = sb.parse_subset(args.subset, spec.n)
    est = ct.estimate(spec, S, args.estimator, args.samples, args.seed)
    doc = {
        "subset": sb.format_subset(S),
        "estimator": args.estimator,
        "samples": args.samples,
        "seed": args.seed,
        "estimate": est.value,
        "stderr": est.stderr,
        "biased": est.biased,
    }
    if ct.has_closed_form(spec):
        exact = ct.closed_form_index(spec, S)
        doc["exact"] = fio.format_scalar(exact)
        diff = est.value - float(exact)
        if est.stderr > 0:
            doc["z"] = diff / est.stderr
        else:
            doc["z"] = 0.0 if diff == 0 else None
    _emit(_json(doc), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run_suite(args.level, args.seed, args.property or None)
    print(verify.format_results(results))
    return EXIT_OK if results and all(r.passed for r in results) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cube-interact", description="Interaction indexes of functions on [0,1]^n.")
    sub = parser.add_subparsers(dest="command", required=True)

    def spec_command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("spec", help="JSON spec file")
        p.add_argument("--smooth", action=argparse.BooleanOptionalAction, default=None,
                       help="smoothness hint for expression specs")
        p.add_argument("--out", help="write the report here instead of stdout")
        return p

    def integration_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--method", choices=[m.value for m in ct.Method], default="auto")
        p.add_argument("--order", type=int, default=ct.DEFAULT_CONFIG.order, help="Gauss points per axis")
        p.add_argument("--samples", type=int, default=ct.DEFAULT_CONFIG.samples)
        p.add_argument("--seed", type=int, default=0)

    p = spec_command("index", "interaction indexes")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--subset", help='1-based subset such as "{1,3}"')
    which.add_argument("--max-order", type=int, help="all subsets with at most this many elements")
    integration_flags(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_index)

    p = spec_command("approx", "best degree-k multilinear approximation")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eval", nargs="+", metavar="X", help="evaluate the approximation at this point")
    integration_flags(p)
    p.set_defaults(func=cmd_approx)

    p = spec_command("stats", "mean, sigma, normalised indexes and R²")
    p.add_argument("--k", type=int)
    integration_flags(p)
    p.set_defaults(func=cmd_stats)

    p = spec_command("estimate", "Monte Carlo estimate of one index")
    p.add_argument("--subset", required=True)
    p.add_argument("--estimator", choices=[e.value for e in ct.EstimatorKind], default="box")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--level", choices=[verify.QUICK, verify.FULL], default=verify.QUICK)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--property", action="append", help="run only this property (repeatable)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except SpecParseError as exc:
        print(f"error: {args.spec}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvalidArgument, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (Unsupported, EvaluationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except DegenerateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
