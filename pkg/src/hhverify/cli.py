"""Command line entry point: ``hhverify {verify,sweep,tightness,check-convexity}``.

Exit codes: 0 all checks pass, 1 an identity or inequality check failed,
2 configuration or I/O error.
"""

import argparse
import dataclasses
import json
import sys

from .convexity import AMParams, check_abs_f2_q
from .corpus import corpus_by_id
from .errors import ConfigError, HHVerifyError
from .harness import (
    SweepConfig,
    default_config,
    rows_to_csv,
    rows_to_json,
    run_sweep,
    sweep_summary,
    tightness_table,
    verify_identities,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _intervals(text):
    out = []
    for part in text.split(","):
        a, b = part.split(":")
        out.append((float(a), float(b)))
    return out


def _common(p):
    p.add_argument("--config", help="JSON file with SweepConfig fields")
    p.add_argument("--out", help="output path")
    p.add_argument("--tol", type=float, help="tolerance (quadrature tol for sweeps)")


def _sweep_flags(p):
    p.add_argument("--functions", help="comma-separated function ids")
    p.add_argument("--intervals", type=_intervals, help="a:b pairs, e.g. 0:1,0.5:2")
    p.add_argument("--alphas", type=_floats)
    p.add_argument("--ms", type=_floats)
    p.add_argument("--qs", type=_floats)
    p.add_argument("--grid-n", type=int)
    p.add_argument("--convexity-tol", type=float)
    p.add_argument("--format", choices=("csv", "json"))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hhverify",
        description="Verify trapezoid-gap bounds for (alpha, m)-convex |f''|^q.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run identity and reduction checks")
    _common(p)

    p = sub.add_parser("sweep", help="evaluate every bound over a parameter grid")
    _common(p)
    _sweep_flags(p)

    p = sub.add_parser("tightness", help="count which bound is tightest per (alpha, m, q)")
    _common(p)
    _sweep_flags(p)

    p = sub.add_parser("check-convexity", help="grid check of |f''|^q for one function")
    _common(p)
    p.add_argument("--function", required=True, help="corpus function id")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--b-star", type=float)
    p.add_argument("--grid-n", type=int, default=50)
    return parser


def _load_config(args):
    config = SweepConfig.load(args.config) if args.config else default_config()
    overrides = {
        "intervals": args.intervals,
        "alphas": args.alphas,
        "ms": args.ms,
        "qs": args.qs,
        "grid_n": args.grid_n,
        "convexity_tol": args.convexity_tol,
        "format": args.format,
        "quad_tol": args.tol,
        "output_path": args.out,
    }
    if args.functions is not None:
        overrides["function_ids"] = [f.strip() for f in args.functions.split(",") if f.strip()]
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return dataclasses.replace(config, **overrides)


def _cmd_verify(args):
    summary = verify_identities(args.tol if args.tol is not None else 1e-9)
    text = "\n".join(summary.lines()) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump([dataclasses.asdict(c) for c in summary.checks], fh, indent=2)
            fh.write("\n")
    sys.stdout.write(text)
    return EXIT_OK if summary.passed else EXIT_FAIL


def _cmd_sweep(args):
    config = _load_config(args)
    rows = run_sweep(config)
    if not config.output_path:
        sys.stdout.write(rows_to_csv(rows) if config.format == "csv" else rows_to_json(rows))
    info = sweep_summary(rows)
    print(" ".join(f"{k}={v}" for k, v in info.items()), file=sys.stderr)
    return EXIT_FAIL if info["gate_violations"] else EXIT_OK


def _cmd_tightness(args):
    config = _load_config(args)
    header, table = tightness_table(config)
    if not config.output_path:
        print(",".join(header))
        for t in table:
            print(",".join(str(v) for v in t))
    return EXIT_OK


def _cmd_check_convexity(args):
    specs = corpus_by_id()
    if args.function not in specs:
        raise ConfigError({"function": f"unknown id {args.function!r}; known: {sorted(specs)}"})
    fs = specs[args.function]
    params = AMParams(args.alpha, args.m, args.q)
    tol = args.tol if args.tol is not None else 1e-9
    verdict = check_abs_f2_q(fs, params, args.b_star or fs.b_star, args.grid_n, tol)
    out = {"function_id": fs.id, **dataclasses.asdict(params), **dataclasses.asdict(verdict)}
    text = json.dumps(out, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK if verdict.holds else EXIT_FAIL


_COMMANDS = {
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "tightness": _cmd_tightness,
    "check-convexity": _cmd_check_convexity,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HHVerifyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG if isinstance(exc, ValueError) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
