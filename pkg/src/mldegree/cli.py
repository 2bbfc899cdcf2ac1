"""Command-line entry point: ``mldegree {count,formula,verify,delta-oracle,export-system}``.

Exit codes: 0 success / all MATCH, 1 mismatch, 2 inconclusive or budget
exhausted (argparse usage errors also exit 2).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .enumerative import ml_formula, ml_naive, ml_via_intersection
from .groebner import Budget, Status
from .harness import (
    ALL_ENCODINGS,
    DEFAULT_ENCODINGS,
    DEFAULT_SEEDS,
    Task,
    delta_oracle,
    record,
    run_task,
    run_verification,
    to_csv,
    to_json,
)
from .model import Encoding, build_corank2_slice, build_system, random_instance
from .scalar import DEFAULT_PRIME, DEFAULT_PRIMES, PrimeModulus


def _cell(text: str):
    try:
        n, m = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cell must look like NxM (e.g. 4x3), got {text!r}") from None
    return n, m


def _encoding(text: str) -> str:
    text = text.upper()
    if text == "ALL":
        return text
    try:
        return Encoding(text).value
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown encoding {text!r}") from None


def _budget(args) -> Budget:
    return Budget(max_pairs=args.budget_pairs, max_seconds=args.budget_seconds)


def _write(path, text: str):
    if path:
        Path(path).write_text(text)


def _add_budget(p):
    p.add_argument("--budget-pairs", type=int, default=Budget.max_pairs, help="max S-pair reductions per task")
    p.add_argument("--budget-seconds", type=float, default=None, help="wall-clock limit per task")


def cmd_count(args) -> int:
    if args.encoding == "ALL":
        raise SystemExit("count takes a single encoding")
    report = run_task(Task(args.n, args.m, args.seed, args.prime, args.encoding), _budget(args))
    rec = record(report)
    print(json.dumps(rec, sort_keys=True))
    _write(args.out_json, to_json([rec]))
    _write(args.out_csv, to_csv([rec]))
    if report.status is Status.BUDGET_EXCEEDED:
        print(report.extra.get("reason", "budget exhausted"), file=sys.stderr)
        return 2
    return 0


def formula_table(m: int, n_min: int, n_max: int) -> list:
    return [
        {"n": n, "ml_formula": ml_formula(m, n), "ml_via_intersection": ml_via_intersection(m, n), "ml_naive": ml_naive(m, n)}
        for n in range(n_min, n_max + 1)
    ]


def cmd_formula(args) -> int:
    rows = formula_table(args.m, args.n_min, args.n_max)
    print(f"{'n':>4} {'ML':>12} {'via_intersection':>18} {'naive':>12}")
    for r in rows:
        print(f"{r['n']:>4} {r['ml_formula']:>12} {r['ml_via_intersection']:>18} {r['ml_naive']:>12}")
    if args.out_json:
        _write(args.out_json, json.dumps(rows, indent=2) + "\n")
    return 0


def cmd_verify(args, parser) -> int:
    cells = list(args.cells or [])
    if args.n is not None or args.m is not None:
        if args.n is None or args.m is None:
            parser.error("--n and --m must be given together")
        cells += [(n, m) for n in args.n for m in args.m]
    if not cells:
        parser.error("verify needs at least one cell (--cells NxM ... or --n/--m)")
    encodings = list(args.encoding or [e.value for e in DEFAULT_ENCODINGS])
    if "ALL" in encodings:
        encodings = [e.value for e in ALL_ENCODINGS]
    run = run_verification(
        cells, args.seeds, args.primes, encodings, _budget(args), workers=args.workers
    )
    for rec in run.records():
        print(json.dumps(rec, sort_keys=True))
    summary = run.summary()
    for cell in summary["cells"]:
        print(f"n={cell['n']} m={cell['m']} expected={cell['expected']} counts={cell['counts']} {cell['verdict']}")
    if summary["encoding_disagreements"]:
        print(f"encoding disagreements: {summary['encoding_disagreements']}")
    _write(args.out_json, json.dumps(summary, indent=2, sort_keys=True) + "\n")
    _write(args.out_csv, to_csv(run.records()))
    return run.exit_code


def cmd_delta_oracle(args) -> int:
    rec = delta_oracle(args.n, args.seed, args.prime, _budget(args))
    print(json.dumps(rec, sort_keys=True))
    _write(args.out_json, json.dumps(rec, indent=2, sort_keys=True) + "\n")
    return 0 if rec["match"] else 1


def cmd_export_system(args) -> int:
    prime = PrimeModulus(args.prime)
    if args.encoding == "SLICE":
        system = build_corank2_slice(args.n, args.seed, prime)
    else:
        if args.m is None:
            raise SystemExit("--m is required for model encodings")
        system = build_system(random_instance(args.n, args.m, args.seed, prime), args.encoding)
    text = system.to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mldegree", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count critical points of one random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--encoding", type=_encoding, default=Encoding.ELIMINATED.value)
    p.add_argument("--out-json")
    p.add_argument("--out-csv")
    _add_budget(p)

    p = sub.add_parser("formula", help="tabulate the closed forms")
    p.add_argument("--m", type=int, required=True, choices=(2, 3, 4))
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--out-json")

    p = sub.add_parser("verify", help="solver counts against the closed forms over seeds x primes x encodings")
    p.add_argument("--cells", type=_cell, nargs="+", metavar="NxM")
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--m", type=int, nargs="+")
    p.add_argument("--seeds", type=int, nargs="+", default=list(DEFAULT_SEEDS))
    p.add_argument("--primes", type=int, nargs="+", default=list(DEFAULT_PRIMES))
    p.add_argument("--encoding", type=_encoding, nargs="+", help="one or more of PRIMAL REDUCED ELIMINATED, or ALL")
    p.add_argument("--workers", type=int, default=None, help="process count (default: $MLDEGREE_THREADS or 1)")
    p.add_argument("--out-json")
    p.add_argument("--out-csv")
    _add_budget(p)

    p = sub.add_parser("delta-oracle", help="degree of the corank-2 locus from a random slice")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--out-json")
    _add_budget(p)

    p = sub.add_parser("export-system", help="write a system in the plain-text polynomial format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--encoding", type=lambda s: "SLICE" if s.upper() == "SLICE" else _encoding(s),
                   default=Encoding.REDUCED.value)
    p.add_argument("--out")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "count":
        return cmd_count(args)
    if args.command == "formula":
        return cmd_formula(args)
    if args.command == "verify":
        return cmd_verify(args, parser)
    if args.command == "delta-oracle":
        return cmd_delta_oracle(args)
    return cmd_export_system(args)


if __name__ == "__main__":
    sys.exit(main())
