"""Instance sweeps: count, compare with the closed forms, write CSV/JSON."""

from __future__ import annotations

import csv
import enum
import io
import json
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import __version__
from .enumerative import delta, ml_formula
from .groebner import Budget, BudgetExceeded, CountReport, Status, count_solutions
from .model import Encoding, build_corank2_slice, build_system, random_instance
from .scalar import DEFAULT_PRIMES, PrimeModulus

THREADS_ENV = "MLDEGREE_THREADS"

FIELDS = ("n", "m", "seed", "prime", "encoding", "count", "status", "gb_size", "pairs_reduced", "elapsed_ms", "tool_version")
TIMING_FIELDS = ("elapsed_ms",)

DEFAULT_SEEDS = (1, 2, 3)
DEFAULT_ENCODINGS = (Encoding.REDUCED, Encoding.ELIMINATED)
ALL_ENCODINGS = (Encoding.PRIMAL, Encoding.REDUCED, Encoding.ELIMINATED)


class Verdict(str, enum.Enum):
    MATCH = "MATCH"
    MISMATCH = "MISMATCH"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True, order=True)
class Task:
    n: int
    m: int
    seed: int
    prime: int
    encoding: str


def default_workers() -> int:
    value = os.environ.get(THREADS_ENV)
    if not value:
        return 1
    workers = int(value)
    if workers < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer")
    return workers


def record(report: CountReport, tool_version: str = __version__) -> dict:
    return {
        "n": report.n,
        "m": report.m,
        "seed": report.seed,
        "prime": report.prime,
        "encoding": report.encoding,
        "count": report.count,
        "status": report.status.value,
        "gb_size": report.gb_size,
        "pairs_reduced": report.pair_count,
        "elapsed_ms": round(report.elapsed * 1000, 3),
        "tool_version": tool_version,
    }


def run_task(task: Task, budget: Budget = Budget()) -> CountReport:
    """Build one instance and count; budget exhaustion becomes a BUDGET_EXCEEDED report."""
    prime = PrimeModulus(task.prime)
    inst = random_instance(task.n, task.m, task.seed, prime)
    system = build_system(inst, task.encoding)
    meta = dict(encoding=Encoding(task.encoding).value, n=task.n, m=task.m, seed=task.seed, prime=task.prime)
    try:
        return count_solutions(system.equations, budget, **meta)
    except BudgetExceeded as exc:
        return CountReport(
            Status.BUDGET_EXCEEDED, None, exc.basis_size, exc.pairs_reduced, exc.elapsed,
            extra={"reason": str(exc)}, **meta,
        )


def _run_task_args(args):
    return run_task(*args)


@dataclass
class VerificationRun:
    cells: list
    seeds: list
    primes: list
    encodings: list
    results: list = field(default_factory=list)  # CountReport, sorted by task key
    verdicts: dict = field(default_factory=dict)  # (n, m) -> Verdict

    @property
    def exit_code(self) -> int:
        values = set(self.verdicts.values())
        if Verdict.MISMATCH in values:
            return 1
        if Verdict.INCONCLUSIVE in values:
            return 2
        return 0

    def records(self) -> list:
        return [record(r) for r in self.results]

    def cell_counts(self, n: int, m: int) -> Counter:
        return Counter(r.count for r in self.results if (r.n, r.m) == (n, m) and r.status is Status.OK)

    def encoding_disagreements(self) -> list:
        """(n, m, seed, prime) keys whose completed encodings report different outcomes."""
        groups: dict = {}
        for r in self.results:
            if r.status is Status.BUDGET_EXCEEDED:
                continue
            groups.setdefault((r.n, r.m, r.seed, r.prime), set()).add((r.status, r.count))
        return sorted(k for k, v in groups.items() if len(v) > 1)

    def summary(self) -> dict:
        cells = []
        for n, m in self.cells:
            counts = self.cell_counts(n, m)
            cells.append({
                "n": n,
                "m": m,
                "expected": ml_formula(m, n),
                "verdict": self.verdicts[(n, m)].value,
                "counts": {str(k): v for k, v in sorted(counts.items(), key=lambda kv: str(kv[0]))},
                "modal_count": counts.most_common(1)[0][0] if counts else None,
            })
        return {
            "tool_version": __version__,
            "seeds": self.seeds,
            "primes": self.primes,
            "encodings": self.encodings,
            "cells": cells,
            "encoding_disagreements": [list(k) for k in self.encoding_disagreements()],
            "exit_code": self.exit_code,
            "results": self.records(),
        }


def judge(expected: int, reports: Iterable[CountReport]) -> Verdict:
    """MATCH iff every completed run gives ``expected``; INCONCLUSIVE iff none completed."""
    completed = [r for r in reports if r.status is not Status.BUDGET_EXCEEDED]
    if not completed:
        return Verdict.INCONCLUSIVE
    if all(r.status is Status.OK and r.count == expected for r in completed):
        return Verdict.MATCH
    return Verdict.MISMATCH


def run_verification(
    cells: Sequence,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    primes: Sequence[int] = DEFAULT_PRIMES,
    encodings: Sequence = DEFAULT_ENCODINGS,
    budget: Budget = Budget(),
    workers: Optional[int] = None,
) -> VerificationRun:
    cells = [tuple(c) for c in cells]
    if not cells:
        raise ValueError("verification needs at least one (n, m) cell")
    if not seeds or not primes or not encodings:
        raise ValueError("seeds, primes and encodings must be non-empty")
    for n, m in cells:
        ml_formula(m, n)  # validates m
    encodings = [Encoding(e).value for e in encodings]
    tasks = sorted(
        Task(n, m, s, p, e) for n, m in cells for s in seeds for p in primes for e in encodings
    )
    workers = default_workers() if workers is None else workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task_args, [(t, budget) for t in tasks]))
    else:
        results = [run_task(t, budget) for t in tasks]
    run = VerificationRun(cells, list(seeds), list(primes), encodings, results)
    for n, m in cells:
        run.verdicts[(n, m)] = judge(ml_formula(m, n), (r for r in results if (r.n, r.m) == (n, m)))
    return run


def delta_oracle(n: int, seed: int, prime: int, budget: Budget = Budget()) -> dict:
    system = build_corank2_slice(n, seed, PrimeModulus(prime))
    report = count_solutions(system.equations, budget)
    expected = delta(n)
    return {
        "n": n,
        "seed": seed,
        "prime": prime,
        "count": report.count,
        "status": report.status.value,
        "expected": expected,
        "match": report.status is Status.OK and report.count == expected,
        "elapsed_ms": round(report.elapsed * 1000, 3),
        "tool_version": __version__,
    }


# -- CSV / JSON -----------------------------------------------------------------------


def to_csv(records: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow({k: "" if rec[k] is None else rec[k] for k in FIELDS})
    return buf.getvalue()


_INT_FIELDS = ("n", "m", "seed", "prime", "count", "gb_size", "pairs_reduced")


def from_csv(text: str) -> list:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        rec = {}
        for k in FIELDS:
            v = row[k]
            if k in _INT_FIELDS:
                rec[k] = int(v) if v != "" else None
            elif k == "elapsed_ms":
                rec[k] = float(v)
            else:
                rec[k] = v
        out.append(rec)
    return out


def to_json(records: Sequence[dict]) -> str:
    return json.dumps(list(records), indent=2, sort_keys=True) + "\n"


def strip_timing(rec: dict) -> dict:
    return {k: v for k, v in rec.items() if k not in TIMING_FIELDS}
