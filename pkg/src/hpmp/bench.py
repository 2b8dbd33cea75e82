"""Benchmark rows and CSV reports in the layout of the experiment tables."""

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .approx import solve
from .errors import AlgorithmInapplicableError, InfeasibleProblemError
from .instance import generate_euclidean

__all__ = ["BenchRow", "CSV_HEADER", "row_from_report", "run_bench", "format_csv", "parse_seeds"]

CSV_HEADER = [
    "instance", "n", "p", "seed", "lb", "ub", "ratio", "q", "branch",
    "guaranteed_ratio", "time_ms_total", "time_ms_two_factor", "status",
]


@dataclass(frozen=True)
class BenchRow:
    instance_name: str
    n: int
    p: int
    seed: int = None
    lb: float = None
    ub: float = None
    ratio: float = None
    q: float = None
    branch: str = ""
    guaranteed_ratio: int = None
    time_ms_total: float = None
    time_ms_two_factor: float = None
    status: str = "ok"

    def csv_fields(self, times=True):
        def num(x, digits):
            if x is None or (isinstance(x, float) and math.isnan(x)):
                return ""
            return f"{x:.{digits}f}"

        q = "" if self.q is None else (str(self.q) if isinstance(self.q, int) else num(self.q, 2))
        return [
            self.instance_name,
            str(self.n),
            str(self.p),
            "" if self.seed is None else str(self.seed),
            num(self.lb, 10),
            num(self.ub, 10),
            num(self.ratio, 10),
            q,
            self.branch,
            "" if self.guaranteed_ratio is None else str(self.guaranteed_ratio),
            num(self.time_ms_total, 3) if times else "",
            num(self.time_ms_two_factor, 3) if times else "",
            self.status,
        ]


def row_from_report(inst, report, seed=None):
    return BenchRow(
        instance_name=inst.name, n=report.n, p=report.p, seed=seed,
        lb=report.lb, ub=report.ub, ratio=report.ratio, q=report.q,
        branch=report.branch, guaranteed_ratio=report.guaranteed_ratio,
        time_ms_total=report.time_ms_total,
        time_ms_two_factor=report.time_ms_two_factor,
    )


def failure_row(inst, p, exc, seed=None):
    if isinstance(exc, AlgorithmInapplicableError):
        status = "inapplicable"
    elif isinstance(exc, InfeasibleProblemError):
        status = "infeasible"
    else:
        status = "error"
    return BenchRow(inst.name, inst.n, p, seed, lb=getattr(exc, "lb", None),
                    q=getattr(exc, "q", None), status=status)


def _bench_task(args):
    n, seed, box, p, method = args
    inst = generate_euclidean(n, seed, box)
    try:
        _, report = solve(inst, p, two_factor_method=method)
    except (AlgorithmInapplicableError, InfeasibleProblemError) as exc:
        return failure_row(inst, p, exc, seed)
    return row_from_report(inst, report, seed)


def _mean(values):
    values = [v for v in values if v is not None]
    return sum(values) / len(values) if values else None


def summary_row(n, p, rows):
    ok = [r for r in rows if r.status == "ok"]
    return BenchRow(
        instance_name="avg.", n=n, p=p,
        lb=_mean([r.lb for r in ok]), ub=_mean([r.ub for r in ok]),
        ratio=_mean([r.ratio for r in ok]),
        q=_mean([float(r.q) for r in ok]),
        time_ms_total=_mean([r.time_ms_total for r in ok]),
        time_ms_two_factor=_mean([r.time_ms_two_factor for r in ok]),
        status="avg",
    )


def run_bench(n, p_list, seeds, box=100.0, jobs=1, method="auto"):
    """Solve every (p, seed) pair; rows come back sorted by (p, seed) with
    one average row after each p group."""
    tasks = [(n, s, box, p, method) for p in sorted(p_list) for s in sorted(seeds)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_bench_task, tasks))
    else:
        results = [_bench_task(t) for t in tasks]
    out = []
    for p in sorted(p_list):
        group = sorted((r for r in results if r.p == p), key=lambda r: r.seed)
        out.extend(group)
        out.append(summary_row(n, p, group))
    return out


def format_csv(rows, header=True, times=True):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow(r.csv_fields(times=times))
    return buf.getvalue()


def parse_seeds(text):
    """``"1..5"`` (inclusive range), ``"3"`` or ``"1,4,9"``."""
    text = text.strip()
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
        if hi < lo:
            raise ValueError(f"empty seed range {text!r}")
        return list(range(lo, hi + 1))
    return [int(x) for x in text.split(",") if x.strip()]
