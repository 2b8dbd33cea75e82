"""Command-line front end: ``hpmp gen|solve|bench|oracle``.

Exit codes: 0 ok, 1 I/O or parse error, 2 usage error, 3 algorithm
inapplicable, 4 infeasible p.
"""

import argparse
import logging
import sys
from pathlib import Path

from .approx import solve
from .bench import failure_row, format_csv, parse_seeds, row_from_report, run_bench
from .errors import (
    AlgorithmInapplicableError,
    InfeasibleProblemError,
    InstanceParseError,
    OracleLimitError,
)
from .instance import generate_euclidean, load_instance, save_instance
from .oracle import OracleLimitConfig, brute_hpmp

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_INAPPLICABLE = 3
EXIT_INFEASIBLE = 4

METHODS = ("auto", "full", "pricing")


def _positive_int_list(text):
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _seed_list(text):
    try:
        return parse_seeds(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hpmp", description="Hamiltonian p-median approximation toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random Euclidean instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--box", type=float, default=100.0)
    g.add_argument("--out", required=True)
    g.add_argument("--name")

    s = sub.add_parser("solve", help="run the approximation on an instance file")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--csv", help="append the result row to this CSV file")
    s.add_argument("--method", choices=METHODS, default="auto")
    s.add_argument("--no-times", action="store_true",
                   help="leave timing columns empty (byte-reproducible output)")

    b = sub.add_parser("bench", help="batch benchmark over seeds and p values")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--p-list", type=_positive_int_list, required=True)
    b.add_argument("--seeds", type=_seed_list, required=True, help="e.g. 1..10")
    b.add_argument("--csv", required=True)
    b.add_argument("--box", type=float, default=100.0)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--method", choices=METHODS, default="auto")
    b.add_argument("--no-times", action="store_true",
                   help="leave timing columns empty (byte-reproducible output)")

    o = sub.add_parser("oracle", help="compare against the exact optimum (small n)")
    o.add_argument("--in", dest="inp", required=True)
    o.add_argument("--p", type=int, required=True)
    o.add_argument("--max-n", type=int, default=OracleLimitConfig().max_n_hpmp)
    return parser


def _cmd_gen(args, parser):
    if args.n < 3:
        parser.error("n must be ≥ 3")
    if not args.box > 0:
        parser.error("box must be > 0")
    inst = generate_euclidean(args.n, args.seed, args.box, name=args.name)
    try:
        save_instance(inst, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _load(path):
    try:
        return load_instance(path)
    except InstanceParseError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
    return None


def _append_csv(path, row, times=True):
    path = Path(path)
    new = not path.exists() or path.stat().st_size == 0
    with path.open("a", encoding="utf-8", newline="") as fh:
        fh.write(format_csv([row], header=new, times=times))


def _cmd_solve(args, parser):
    inst = _load(args.inp)
    if inst is None:
        return EXIT_IO
    code = EXIT_OK
    try:
        _, report = solve(inst, args.p, two_factor_method=args.method)
        row = row_from_report(inst, report, inst.seed)
    except AlgorithmInapplicableError as exc:
        print(f"algorithm inapplicable: {exc}", file=sys.stderr)
        row, code = failure_row(inst, args.p, exc), EXIT_INAPPLICABLE
    except InfeasibleProblemError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        row, code = failure_row(inst, args.p, exc), EXIT_INFEASIBLE
    times = not args.no_times
    sys.stdout.write(format_csv([row], times=times))
    if args.csv:
        try:
            _append_csv(args.csv, row, times)
        except OSError as exc:
            print(f"error: cannot write {args.csv}: {exc}", file=sys.stderr)
            return EXIT_IO
    return code


def _cmd_bench(args, parser):
    if args.n < 3:
        parser.error("n must be ≥ 3")
    if args.jobs < 1:
        parser.error("--jobs must be ≥ 1")
    rows = run_bench(args.n, args.p_list, args.seeds, box=args.box,
                     jobs=args.jobs, method=args.method)
    text = format_csv(rows, times=not args.no_times)
    try:
        Path(args.csv).write_text(text, encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write {args.csv}: {exc}", file=sys.stderr)
        return EXIT_IO
    sys.stdout.write(text)
    return EXIT_OK


def _cmd_oracle(args, parser):
    inst = _load(args.inp)
    if inst is None:
        return EXIT_IO
    limits = OracleLimitConfig(max_n_hpmp=args.max_n)
    if inst.n > limits.max_n_hpmp:
        print(f"error: n={inst.n} exceeds oracle limit {limits.max_n_hpmp}", file=sys.stderr)
        return EXIT_USAGE
    try:
        exact = brute_hpmp(inst, args.p, limits)
    except InfeasibleProblemError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OracleLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"exact_optimum {exact.weight:.10f}")
    try:
        _, report = solve(inst, args.p)
    except AlgorithmInapplicableError as exc:
        print(f"approximation inapplicable: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    print(f"two_factor_lb {report.lb:.10f}")
    print(f"approximation {report.ub:.10f}")
    print(f"branch {report.branch}")
    print(f"true_ratio {report.ub / exact.weight:.10f}")
    return EXIT_OK


COMMANDS = {"gen": _cmd_gen, "solve": _cmd_solve, "bench": _cmd_bench, "oracle": _cmd_oracle}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return COMMANDS[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
