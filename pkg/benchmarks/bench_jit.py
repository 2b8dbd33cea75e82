"""Compare the numba kernels with the pure-Python fallback.

Each backend runs in its own interpreter because the switch is read at
import time. Usage::

    python benchmarks/bench_jit.py [--n 30] [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def measure(n, repeat):
    from hpmp._jit import backend_name
    from hpmp.approx import solve
    from hpmp.instance import generate_euclidean
    from hpmp.matching import solve_with_duals
    from hpmp.twofactor import build_gadget

    # one warm-up pass so compilation (or cache loading) is not timed
    solve(generate_euclidean(12, 0), 2)

    def best_of(fn):
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            times.append(time.perf_counter() - t0)
        return min(times)

    inst = generate_euclidean(n, 1)
    gadget = build_gadget(inst)
    big = generate_euclidean(5 * n, 1)
    return {
        "backend": backend_name(),
        "gadget_matching_s": best_of(lambda: solve_with_duals(gadget.graph)),
        "gadget_vertices": gadget.graph.vertex_count,
        "solve_full_s": best_of(lambda: solve(inst, 2, two_factor_method="full")),
        "solve_pricing_s": best_of(lambda: solve(big, 10, two_factor_method="pricing")),
        "pricing_n": 5 * n,
    }


def run_child(disable_jit, n, repeat):
    env = dict(os.environ)
    env["HPMP_DISABLE_JIT"] = "1" if disable_jit else "0"
    out = subprocess.run(
        [sys.executable, __file__, "--child", "--n", str(n), "--repeat", str(repeat)],
        env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        print(json.dumps(measure(args.n, args.repeat)))
        return
    fast = run_child(False, args.n, args.repeat)
    slow = run_child(True, args.n, args.repeat)
    print(f"n={args.n}, gadget |V''|={fast['gadget_vertices']}, pricing n={fast['pricing_n']}")
    print(f"{'phase':<18}{fast['backend']:>10}{slow['backend']:>10}{'speedup':>10}")
    for key in ("gadget_matching_s", "solve_full_s", "solve_pricing_s"):
        a, b = fast[key], slow[key]
        print(f"{key:<18}{a:>10.3f}{b:>10.3f}{b / a:>9.1f}x")


if __name__ == "__main__":
    main()
