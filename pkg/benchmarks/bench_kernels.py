"""Compare the Python and compiled search kernels.

Each instance is solved once to capture the kernel inputs (bound tables
included); the kernel is then timed alone on every backend.  End-to-end
solve times are reported as well, since setup is shared by both backends.

    python3 benchmarks/bench_kernels.py [--sizes 10 12 14] [--trials 5]
"""
import argparse
import statistics
import sys
import time

from rotlabel import ModelConfig, available_backends, build_conflicts, kernels, solve
from rotlabel.io import generate_unit_squares


def capture_calls(cs, cfg, time_limit):
    calls = []
    orig = kernels.sweep_search

    def record(*args, **kw):
        calls.append((args, kw))
        return orig(*args, **kw)

    kernels.sweep_search = record
    try:
        solve(cs, cfg, time_limit)
    finally:
        kernels.sweep_search = orig
    return calls


def time_kernel(calls, backend):
    t = time.perf_counter()
    results = []
    for args, kw in calls:
        kw = dict(kw, backend=backend)
        act, runs, rows, optimal, nodes = kernels.sweep_search(*args, **kw)
        results.append((round(act, 9), optimal))
    return time.perf_counter() - t, results


def run(sizes, trials, side, models, time_limit):
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    cols = [f"kernel {b}" for b in backends] + [f"solve {b}" for b in backends]
    print(f"{'n':>3} {'model':<10} " + " ".join(f"{c:>14}" for c in cols) + f" {'kernel x':>9}")
    for n in sizes:
        for tag in models:
            cfg = ModelConfig.parse(*tag.split("/"))
            kern = {b: [] for b in backends}
            full = {b: [] for b in backends}
            for seed in range(trials):
                cs = build_conflicts(generate_unit_squares(n, side, seed=1000 + seed))
                calls = capture_calls(cs, cfg, time_limit)
                seen = {}
                for b in backends:
                    dt, res = time_kernel(calls, b)
                    kern[b].append(dt)
                    seen[b] = res
                    t = time.perf_counter()
                    solve(cs, cfg, time_limit, backend=b)
                    full[b].append(time.perf_counter() - t)
                proven = [r for r in seen.values() if all(ok for _, ok in r)]
                if len(proven) > 1 and any(r != proven[0] for r in proven):
                    print(f"  backends disagree: n={n} {tag} seed {seed}", file=sys.stderr)
            km = {b: statistics.median(v) for b, v in kern.items()}
            fm = {b: statistics.median(v) for b, v in full.items()}
            speed = f"{km['python'] / km['cython']:9.1f}" if "cython" in km and km["cython"] > 0 else f"{'-':>9}"
            vals = [km[b] for b in backends] + [fm[b] for b in backends]
            print(f"{n:>3} {tag:<10} " + " ".join(f"{v:14.4f}" for v in vals) + f" {speed}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12, 14])
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--side", type=float, default=4.0)
    ap.add_argument("--models", nargs="+", default=["kR:1/soft", "kR:2/hard", "kR:3/soft"])
    ap.add_argument("--time-limit", type=float, default=60.0)
    args = ap.parse_args(argv)
    run(args.sizes, args.trials, args.side, args.models, args.time_limit)


if __name__ == "__main__":
    main()
