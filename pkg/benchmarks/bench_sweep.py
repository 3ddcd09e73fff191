#!/usr/bin/env python3
"""Benchmark the compiled partition-sweep kernel against the pure fallback.

The sweep walks every partition of {1..m} (Bell(m) of them) and evaluates
the normalized surplus on a complete-graph counting table, which is the
hot loop behind ``skpin analyze`` on larger instances.  Both backends are
imported directly so one process can time them side by side.

Usage: python benchmarks/bench_sweep.py [--max-m 12] [--pure-max-m 10]
"""

import argparse
import time

from skpin import PinSource, _sweep_py
from skpin.generators import complete_uniform

try:
    from skpin import _sweep_c
except ImportError:
    _sweep_c = None


def bell(n: int) -> int:
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[-1]


def time_backend(backend, table, m) -> tuple[float, tuple]:
    start = time.perf_counter()
    result = backend.sweep_min(table, m, 2, 1)
    return time.perf_counter() - start, result[:3]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-m", type=int, default=12)
    parser.add_argument(
        "--pure-max-m",
        type=int,
        default=10,
        help="largest m to run on the pure backend (it is ~100x slower)",
    )
    args = parser.parse_args()

    if _sweep_c is None:
        print("compiled kernel not available; timing the pure backend only")

    print(f"{'m':>3} {'partitions':>12} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>8}")
    for m in range(8, args.max_m + 1):
        table = PinSource(complete_uniform(m, 2)).entropy_table()
        t_pure = res_pure = None
        if m <= args.pure_max_m:
            t_pure, res_pure = time_backend(_sweep_py, table, m)
        t_c = res_c = None
        if _sweep_c is not None:
            t_c, res_c = time_backend(_sweep_c, table, m)
        if res_pure is not None and res_c is not None and res_pure != res_c:
            raise SystemExit(f"backend mismatch at m={m}: {res_pure} vs {res_c}")
        speedup = f"{t_pure / t_c:8.1f}" if (t_pure and t_c) else "     n/a"
        pure_s = f"{t_pure:10.3f}" if t_pure is not None else "   skipped"
        comp_s = f"{t_c:13.3f}" if t_c is not None else "      missing"
        print(f"{m:>3} {bell(m) - 1:>12} {pure_s} {comp_s} {speedup}")


if __name__ == "__main__":
    main()
