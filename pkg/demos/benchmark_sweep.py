"""A short schema-size sweep with a per-run timeout, written as CSV to stdout.

Usage: python3 demos/benchmark_sweep.py [timeout_secs]
"""

import sys

from rulescope.genbench import GenParams, run_bench, write_csv

timeout = float(sys.argv[1]) if len(sys.argv) > 1 else 10.0
grid = [GenParams.fig1(n, seed=0) for n in (10, 20, 30, 40, 60, 100, 200)]


def progress(row):
    state = "timeout" if row.timed_out else f"{row.elapsed_ms:.1f} ms"
    print(f"# {row.method:8} |S|={row.params.n_s:<4} {state}", file=sys.stderr)


write_csv(run_bench(grid, repetitions=2, timeout=timeout, progress=progress), sys.stdout)
