"""Compare the numba and numpy kernel paths.

    python benchmarks/bench_kernels.py

Kernel timings use both paths in one process; the end-to-end fig1 sweep is
run in subprocesses with ``DDSENSE_NUMBA`` set to 1 and 0.
"""

import os
import subprocess
import sys
import timeit

import numpy as np

from ddsense.kernels import exp_sum_table

SWEEP = """
import time
t0 = time.perf_counter()
from ddsense.sweep import load_scenario, run_sweep
from ddsense.kernels import backend
spec = load_scenario('fig1')
run_sweep(spec)
t1 = time.perf_counter()
for _ in range(5):
    run_sweep(spec)
t2 = time.perf_counter()
print(f'{backend():>6}: first sweep (incl. import/JIT) {t1 - t0:.3f}s, warm sweep {(t2 - t1) / 5 * 1e3:.1f} ms')
"""


def bench_tables():
    rng = np.random.default_rng(0)
    print("exp_sum_table, Z x Z phase table, full-range sum with weight i")
    for Z in (12, 24, 64, 128):
        phi = rng.uniform(-Z, Z, size=(Z, Z))
        exp_sum_table(phi, Z, 0, Z - 1, 0.0, 1.0, use_numba=True)  # compile
        row = []
        for use in (True, False):
            n = max(3, 2000 // Z)
            t = min(timeit.repeat(lambda: exp_sum_table(phi, Z, 0, Z - 1, 0.0, 1.0, use_numba=use), number=n, repeat=3)) / n
            row.append(t)
        print(f"  Z={Z:4d}  numba {row[0] * 1e6:9.1f} us   numpy {row[1] * 1e6:9.1f} us   ratio {row[1] / row[0]:5.2f}")


def bench_sweep():
    print("fig1 sweep (4 schemes x 3 SCS, M=N=12)")
    for flag in ("1", "0"):
        env = dict(os.environ, DDSENSE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", SWEEP], env=env, capture_output=True, text=True, check=True)
        print("  " + out.stdout.strip())


if __name__ == "__main__":
    bench_tables()
    bench_sweep()
