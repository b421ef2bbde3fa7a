"""Compare the compiled and numpy iteration kernels.

Usage: python benchmarks/bench_kernels.py [--repeat R]
"""
import argparse
import timeit

import numpy as np

from unitscale import _kernel_py
from unitscale.haar import sample_unitaries

try:
    from unitscale import _kernel_c
except ImportError:
    _kernel_c = None


def bench_run_steps(mod, U, steps, repeat):
    n = U.shape[0]
    psi, res = np.empty(steps), np.empty(steps)

    def go():
        mod.run_steps(U.copy(), np.zeros(n), np.zeros(n), steps, 0.0, psi, res)

    return min(timeit.repeat(go, number=1, repeat=repeat))


def bench_batch(mod, Us, steps, repeat):
    out = np.empty((Us.shape[0], steps + 1))
    return min(timeit.repeat(lambda: mod.batch_psi(Us.copy(), steps, out), number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernel_c is None:
        print("compiled kernel not built; nothing to compare")
        return
    print(f"{'case':<28}{'python':>12}{'cython':>12}{'speedup':>10}")
    for n in (3, 8, 32):
        U = sample_unitaries(n, 1, seed=0)[0]
        tp = bench_run_steps(_kernel_py, U, 1000, args.repeat)
        tc = bench_run_steps(_kernel_c, U, 1000, args.repeat)
        print(f"{f'run_steps n={n} x1000':<28}{tp * 1e3:>10.2f}ms{tc * 1e3:>10.2f}ms{tp / tc:>9.1f}x")
    for n in (3, 4):
        Us = sample_unitaries(n, 1000, seed=0)
        tp = bench_batch(_kernel_py, Us, 100, args.repeat)
        tc = bench_batch(_kernel_c, Us, 100, args.repeat)
        print(f"{f'batch_psi n={n} 1000x100':<28}{tp * 1e3:>10.2f}ms{tc * 1e3:>10.2f}ms{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
