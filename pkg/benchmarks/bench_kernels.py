"""Timing comparison of the two quadrature-kernel lanes.

Run:  python3 benchmarks/bench_kernels.py [n] [repeats]

The hot spot of a production run is the pairwise interaction sum behind the
phase-correction accumulator, so that is what gets timed: once through the
compiled lane and once through the pure-numpy fallback, on an accumulator
workload shaped like the reference configuration.
"""

import sys
import time

import numpy as np

from frachartree import kernels
from frachartree.scattering import PhaseAccumulator
from frachartree.spectral import Grid


def _workload(n):
    g = Grid(n, n / 2.0)
    vhat = (0.05 * (2 * np.pi) ** 1.5 * np.exp(-g.xi2 / 2.0)).astype(np.complex128)
    return g, vhat


def _time_accumulate(g, vhat, repeats):
    acc = PhaseAccumulator(g, 1.8, 8.0)
    acc.accumulate(vhat, 1.0, 0.5)  # warm-up (jit compile, caches)
    t0 = time.perf_counter()
    for k in range(repeats):
        acc.accumulate(vhat, 1.0 + 0.5 * k, 0.5)
    return (time.perf_counter() - t0) / repeats


def main(argv=None):
    args = sys.argv[1:] if argv is None else argv
    n = int(args[0]) if args else 64
    repeats = int(args[1]) if len(args) > 1 else 3

    g, vhat = _workload(n)
    saved = kernels.USE_NUMBA

    kernels.USE_NUMBA = True
    t_fast = _time_accumulate(g, vhat, repeats)
    kernels.USE_NUMBA = False
    t_slow = _time_accumulate(g, vhat, repeats)
    kernels.USE_NUMBA = saved

    print(f"grid n={n}, repeats={repeats}")
    print(f"compiled lane : {t_fast:9.4f} s per accumulate")
    print(f"numpy lane    : {t_slow:9.4f} s per accumulate")
    print(f"speedup       : {t_slow / t_fast:6.1f}x")


if __name__ == "__main__":
    main()
