#!/usr/bin/env python3
"""Timing harness for the grid kernels: compiled loops vs the numpy reference.

The package dispatches its hot grid evaluations through
:mod:`epresolve.kernels`, which compiles the inner loops with numba when
available and falls back to vectorized numpy otherwise (or when
``EPRESOLVE_NO_NUMBA=1`` is set).  This script times both implementations on
representative workloads and checks that they agree to rounding.

    python3 benchmarks/bench_kernels.py [--nk 2048] [--nx 512] [--repeats 5]

Under ``EPRESOLVE_NO_NUMBA=1`` only the reference column is populated, which
doubles as a check that the fallback dispatch is wired up.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from epresolve import kernels
from epresolve.boundary import BoundaryModel, bm_scatter


def best_of(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nk", type=int, default=2048, help="spectral grid points")
    ap.add_argument("--nx", type=int, default=512, help="coordinate grid points")
    ap.add_argument("--repeats", type=int, default=5, help="timing repeats (best kept)")
    args = ap.parse_args()

    k = np.linspace(-40.0, 40.0, args.nk)
    x = np.linspace(-30.0, 30.0, args.nx)
    z = 1j

    F = bm_scatter(BoundaryModel(3))
    ms, ps, cs = F.to_term_arrays()
    scale = (2.0 * math.pi) ** (-0.5 * F.unit_pow)
    el_args = (ms, ps, cs, F.phase_x, F.phase_z, scale, k, x, z)
    psi_args = (k, x, 1.0, z, False)

    workloads = [
        ("laurent-grid", kernels.el_eval_grid_numpy, kernels.el_eval_grid, el_args),
        ("interior-psi", kernels.interior_psi_grid_numpy, kernels.interior_psi_grid, psi_args),
    ]

    print(f"grid {args.nk} x {args.nx}, best of {args.repeats}")
    print(f"numba available: {kernels.NUMBA_AVAILABLE}, enabled: {kernels.NUMBA_ENABLED}")
    print(f"{'kernel':<14}{'numpy [ms]':>12}{'compiled [ms]':>15}{'speedup':>9}{'max |diff|':>12}")
    for name, reference, dispatched, call_args in workloads:
        t_ref = best_of(lambda: reference(*call_args), args.repeats)
        if kernels.NUMBA_ENABLED:
            ref_out = reference(*call_args)
            jit_out = dispatched(*call_args)  # first call compiles
            diff = float(np.max(np.abs(ref_out - jit_out)))
            t_jit = best_of(lambda: dispatched(*call_args), args.repeats)
            print(
                f"{name:<14}{t_ref * 1e3:>12.2f}{t_jit * 1e3:>15.2f}"
                f"{t_ref / t_jit:>8.1f}x{diff:>12.2e}"
            )
        else:
            print(f"{name:<14}{t_ref * 1e3:>12.2f}{'n/a':>15}{'n/a':>9}{'n/a':>12}")


if __name__ == "__main__":
    main()
