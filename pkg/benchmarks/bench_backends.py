#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot paths:
- surface_jets: full second-order jets over a large parameter grid
- refine_pairs: Gauss-Newton refinement of near-coincident pairs

The numba columns include a warmup call so JIT compilation is not
counted. Run from the repository root: python benchmarks/bench_backends.py
"""

import math
import time

import numpy as np

from minsurf import _kernels_np as kernels_np
from minsurf import make_surface

try:
    from minsurf import _kernels_nb as kernels_nb

    HAS_NUMBA = True
except ImportError:
    kernels_nb = None
    HAS_NUMBA = False
    print("numba not installed; timing the numpy path only\n")


def time_call(fn, *args, repeats=5):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_jets(n=9, omega=1.0, side=512):
    spec = make_surface(n, omega)
    axis = np.linspace(-2.0, 2.0, side)
    uu, vv = np.meshgrid(axis, axis, indexing="ij")
    uu, vv = uu.ravel(), vv.ravel()
    args = (spec.n, spec.omega, spec.z_coefficient, 1.0, 0.0, uu, vv)

    print(f"surface_jets: degree {n}, {side}x{side} grid ({uu.size} points)")
    t_np = time_call(kernels_np.surface_jets, *args)
    print(f"  numpy : {t_np * 1e3:9.2f} ms")
    if HAS_NUMBA:
        kernels_nb.surface_jets(*args)  # warmup / JIT
        t_nb = time_call(kernels_nb.surface_jets, *args)
        print(f"  numba : {t_nb * 1e3:9.2f} ms   ({t_np / t_nb:.1f}x)")
    print()


def bench_refine(n=5, omega=1.0, pairs=4000):
    spec = make_surface(n, omega)
    rng = np.random.default_rng(1)
    ua = rng.uniform(-3.0, 3.0, pairs)
    va = rng.uniform(0.5, 3.0, pairs)
    ub = ua + rng.uniform(-0.05, 0.05, pairs)
    vb = -va + rng.uniform(-0.05, 0.05, pairs)
    args = (spec.n, spec.omega, spec.z_coefficient, 1.0, 0.0)

    print(f"refine_pairs: degree {n}, {pairs} candidate pairs")
    t_np = time_call(
        kernels_np.refine_pairs, *args, ua.copy(), va.copy(), ub.copy(), vb.copy()
    )
    print(f"  numpy : {t_np * 1e3:9.2f} ms")
    if HAS_NUMBA:
        kernels_nb.refine_pairs(*args, ua.copy(), va.copy(), ub.copy(), vb.copy())
        t_nb = time_call(
            kernels_nb.refine_pairs, *args, ua.copy(), va.copy(), ub.copy(), vb.copy()
        )
        print(f"  numba : {t_nb * 1e3:9.2f} ms   ({t_np / t_nb:.1f}x)")
    print()


if __name__ == "__main__":
    print("minsurf kernel backends benchmark")
    print("=" * 50)
    bench_jets(n=5, side=256)
    bench_jets(n=9, side=512)
    bench_refine(pairs=2000)
    bench_refine(pairs=8000)
