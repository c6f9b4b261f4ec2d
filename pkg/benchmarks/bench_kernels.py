#!/usr/bin/env python3
"""Time the jitted kernels against the pure-numpy fallback.

Run from the repository root:

    python benchmarks/bench_kernels.py

The power-sum benchmark mirrors a quadrature panel evaluation (a 21-term
fractional series on blocks of Gauss nodes); the RK4 benchmark mirrors the
h = 1e-4 reference sweep.
"""

import time

import numpy as np

from fobw import kernels


def best_of(fn, repeats=5):
    timings = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        timings.append(time.perf_counter() - start)
    return min(timings)


def bench_powsum():
    rng = np.random.default_rng(0)
    coeffs = rng.normal(0.0, 3.0, 21)
    exps = np.sort(rng.uniform(0.0, 6.0, 21))
    exps[0] = 0.0
    ts = rng.uniform(0.0, 1.0, 64 * 256)

    rows = [("power-sum batch (21 terms x 16384 points)", None)]
    t_np = best_of(lambda: kernels.eval_powsum_batch_numpy(coeffs, exps, ts))
    rows.append(("  numpy", t_np))
    if kernels.NUMBA_AVAILABLE:
        kernels.eval_powsum_batch_numba(coeffs, exps, ts[:4])  # compile
        t_nb = best_of(lambda: kernels.eval_powsum_batch_numba(coeffs, exps, ts))
        rows.append(("  numba", t_nb))
        rows.append(("  speedup", t_np / t_nb))
    return rows


def bench_rk4():
    n = 10_000
    h = 1.0 / n
    times = np.linspace(0.0, 1.0, n + 1)
    phi_nodes = 0.5 * np.cos(0.79 * times)
    phi_half = 0.5 * np.cos(0.79 * (times[:-1] + 0.5 * h))
    args = (1.0, 0.0, h, 0.1, 0.5, 0.5, phi_nodes, phi_half)

    rows = [("rk4 sweep (10k steps)", None)]
    t_np = best_of(lambda: kernels.rk4_sweep_numpy(*args))
    rows.append(("  numpy", t_np))
    if kernels.NUMBA_AVAILABLE:
        kernels.rk4_sweep_numba(1.0, 0.0, 0.5, 0.1, 0.5, 0.5, phi_nodes[:3], phi_half[:2])
        t_nb = best_of(lambda: kernels.rk4_sweep_numba(*args))
        rows.append(("  numba", t_nb))
        rows.append(("  speedup", t_np / t_nb))
    return rows


def main():
    print(f"numba available: {kernels.NUMBA_AVAILABLE}, selected: "
          f"{'numba' if kernels.USING_NUMBA else 'numpy'}")
    for rows in (bench_powsum(), bench_rk4()):
        for label, value in rows:
            if value is None:
                print(label)
            elif label.strip() == "speedup":
                print(f"{label}: {value:.1f}x")
            else:
                print(f"{label}: {value * 1e3:8.3f} ms")


if __name__ == "__main__":
    main()
