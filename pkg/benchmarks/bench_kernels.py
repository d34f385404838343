#!/usr/bin/env python3
"""Compare the compiled and pure-NumPy kernel backends.

Times a figure-scale coherent run and its Markov counterpart under dense
and sparse observable recording, and reports how closely the two backends
agree. Run directly:

    python benchmarks/bench_kernels.py [--steps 2000] [--half-width 2064]
"""

import argparse
import math
import time

import numpy as np

from momentum_walk import Omega
from momentum_walk import _kernels_py

try:
    from momentum_walk import _kernels
except ImportError:
    _kernels = None


def _initial(n, half_width):
    a = np.zeros(n, dtype=np.complex128)
    b = np.zeros(n, dtype=np.complex128)
    a[half_width] = 1.0 / math.sqrt(2.0)
    b[half_width] = 1j / math.sqrt(2.0)
    return a, b


def _time(fn, repeats=3):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(steps, half_width):
    n = 2 * half_width + 1
    omega = Omega.two_pi(0.1)
    table = np.asarray(omega.phase_table(-half_width, half_width))
    print(f"lattice {n} sites, {steps} steps, drift two_pi=0.1")

    for label, stride in (("dense recording (stride 1)", 1),
                          ("sparse recording (final only)", steps)):
        rec = np.arange(stride, steps + 1, stride, dtype=np.int64)
        if rec[-1] != steps:
            rec = np.append(rec, steps)
        results = {}
        for name, mod in (("python", _kernels_py), ("compiled", _kernels)):
            if mod is None:
                continue
            out = np.empty((rec.shape[0], 6))

            def run(mod=mod, out=out):
                a, b = _initial(n, half_width)
                mod.evolve_coherent(a, b, table, -half_width, 0, rec, 1e-12, out)
                return a, b, out

            dt = _time(run)
            a, b, outv = run()
            results[name] = (dt, a, b, outv.copy())
            print(f"  coherent {label:30s} {name:9s} {dt * 1e3:8.1f} ms")
        if len(results) == 2:
            dt_p, a_p, b_p, out_p = results["python"]
            dt_c, a_c, b_c, out_c = results["compiled"]
            amp = max(np.abs(a_p - a_c).max(), np.abs(b_p - b_c).max())
            obs = np.abs(out_p - out_c).max()
            print(f"    speedup {dt_p / dt_c:4.1f}x | max amplitude gap {amp:.2e} "
                  f"| max observable gap {obs:.2e}")

    rec = np.arange(1, steps + 1, dtype=np.int64)
    results = {}
    for name, mod in (("python", _kernels_py), ("compiled", _kernels)):
        if mod is None:
            continue
        out = np.empty((rec.shape[0], 6))

        def run(mod=mod, out=out):
            F = np.zeros(n)
            F[half_width] = 1.0
            mod.markov_evolve(F, -half_width, 0, rec, 1e-12, out)
            return F, out

        dt = _time(run)
        F, outv = run()
        results[name] = (dt, F, outv.copy())
        print(f"  markov   dense recording             {name:9s} {dt * 1e3:8.1f} ms")
    if len(results) == 2:
        dt_p, F_p, out_p = results["python"]
        dt_c, F_c, out_c = results["compiled"]
        print(f"    speedup {dt_p / dt_c:4.1f}x | fields bit-identical: "
              f"{np.array_equal(F_p, F_c)} | max observable gap "
              f"{np.abs(out_p - out_c).max():.2e}")

    if _kernels is None:
        print("compiled backend unavailable; build the extension to compare")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--half-width", type=int, default=2064)
    args = ap.parse_args()
    bench(args.steps, args.half_width)
