#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from hexblur import _backend, _kernels_py
from hexblur.blur import BlurParams, build_stencil

try:
    from hexblur import _kernels
except ImportError:
    _kernels = None


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_assign(backend, n, repeats):
    rng = np.random.default_rng(0)
    u = rng.uniform(-100, 100, n)
    v = rng.uniform(-100, 100, n)
    return timeit(lambda: backend.assign_points(u, v), repeats)


def bench_gather(backend, n_bins, sigma, repeats):
    rng = np.random.default_rng(1)
    q = rng.integers(-200, 200, n_bins)
    r = rng.integers(-200, 200, n_bins)
    keys = np.unique(_backend.pack_keys(q, r))
    vals = rng.uniform(0.1, 5.0, keys.shape[0])
    stencil = build_stencil(BlurParams(sigma, sigma / 2))
    cand = _backend.dilate_keys(keys, stencil._off_keys)
    return timeit(lambda: backend.gather_convolve(
        cand, keys, vals, stencil._off_keys, stencil._weights), repeats), len(cand), len(stencil)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.append(("compiled", _kernels))
    else:
        print("compiled backend not built; showing fallback only")

    print(f"{'kernel':<34} " + " ".join(f"{name:>12}" for name, _ in backends)
          + ("      speedup" if len(backends) == 2 else ""))
    for n in (10_000, 100_000, 1_000_000):
        times = [bench_assign(b, n, args.repeats) for _, b in backends]
        row = f"{'assign_points n=%d' % n:<34} " + \
              " ".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:>9.1f}x"
        print(row)
    for n_bins, sigma in ((1_000, 2.0), (10_000, 2.0), (10_000, 4.0)):
        results = [bench_gather(b, n_bins, sigma, args.repeats) for _, b in backends]
        times = [r[0] for r in results]
        n_cand, n_st = results[0][1], results[0][2]
        label = f"gather bins={n_bins} stencil={n_st}"
        row = f"{label:<34} " + " ".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:>9.1f}x"
        print(row + f"   ({n_cand} outputs)")


if __name__ == "__main__":
    main()
