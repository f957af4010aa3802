"""Benchmark the compiled kernels against the pure-Python twins.

Run as `python -m gridpos.bench` (add --quick for smaller workloads).
Each workload is executed on every importable backend; results are checked
for agreement and wall times reported with the speedup factor.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from .constructions import moment_curve
from .kernels import available_backends
from .points import full_grid


def _workloads(quick: bool):
    census_grid = full_grid(4 if quick else 5, 3)
    census_pts = np.array(census_grid.points, dtype=np.int64)
    curve = moment_curve(3, 31 if quick else 61)
    curve_pts = np.array(curve.points, dtype=np.int64)
    plane = full_grid(8 if quick else 12, 2)
    plane_pts = np.array(plane.points, dtype=np.int64)
    return [
        (
            f"4-point census of [{census_grid.side}]^3 (k=2)",
            lambda mod: mod.census_scan(census_pts, 2, 0, len(census_pts), False)[:2],
        ),
        (
            f"hyperplane scan of the {len(curve)}-point power curve (d=3)",
            lambda mod: mod.count_low_rank(curve_pts, 4, 2, 0, len(curve_pts)),
        ),
        (
            f"collinear 4-point count in [{plane.side}]^2",
            lambda mod: mod.count_low_rank(plane_pts, 4, 1, 0, len(plane_pts)),
        ),
    ]


def run(quick: bool = False) -> int:
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    if len(backends) < 2:
        print("compiled extension not importable; nothing to compare")
    failures = 0
    for name, fn in _workloads(quick):
        print(f"\n{name}")
        timings = {}
        results = {}
        for backend, mod in backends.items():
            t0 = time.perf_counter()
            results[backend] = fn(mod)
            timings[backend] = time.perf_counter() - t0
            print(f"  {backend:>8}: {timings[backend]:8.3f}s  -> {results[backend]}")
        if len(set(map(str, results.values()))) != 1:
            print("  MISMATCH between backends")
            failures += 1
        elif "compiled" in timings and "python" in timings and timings["compiled"] > 0:
            print(f"  speedup: {timings['python'] / timings['compiled']:.1f}x")
    return 1 if failures else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args(argv)
    return run(quick=args.quick)


if __name__ == "__main__":
    raise SystemExit(main())
