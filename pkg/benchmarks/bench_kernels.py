"""Time the compiled evaluation kernels against the NumPy fallback.

Run as a script::

    python3 benchmarks/bench_kernels.py [--repeat N]

Workloads are shaped like the fills a real solve performs: truncated-power
sums over long point vectors and dilated-translate matrix tabulation.  The
two backends are checked for agreement before anything is timed.
"""

import argparse
import statistics
import time

import numpy as np

from fracspline import _kernels_np
from fracspline.bspline import FractionalBSpline

try:
    from fracspline import _kernels_cy
except ImportError:
    _kernels_cy = None


def _timeit(fn, repeat):
    best = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best.append(time.perf_counter() - t0)
    return statistics.median(best)


def _workloads():
    sp = FractionalBSpline(3.5)
    w = sp.value_weights
    cut = float(sp.effective_support)
    rng = np.random.default_rng(0)

    u = rng.uniform(-1.0, cut + 1.0, size=200_000)
    yield (
        "power sum, 200k points",
        lambda k: k.truncated_power_sum(u, w, 3.5, cut),
    )

    t_coll = np.linspace(0.0, 1.0, 4096)
    yield (
        "collocation fill, 4096 x 200",
        lambda k: k.basis_matrix(t_coll, 64.0, -9.0, 200, w, 3.5, cut),
    )

    t_eval = rng.uniform(0.0, 1.0, size=100_000)
    yield (
        "evaluation fill, 100k x 40",
        lambda k: k.basis_matrix(t_eval, 32.0, -9.0, 40, w, 3.5, cut),
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, help="timing repeats (median)")
    args = parser.parse_args()

    if _kernels_cy is None:
        print("compiled backend not available; timing the NumPy fallback only")

    header = f"{'workload':<28} {'numpy':>10}"
    if _kernels_cy is not None:
        header += f" {'cython':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))

    for name, run in _workloads():
        if _kernels_cy is not None:
            ref = run(_kernels_np)
            diff = np.abs(run(_kernels_cy) - ref).max()
            if diff > 1e-12:
                raise SystemExit(f"{name}: backends disagree by {diff:.2e}")
        t_np = _timeit(lambda: run(_kernels_np), args.repeat)
        line = f"{name:<28} {t_np * 1e3:>8.2f}ms"
        if _kernels_cy is not None:
            t_cy = _timeit(lambda: run(_kernels_cy), args.repeat)
            line += f" {t_cy * 1e3:>8.2f}ms {t_np / t_cy:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
