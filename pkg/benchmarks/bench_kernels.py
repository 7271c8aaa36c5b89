"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--t 8192] [--repeat 7]

Prints the median wall time per call for each kernel and backend, the
speed-up, and the largest relative disagreement between the two.
"""

import argparse
import statistics
import time

import numpy as np

from marketeff import _pykernels
from marketeff.hurst import DMA_WINDOWS, dfa_scales

try:
    from marketeff import _ckernels
except ImportError:
    _ckernels = None


def median_time(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def cases(t, rng):
    path = np.cumsum(rng.standard_normal(t))
    scales = dfa_scales(t)
    windows = np.asarray(DMA_WINDOWS, dtype=np.int64)
    incr = np.sort(path[1:] - path[:-1])
    h = incr.size // 2 + 1
    k = h * (h - 1) // 2
    return {
        "dfa order 1": lambda m: m.dfa_fluctuations(path, scales, 1),
        "dfa order 2": lambda m: m.dfa_fluctuations(path, scales, 2),
        "dma": lambda m: m.dma_fluctuations(path, windows),
        "qn selection": lambda m: m.select_pairwise_difference(incr, k),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--t", type=int, default=8192, help="series length")
    parser.add_argument("--repeat", type=int, default=7)
    args = parser.parse_args()
    if _ckernels is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")

    print(f"T = {args.t}, median of {args.repeat} calls")
    print(f"{'kernel':<14}{'cython ms':>11}{'python ms':>11}{'speed-up':>10}{'max rel diff':>14}")
    for name, call in cases(args.t, np.random.default_rng(0)).items():
        fast = median_time(lambda: call(_ckernels), args.repeat)
        slow = median_time(lambda: call(_pykernels), args.repeat)
        a = np.atleast_1d(call(_ckernels))
        b = np.atleast_1d(call(_pykernels))
        diff = float(np.max(np.abs(a - b) / np.abs(b)))
        print(f"{name:<14}{fast * 1e3:>11.2f}{slow * 1e3:>11.2f}{slow / fast:>9.1f}x{diff:>14.1e}")


if __name__ == "__main__":
    main()
