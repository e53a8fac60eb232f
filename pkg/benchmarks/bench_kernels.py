"""Compare the compiled and pure-Python kernels.

Run with ``python benchmarks/bench_kernels.py``.  Prints the median time of
each kernel under both backends and the speed-up.
"""

import timeit

import numpy as np

from fdesolve import _pykernels

try:
    from fdesolve import _ckernels
except ImportError:
    _ckernels = None

EPS, K_MAX = 1e-16, 2000


def cases():
    rng = np.random.default_rng(0)
    z = rng.uniform(-3, 3, 2000) + 1j * rng.uniform(-3, 3, 2000)
    f = rng.normal(size=4000)
    b = rng.uniform(0.1, 1.0, 4000)
    a0 = rng.uniform(0.1, 1.0, 4000)
    return [
        ("ml_sum alpha=0.5 z=-4+1j", lambda m: m.ml_sum(0.5, -4.0, 1.0, EPS, K_MAX), 200),
        ("ml_sum_dd alpha=0.3 z=-3", lambda m: m.ml_sum_dd(0.3, -3.0, 0.0, EPS, K_MAX), 20),
        ("ml_array alpha=0.6 2000 pts", lambda m: m.ml_array(0.6, z, EPS, K_MAX), 3),
        ("pi_convolve n=4000", lambda m: m.pi_convolve(f, b, a0), 3),
    ]


def median_time(fn, number):
    runs = timeit.repeat(fn, number=number, repeat=5)
    return sorted(runs)[2] / number


def main():
    if _ckernels is None:
        print("compiled extension not built; only the Python backend is available")
    print(f"{'kernel':32s} {'python':>12s} {'cython':>12s} {'speed-up':>9s}")
    for name, call, number in cases():
        tp = median_time(lambda: call(_pykernels), number)
        if _ckernels is None:
            print(f"{name:32s} {tp * 1e3:10.3f}ms {'-':>12s} {'-':>9s}")
            continue
        tc = median_time(lambda: call(_ckernels), number)
        print(f"{name:32s} {tp * 1e3:10.3f}ms {tc * 1e3:10.3f}ms {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
