"""Compare the compiled and numpy kernels.

Run with ``python3 benchmarks/bench_kernels.py``. Reports per-call timings for
one quadrature panel, a full chi evaluation and a batch of Monte-Carlo
weights, together with the largest relative difference between backends.
"""
import argparse
import math
import timeit

import numpy as np

from relqsl import _kernels
from relqsl._kernels import _pykernels
from relqsl.numerics import DEFAULT_TOLERANCE, Tolerance, adaptive_2d
from relqsl.relativity import TRUNCATION


def chi_with(panel, K, W, alpha, tol=DEFAULT_TOLERANCE):
    pre = W * W / math.sqrt(math.pi)
    res = adaptive_2d(
        lambda u0, u1, v0, v1: panel(u0, u1, v0, v1, K, W, alpha),
        (-TRUNCATION, TRUNCATION),
        (0.0, TRUNCATION),
        Tolerance(tol.rel, tol.abs / pre),
        initial=(8, 4),
    )
    return pre * res.value


def best_of(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--samples", type=int, default=100_000)
    args = parser.parse_args()

    if _kernels.BACKEND != "cython":
        print("compiled kernels not built; only the numpy backend is available")
        return
    from relqsl._kernels import _ckernels

    rng = np.random.default_rng(0)
    q = rng.normal(size=(args.samples, 3)) * 10
    cases = [
        ("panel K=100 W=30 a=2", lambda m: m.chi_panel(-1.0, 0.0, 0.5, 1.5, 100.0, 30.0, 2.0)),
        ("chi K=100 W=30 a=2", lambda m: chi_with(m.chi_panel, 100.0, 30.0, 2.0)),
        ("chi K=0.01 W=4 a=inf", lambda m: chi_with(m.chi_panel, 0.01, 4.0, math.inf)),
        (f"mc weights n={args.samples}", lambda m: m.chi_mc_values(q, 5.0)),
    ]
    print(f"{'case':<28}{'cython':>12}{'numpy':>12}{'speedup':>10}{'max rel diff':>15}")
    for name, fn in cases:
        tc = best_of(lambda: fn(_ckernels), args.repeat)
        tp = best_of(lambda: fn(_pykernels), args.repeat)
        a, b = np.atleast_1d(fn(_ckernels)), np.atleast_1d(fn(_pykernels))
        diff = float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))
        print(f"{name:<28}{tc * 1e3:>10.3f}ms{tp * 1e3:>10.3f}ms{tp / tc:>9.1f}x{diff:>15.2e}")


if __name__ == "__main__":
    main()
