"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from interpsub import _kernels_py as py

try:
    from interpsub import _kernels as cy
except ImportError:
    cy = None


def cases(rng):
    q = rng.normal(size=(4097, 2))
    mask = np.array([-1, 0, 9, 16, 9, 0, -1]) / 16.0
    yield "refine 4097x2, 7 taps", lambda m: m.refine_upsampled(q, mask, -3, True)
    q1 = rng.normal(size=(65, 1))
    wide = rng.normal(size=23)
    yield "refine 65x1, 23 taps", lambda m: m.refine_upsampled(q1, wide, -11, False)
    x = np.repeat(rng.normal(size=4) + 1j * rng.normal(size=4), 3)
    start = np.repeat(np.arange(0, 12, 3), 3).astype(np.int64)
    t = rng.normal(size=12) + 0j
    yield "newton 12 nodes (4x3)", lambda m: m.newton_coefficients(x, t, start)
    a = rng.normal(size=12) + 0j
    yield "newton->monomial 12", lambda m: m.newton_to_monomial(x, a)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':28s} {'python us':>11s} {'compiled us':>12s} {'speedup':>8s}")
    for name, fn in cases(rng):
        t_py = min(timeit.repeat(lambda: fn(py), number=args.repeat, repeat=3)) / args.repeat * 1e6
        if cy is None:
            print(f"{name:28s} {t_py:11.1f} {'n/a':>12s}")
            continue
        assert np.allclose(fn(py), fn(cy))
        t_cy = min(timeit.repeat(lambda: fn(cy), number=args.repeat, repeat=3)) / args.repeat * 1e6
        print(f"{name:28s} {t_py:11.1f} {t_cy:12.1f} {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
