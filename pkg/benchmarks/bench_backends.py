"""Time each kernel under the numba and numpy backends.

    python3 benchmarks/bench_backends.py [--repeat 5] [--n 8]

The numba timings exclude compilation (one warm-up call per kernel).
"""
import argparse
import math
import time

import numpy as np

from favard import kernels
from favard.cantor import DEFAULT_CONFIG, AngleParams, child_offsets


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(n):
    rng = np.random.default_rng(0)
    theta = 0.37
    c, s = math.cos(theta), math.sin(theta)
    offs = np.sort(np.array([0, 3 * c, -3 * s, 3 * c - 3 * s]) / 4)

    # a realistic component list: generation n - 1 of the projection
    lefts, rights = np.array([-s]), np.array([c])
    for _ in range(n - 1):
        lefts, rights = kernels.replicate_union_np(lefts, rights, offs, 0.25, 1e-12)

    raw_l = np.sort(rng.uniform(0, 100, 200000))
    raw_r = raw_l + rng.uniform(0, 1e-3, raw_l.size)

    a = AngleParams(theta)
    S = 100000
    xs = rng.uniform(-0.5, 1.0, S)
    W = np.ascontiguousarray(np.broadcast_to(child_offsets(DEFAULT_CONFIG, a), (S, 4)))
    c0 = np.full(S, 0.5 * (a.cos - a.sin))
    half0 = np.full(S, 0.5 * a.sigma)
    sides = 4.0 ** -np.arange(n + 2)

    lams = rng.normal(0, 1e3, 4096)
    return {
        "merge_sorted": lambda k: k(raw_l, raw_r, 1e-12),
        "replicate_union": lambda k: k(lefts, rights, offs, 0.25, 1e-12),
        "leaf_counts": lambda k: k(xs, c0, W, half0, sides, n, False),
        "crowding_sums": lambda k: k(lams, 16.0),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=8, help="generation used to size the inputs")
    args = ap.parse_args(argv)
    print(f"{'kernel':<18}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, call in cases(args.n).items():
        fast = best_of(lambda: call(getattr(kernels, name + "_nb")), args.repeat)
        slow = best_of(lambda: call(getattr(kernels, name + "_np")), args.repeat)
        print(f"{name:<18}{fast:>12.4g}{slow:>12.4g}{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
