"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N] [--size N]

Times each integer kernel on random numerators (int64-sized and big-int),
then the end-to-end integration workload.
"""

import argparse
import time

import numpy as np

from initial_integrals import _kernels_py


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def kernel_cases(size, big):
    rng = np.random.default_rng(0)
    scale = 10**30 if big else 1
    a = tuple(int(x) * scale for x in rng.integers(-1000, 1000, size))
    b = tuple(int(x) for x in rng.integers(-1000, 1000, size))
    return {
        "dot": lambda m: m.dot(a, b),
        "prefix_sums": lambda m: m.prefix_sums(a),
        "repeat_each": lambda m: m.repeat_each(a, 4),
        "pairs_equal": lambda m: m.pairs_equal(m.repeat_each(a, 2)),
        "sum_abs": lambda m: m.sum_abs(a),
        "power_sum": lambda m: m.power_sum(a, 2.5),
        "lincomb": lambda m: m.lincomb([(3, a), (-2, b)], size),
    }


def workload(repeat):
    """1e4 random steps through the compiled integration table."""
    from initial_integrals import universal as uni
    from initial_integrals.generators import random_step, rng_for

    table = uni.compile_theta(uni.mean_target(), 12)

    def run():
        rng = rng_for(1)
        for _ in range(10_000):
            uni.apply_universal(table, random_step(rng, 12))

    return _time(run, repeat)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=1 << 14)
    args = ap.parse_args(argv)

    try:
        from initial_integrals import _kernels as compiled
    except ImportError:
        print("compiled extension not built; only the fallback is available")
        return 1

    print(f"{'kernel':<14}{'ints':<6}{'compiled (ms)':>15}{'python (ms)':>14}{'speedup':>10}")
    for big in (False, True):
        for name, case in kernel_cases(args.size, big).items():
            tc = _time(lambda: case(compiled), args.repeat) * 1e3
            tp = _time(lambda: case(_kernels_py), args.repeat) * 1e3
            print(f"{name:<14}{'big' if big else 'i64':<6}{tc:>15.3f}{tp:>14.3f}{tp / tc:>9.1f}x")

    # end to end: swap the selected backend in place
    from initial_integrals import kernels

    names = ["dot", "prefix_sums", "repeat_each", "pairs_equal", "max_abs", "sum_abs",
             "power_sum", "power_sum_complex", "lincomb"]
    saved = {n: getattr(kernels, n) for n in names}
    t_comp = workload(max(1, args.repeat // 2))
    for n in names:
        setattr(kernels, n, getattr(_kernels_py, n))
    try:
        t_pure = workload(max(1, args.repeat // 2))
    finally:
        for n, fn in saved.items():
            setattr(kernels, n, fn)
    print(f"\nintegration workload (1e4 steps, level <= 12): compiled {t_comp:.2f} s, "
          f"python {t_pure:.2f} s, speedup {t_pure / t_comp:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
