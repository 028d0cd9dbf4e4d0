#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallback.

Imports both backend modules directly (ignoring TRENDOPT_DISABLE_NUMBA), warms
the JIT, checks the backends agree bitwise on the benchmark inputs, then
reports per-call times. Usage::

    python benchmarks/bench_kernels.py [--dim 1000000] [--steps 30] [--repeat 5]
"""

import argparse
import time

import numpy as np

from trendopt.kernels import numpy_impl

try:
    from trendopt.kernels import numba_impl
except ImportError:
    numba_impl = None


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_optimizer_kernels(dim, steps, repeat):
    rng = np.random.default_rng(0)
    grad = rng.normal(size=dim)
    rows = []
    for name in ("sgd_step", "adagrad_step", "adam_step", "tom_step"):
        def runner(impl, name=name):
            fn = getattr(impl, name)

            def run():
                # fresh state every call so repeats are identical work and the
                # two backends can be compared bitwise
                params = np.zeros(dim)
                bufs = [np.zeros(dim) for _ in range(4)]
                accum = np.full(dim, 0.1)
                for t in range(1, steps + 1):
                    if name == "sgd_step":
                        params, _ = fn(params, grad, 0.001)
                    elif name == "adagrad_step":
                        params, _ = fn(params, grad, accum, 0.001, 1e-8)
                    elif name == "adam_step":
                        params, _, _ = fn(params, grad, bufs[0], bufs[1],
                                          0.001, 0.9, 0.999, 1e-8,
                                          1.0 - 0.9 ** t, 1.0 - 0.999 ** t)
                    else:
                        params, _, _, _ = fn(params, grad, bufs[0], bufs[1],
                                             bufs[2], bufs[3], 0.001, 0.9, 0.99,
                                             0.999, 1e-8,
                                             1.0 - 0.891 ** t, 1.0 - 0.999 ** t)
                return params

            return run

        np_run = runner(numpy_impl)
        t_np = time_call(np_run, repeat)
        if numba_impl is not None:
            nb_run = runner(numba_impl)
            nb_run()  # JIT warmup
            agree = np.array_equal(np_run(), nb_run())
            t_nb = time_call(nb_run, repeat)
            rows.append((name, t_np, t_nb, agree))
        else:
            rows.append((name, t_np, None, True))
    return rows


def bench_scans(n, repeat):
    rng = np.random.default_rng(1)
    y = rng.normal(size=n) + np.linspace(0, 5, n)
    s0 = rng.normal(size=12)
    gmat = rng.normal(loc=1.0, scale=0.5, size=(max(n // 20, 1000), 20))
    # note: the smoothing constants weight the PAST estimate here, so values
    # near 1 are the strongly-smoothed (and stable) regime for long series
    cases = [
        ("ses_scan", lambda impl: impl.ses_scan(y, 0.6, 0.0)),
        ("holt_scan", lambda impl: impl.holt_scan(y, 0.6, 0.8, 0.0, 0.0)),
        ("hw_scan", lambda impl: impl.hw_scan(y, 0.7, 0.9, 0.9, 12, 0.0, 0.0, s0)),
        ("forecast_paths", lambda impl: impl.forecast_paths(gmat, 0.9, 0.99)),
    ]
    rows = []
    for name, call in cases:
        t_np = time_call(lambda: call(numpy_impl), repeat)
        if numba_impl is not None:
            call(numba_impl)  # JIT warmup
            a = call(numpy_impl)
            b = call(numba_impl)
            agree = all(np.array_equal(x, z) for x, z in zip(a, b)) \
                if isinstance(a, tuple) else np.array_equal(a, b)
            t_nb = time_call(lambda: call(numba_impl), repeat)
            rows.append((name, t_np, t_nb, agree))
        else:
            rows.append((name, t_np, None, True))
    return rows


def print_table(title, rows):
    print(f"\n{title}")
    print(f"{'kernel':<16} {'numpy':>12} {'numba':>12} {'speedup':>9}  bitwise")
    for name, t_np, t_nb, agree in rows:
        if t_nb is None:
            print(f"{name:<16} {t_np * 1e3:>10.2f}ms {'n/a':>12} {'n/a':>9}  n/a")
        else:
            print(f"{name:<16} {t_np * 1e3:>10.2f}ms {t_nb * 1e3:>10.2f}ms "
                  f"{t_np / t_nb:>8.2f}x  {'yes' if agree else 'NO'}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dim", type=int, default=1_000_000,
                    help="parameter vector length for optimizer kernels")
    ap.add_argument("--steps", type=int, default=30,
                    help="optimizer steps per timed call")
    ap.add_argument("--scan-n", type=int, default=2_000_000,
                    help="series length for smoothing scans")
    ap.add_argument("--repeat", type=int, default=5, help="best-of repeats")
    args = ap.parse_args()

    if numba_impl is None:
        print("numba unavailable: timing the numpy fallback only")
    print_table(f"optimizer kernels (dim={args.dim}, {args.steps} steps/call)",
                bench_optimizer_kernels(args.dim, args.steps, args.repeat))
    print_table(f"scans (n={args.scan_n}) and monte-carlo paths",
                bench_scans(args.scan_n, args.repeat))


if __name__ == "__main__":
    main()
