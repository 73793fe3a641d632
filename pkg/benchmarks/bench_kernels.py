"""Times the hot kernels on the jitted path against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py [--repeat N]

The jitted path compiles on first use; compilation time is excluded by a
warm-up call.  Set TRANSDIM_DISABLE_NUMBA=1 to confirm the package runs on
the fallback alone (this script always times both paths directly).
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from transdim import kernels


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    data = rng.normal(1.0, 0.5, 245)
    k = 20
    means = rng.normal(1.0, 0.5, k)
    log_prec = rng.normal(0.0, 1.0, k)
    logits = rng.normal(0.0, 1.0, k)
    grid = np.linspace(-2, 4, 512)
    curves = rng.random((1500, 512))

    rows = []

    def bench(name, jitted, fallback, loops=1):
        if kernels.NUMBA_ENABLED:
            jitted()  # warm-up/compile
            t_jit = timeit(lambda: [jitted() for _ in range(loops)], args.repeat) / loops
        else:
            t_jit = float("nan")
        t_np = timeit(lambda: [fallback() for _ in range(loops)], args.repeat) / loops
        rows.append((name, t_jit, t_np))

    bench(
        "mixture log likelihood (n=245, k=20)",
        lambda: kernels._loglik_nb(data, means, log_prec, logits) if kernels.NUMBA_ENABLED else None,
        lambda: kernels.loglik_numpy(data, means, log_prec, logits),
        loops=200,
    )
    bench(
        "mixture log posterior (n=245, k=20)",
        lambda: kernels._logpost_nb(data, means, log_prec, logits, 4.0, 0.33, 1.45, 33.3, 0, 0.0, 0.25)
        if kernels.NUMBA_ENABLED
        else None,
        lambda: kernels.logprior_numpy(means, log_prec, logits, 4.0, 0.33, 1.45, 33.3, 0, 0.0, 0.25)
        + kernels.loglik_numpy(data, means, log_prec, logits),
        loops=200,
    )
    bench(
        "density on 512-point grid (k=20)",
        lambda: kernels._density_nb(grid, means, log_prec, logits) if kernels.NUMBA_ENABLED else None,
        lambda: kernels.density_numpy(grid, means, log_prec, logits),
        loops=200,
    )
    bench(
        "sup-norm distance matrix (1500 x 512)",
        lambda: kernels._cheb_matrix_nb(curves) if kernels.NUMBA_ENABLED else None,
        lambda: kernels.cheb_matrix_numpy(curves),
    )

    print(f"numba enabled: {kernels.NUMBA_ENABLED}")
    print(f"{'kernel':45s} {'jitted':>12s} {'numpy':>12s} {'speedup':>9s}")
    for name, t_jit, t_np in rows:
        speed = t_np / t_jit if t_jit and t_jit == t_jit else float("nan")
        jit_txt = f"{t_jit * 1e6:10.1f}us" if t_jit == t_jit else "        n/a"
        print(f"{name:45s} {jit_txt} {t_np * 1e6:10.1f}us {speed:8.1f}x")


if __name__ == "__main__":
    main()
