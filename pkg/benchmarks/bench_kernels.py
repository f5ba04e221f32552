"""Time the direct-summation kernels with numba and with plain numpy.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs once per backend to warm up (numba compiles on first call,
or loads its on-disk cache), then ``--repeat`` times; the best time is
reported together with the largest difference between the two backends.
"""

import argparse
import os
import time

import numpy as np

from monolct import kernels


def cases(rng):
    x = np.linspace(-8, 8, 2048)
    fw = rng.normal(size=x.size) + 1j * rng.normal(size=x.size)
    omegas = np.linspace(-10, 10, 2048)
    yield "lct_direct_sum 2048x2048", kernels.lct_direct_sum, (x, fw, omegas, 2.0, 1.0, 1.0)

    g = rng.normal(size=x.size) + 0j
    yield "hilbert_pv_sum 2048", kernels.hilbert_pv_sum, (x, g, x[1] - x[0])

    t = np.linspace(-20, 20, 8192)
    gw = rng.normal(size=t.size) + 1j * rng.normal(size=t.size)
    xs, ys = rng.uniform(-3, 3, 200), rng.uniform(0.1, 2, 200)
    yield "poisson_1d_sum 8192x200", kernels.poisson_1d_sum, (t, gw, xs, ys)

    x1, x2 = (u.ravel() for u in np.meshgrid(np.arange(48.0), np.arange(48.0)))
    g2 = rng.normal(size=x1.size) + 1j * rng.normal(size=x1.size)
    yield "riesz_pv_2d_sum 48x48", kernels.riesz_pv_2d_sum, (x1, x2, g2)
    yield "poisson_2d_sum 48x48", kernels.poisson_2d_sum, (x1, x2, g2, x1, x2, 0.5)


def timed(fn, args, repeat):
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def flat(out):
    if isinstance(out, tuple):
        return np.concatenate([np.ravel(o) for o in out])
    return np.ravel(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'kernel':28} {'numba [ms]':>11} {'numpy [ms]':>11} {'speedup':>8} {'max diff':>10}")
    for name, fn, fargs in cases(np.random.default_rng(args.seed)):
        os.environ["MONOLCT_NUMBA"] = "1"
        t_nb, out_nb = timed(fn, fargs, args.repeat)
        os.environ["MONOLCT_NUMBA"] = "0"
        t_np, out_np = timed(fn, fargs, args.repeat)
        a, b = flat(out_nb), flat(out_np)
        diff = float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))
        print(f"{name:28} {1e3 * t_nb:11.2f} {1e3 * t_np:11.2f} {t_np / t_nb:8.1f} {diff:10.2e}")
    os.environ.pop("MONOLCT_NUMBA", None)


if __name__ == "__main__":
    main()
