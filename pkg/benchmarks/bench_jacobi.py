"""Compare the compiled and numpy Jacobi sweep kernels.

    python3 benchmarks/bench_jacobi.py [--dims 4 8 16 32] [--reps 50] [--seed 0]

Prints per-dimension median wall time for each backend, the speedup, and the
largest eigenvalue disagreement between backends.
"""
import argparse
import statistics
import time

import numpy as np

from synaptic.eigen import jacobi_eigh


def bench(backend, mats, reps):
    times = []
    for _ in range(reps):
        for m in mats:
            t0 = time.perf_counter()
            jacobi_eigh(m, backend=backend)
            times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[4, 8, 16, 32])
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    try:
        from synaptic import _jacobi_ext  # noqa: F401

        have_ext = True
    except ImportError:
        have_ext = False

    print(f"{'dim':>4} {'python ms':>10} {'cython ms':>10} {'speedup':>8} {'max |dlambda|':>14}")
    for dim in args.dims:
        mats = []
        for _ in range(5):
            x = rng.standard_normal((dim, dim))
            mats.append((x + x.T) / 2)
        t_py = bench("python", mats, args.reps)
        if have_ext:
            t_cy = bench("cython", mats, args.reps)
            diff = max(
                float(np.max(np.abs(jacobi_eigh(m, backend="python")[0] - jacobi_eigh(m, backend="cython")[0])))
                for m in mats
            )
            print(f"{dim:>4} {t_py * 1e3:>10.3f} {t_cy * 1e3:>10.3f} {t_py / t_cy:>8.1f} {diff:>14.2e}")
        else:
            print(f"{dim:>4} {t_py * 1e3:>10.3f} {'n/a':>10} {'n/a':>8} {'n/a':>14}")


if __name__ == "__main__":
    main()
