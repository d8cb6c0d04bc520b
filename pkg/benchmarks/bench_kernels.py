"""Time the numba kernels against their numpy fallbacks and check they agree.

    python benchmarks/bench_kernels.py [--n 1000000] [--repeat 5]
"""

import argparse
import math
import time

import numpy as np

from flucnak._accel import HAVE_NUMBA
from flucnak.mc_sim import _l1_detect_numba, _l1_detect_numpy, constellation, make_stream
from flucnak.numerics.special import _log_p_numba, _log_p_numpy
from flucnak.ser import Modulation


def best_of(fn, repeat):
    fn()  # warm-up (includes compilation)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_incomplete_gamma(n, repeat):
    rng = make_stream(1, 0)
    x = np.ascontiguousarray(rng.gamma(5.0, 1.0, size=n))
    rows = []
    for a in (0.75, 5.0, 50.0):
        t_nb = best_of(lambda: _log_p_numba(a, x), repeat)
        t_np = best_of(lambda: _log_p_numpy(a, x), repeat)
        d = np.max(np.abs(_log_p_numba(a, x) - _log_p_numpy(a, x)))
        rows.append((f"log P(a={a:g}, x)", t_nb, t_np, d))
    return rows


def bench_l1_detector(n, repeat):
    rng = make_stream(2, 0)
    rows = []
    for M in (2, 8, 32):
        pts = constellation(Modulation.mpsk(M))
        amp = np.sqrt(rng.gamma(2.0, 5.0, size=n))
        sym = rng.integers(0, M, size=n)
        re = amp * pts.real[sym] + rng.laplace(0, 0.5, n)
        im = amp * pts.imag[sym] + rng.laplace(0, 0.5, n)
        args = (re, im, amp, np.ascontiguousarray(pts.real), np.ascontiguousarray(pts.imag))
        t_nb = best_of(lambda: _l1_detect_numba(*args), repeat)
        t_np = best_of(lambda: _l1_detect_numpy(*args), repeat)
        d = float(np.count_nonzero(_l1_detect_numba(*args) != _l1_detect_numpy(*args)))
        rows.append((f"L1 detector M={M}", t_nb, t_np, d))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba is not installed; both columns time the numpy path")
    rows = bench_incomplete_gamma(args.n, args.repeat) + bench_l1_detector(args.n, args.repeat)
    print(f"n = {args.n}, best of {args.repeat}")
    print(f"{'kernel':<22} {'numba [s]':>10} {'numpy [s]':>10} {'speed-up':>9} {'max diff':>10}")
    for name, t_nb, t_np, d in rows:
        speed = t_np / t_nb if t_nb > 0 else math.inf
        print(f"{name:<22} {t_nb:10.4f} {t_np:10.4f} {speed:8.1f}x {d:10.2e}")


if __name__ == "__main__":
    main()
