"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--N 4000] [--M 512] [--repeat 5]

Both backends are always importable from ``nugs.kernels.BACKENDS``; the
environment flag ``NUGS_DISABLE_NUMBA`` only changes which one the library
dispatches to.
"""

import argparse
import time

import numpy as np

from nugs import kernels
from nugs._accel import HAVE_NUMBA
from nugs.wavelets.filters import make_filter


def best_of(fn, repeat):
    out = None
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=4000, help="number of frequencies")
    ap.add_argument("--M", type=int, default=512, help="number of coefficients")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    xi = np.sort(rng.uniform(-0.5, 0.5, args.N))
    c = rng.standard_normal(args.M) + 1j * rng.standard_normal(args.M)
    y = rng.standard_normal(args.N) + 1j * rng.standard_normal(args.N)
    filt = make_filter("db4")

    cases = {
        "nudft_forward": lambda b: b["nudft_forward"](xi, c, -3),
        "nudft_adjoint": lambda b: b["nudft_adjoint"](xi, y, -3, args.M),
        "phi_hat_product": lambda b: b["phi_hat_product"](filt.taps, filt.kmin, 64 * xi, filt.m1),
    }
    print(f"numba available: {HAVE_NUMBA}; library backend: {kernels.BACKEND}")
    print(f"N={args.N} M={args.M} best of {args.repeat}")
    print(f"{'kernel':<18}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}{'max diff':>12}")
    for name, call in cases.items():
        t_np, r_np = best_of(lambda: call(kernels.BACKENDS["numpy"]), args.repeat)
        if not HAVE_NUMBA:
            print(f"{name:<18}{1e3 * t_np:>12.2f}{'-':>12}{'-':>10}{'-':>12}")
            continue
        call(kernels.BACKENDS["numba"])  # compile
        t_nb, r_nb = best_of(lambda: call(kernels.BACKENDS["numba"]), args.repeat)
        diff = float(np.max(np.abs(r_np - r_nb)))
        print(f"{name:<18}{1e3 * t_np:>12.2f}{1e3 * t_nb:>12.2f}{t_np / t_nb:>10.2f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
