"""Deterministic experiment drivers: the scaling, blowup, Haar and noise tables
and the gridding comparison.

Every driver returns a list of flat dicts (one per table row) so that the CLI
can write them as CSV without further massaging.
"""

import math

import numpy as np

from .constants import blowup_scan, haar_bound, quadratic_form_extrema, sigma_max_at
from .operators import (
    condition_number,
    dense_matrix,
    gridding_error,
    gridding_reconstruct,
    measure,
    perturb_measurements,
    projection_error,
    reconstruct,
    reconstruction_error,
)
from .sampling import density_of, jittered_scheme, log_scheme, seip_scheme
from .signals import NAMED
from .wavelets.filters import make_filter
from .wavelets.space import build_space


def make_space(family="haar", R=6, boundary_type="periodic", J=None, p=None):
    return build_space(make_filter(family, p), R, J, boundary_type)


# ---------------------------------------------------------------------------
# minimal bandwidth for a bounded reconstruction constant
# ---------------------------------------------------------------------------


def dense_constant(scheme, space, delta):
    c1, _ = quadratic_form_extrema(scheme, space)
    return (1 + delta) / math.sqrt(c1) if c1 > 0 else math.inf


def frame_constant(scheme, space, cap=4096):
    c1, _ = quadratic_form_extrema(scheme, space)
    if c1 <= 0:
        return math.inf
    return sigma_max_at(scheme, cap) / math.sqrt(c1)


def _bisect_min(pred, lo, hi):
    """Smallest integer ``n`` in ``(lo, hi]`` with ``pred(n)``, given ``pred(hi)``."""
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def minimal_log_bandwidth(space, delta=0.95, nu=0.33, threshold=100.0, kmin=3, kmax=12):
    """Smallest integer K such that the log scheme gives ``(1+delta)/sqrt(C1) <= threshold``.

    Coarse scan over ``K = 2^k`` then integer bisection.
    """

    def ok(K):
        try:
            sch = log_scheme(K, delta, nu)
        except ValueError:
            return False
        return dense_constant(sch, space, delta) <= threshold

    prev = 1
    for k in range(kmin, kmax + 1):
        K = 2**k
        if ok(K):
            return _bisect_min(ok, prev, K)
        prev = K
    raise RuntimeError("no admissible bandwidth found up to 2^%d" % kmax)


def minimal_frame_index(space, threshold=100.0, cap=4096, nmax=8192):
    """Smallest frame truncation ``N`` with ``sigma_max(A_cap)/sigma_min(A) <= threshold``."""

    def ok(N):
        if N < 2:
            return False
        return frame_constant(seip_scheme(N), space, cap) <= threshold

    prev, N = 1, 8
    while N <= nmax:
        if ok(N):
            return _bisect_min(ok, prev, N)
        prev, N = N, 2 * N
    raise RuntimeError(f"no admissible truncation found up to N={nmax}")


def table1(families=("haar",), R_values=range(5, 11), delta=0.95, nu=0.33, threshold=100.0):
    rows = []
    for fam in families:
        for R in R_values:
            space = make_space(fam, R)
            rows.append(
                {
                    "family": space.filter.name,
                    "M": space.M,
                    "K_log": minimal_log_bandwidth(space, delta, nu, threshold),
                    "N_frame": minimal_frame_index(space, threshold),
                    "delta": delta,
                    "nu": nu,
                    "threshold": threshold,
                }
            )
    return rows


# ---------------------------------------------------------------------------
# exponential blowup below the critical bandwidth
# ---------------------------------------------------------------------------

TABLE2_C0 = (0.3125, 0.375, 0.4375, 0.5, 0.5625, 0.625)


def table2(families=("haar",), R=6, c_list=TABLE2_C0, eps=0.6, eta=0.15, seed=0):
    rows = []
    for fam in families:
        for r in blowup_scan(R, c_list, eps, eta, seed, fam):
            rows.append(
                {
                    "family": make_filter(fam).name,
                    "c0": r.c0,
                    "K": r.K,
                    "N": r.N,
                    "kappa": r.kappa,
                    "ratio": r.ratio,
                    "solver": r.method,
                    "eps": eps,
                    "eta": eta,
                    "seed": seed,
                }
            )
    return rows


# ---------------------------------------------------------------------------
# Haar reconstructions for three scheme families
# ---------------------------------------------------------------------------

TABLE3_K = (32, 64, 128, 256)
TABLE3_SEIP_N = (38, 72, 139, 272)


def haar_row(scheme, R, f, delta=None, tol=1e-12):
    """Errors and constant estimates of one Haar reconstruction."""
    space = make_space("haar", R)
    A = dense_matrix(scheme, space)
    s = np.linalg.svd(A, compute_uv=False)
    smin = float(s[-1])
    res = reconstruct(scheme, space, measure(f, scheme), tol=tol, kappa=float(s[0] / smin))
    err = reconstruction_error(f, space, res.coeffs)
    perr = projection_error(f, space)
    row = {
        "scheme": scheme.generator.get("family", "custom"),
        "K": scheme.bandwidth,
        "N": scheme.N,
        "M": space.M,
        "error": err,
        "projection_error": perr,
        "ratio": err / perr,
        "kappa": float(s[0] / smin),
        "sigma_ratio_4096": sigma_max_at(scheme, 4096) / smin,
        "bound_dense": None,
        "haar_bound": None,
        "iterations": res.iterations,
        "solver": res.method,
    }
    if delta is not None:
        row["bound_dense"] = (1 + delta) / smin
        try:
            row["haar_bound"] = haar_bound(delta, space.M, scheme.bandwidth)
        except ValueError:
            pass
    return row


def table3(kinds=("jittered", "log", "frame"), K_values=TABLE3_K, seip_N=TABLE3_SEIP_N, seed=0):
    f = NAMED["table3"]()
    rows = []
    for i, K in enumerate(K_values):
        R = int(round(math.log2(2 * K)))
        if "jittered" in kinds:
            sch = jittered_scheme(K, 0.6, 0.1, seed)
            rows.append(haar_row(sch, R, f, delta=0.8) | {"seed": seed})
        if "log" in kinds:
            rows.append(haar_row(log_scheme(K, 0.8, 0.4), R, f, delta=0.8) | {"seed": None})
        if "frame" in kinds and i < len(seip_N):
            rows.append(haar_row(seip_scheme(seip_N[i]), R, f) | {"seed": None})
    return rows


# ---------------------------------------------------------------------------
# noisy measurements
# ---------------------------------------------------------------------------

TABLE4_SPACES = (("haar", "periodic"), ("db2", "periodic"), ("db2", "boundary"))
TABLE4_ETA = (0.0, 0.05, 0.1, 0.2, 0.4)


def noise_constant(scheme, space, cap=4096):
    """``sigma_max(A_cap) / sigma_min(A)`` against the whitened basis of ``space``."""
    c1, _ = quadratic_form_extrema(scheme, space)
    return sigma_max_at(scheme, cap) / math.sqrt(c1)


def table4(spaces=TABLE4_SPACES, etas=TABLE4_ETA, K=128, delta=0.95, nu=0.33, R=7):
    f = NAMED["table4"]()
    h = NAMED["table4-noise"]()
    scheme = log_scheme(K, delta, nu)
    b = measure(f, scheme)
    hb = measure(h, scheme)
    hn = h.norm()
    rows = []
    for fam, btype in spaces:
        space = make_space(fam, R, btype)
        c = noise_constant(scheme, space)
        perr = projection_error(f, space)
        A = dense_matrix(scheme, space)
        kappa = condition_number(A)
        for eta in etas:
            res = reconstruct(scheme, space, b + eta * hb, kappa=kappa)
            rows.append(
                {
                    "space": space.label(),
                    "eta": eta,
                    "error": reconstruction_error(f, space, res.coeffs),
                    "estimate": c * (perr + eta * hn),
                    "constant": c,
                    "projection_error": perr,
                    "N": scheme.N,
                    "solver": res.method,
                }
            )
    return rows


def noisy_reconstruction(f, h, eta, scheme, space, tol=1e-12):
    b = perturb_measurements(measure(f, scheme), h, eta, scheme)
    return reconstruct(scheme, space, b, tol=tol)


# ---------------------------------------------------------------------------
# gridding versus NUGS
# ---------------------------------------------------------------------------


def compare_gridding(K=256, eps=0.7, eta=0.14, R=9, seed=0, signal="gridding", spaces=(("haar", "periodic"), ("db2", "periodic")), grid_points=None):
    """L2 errors of gridding and of NUGS in several spaces on the same data.

    Returns ``(summary_rows, samples)`` where ``samples`` holds the plotting
    data on a uniform grid of ``2^{R+4}`` points.
    """
    from .signals import parse_signal
    from .operators import evaluate_reconstruction

    f = parse_signal(signal)
    scheme = jittered_scheme(K, eps, eta, seed)
    raw = np.asarray(f.fourier(scheme.frequencies), dtype=complex)
    grid_rec = gridding_reconstruct(scheme, raw)
    n = grid_points or 2 ** (R + 4)
    x = (np.arange(n) + 0.5) / n
    samples = {"x": x, "f": np.real(f(x)), "gridding": np.real(grid_rec(x))}
    rows = [
        {
            "method": "gridding",
            "error": gridding_error(f, grid_rec),
            "N": scheme.N,
            "K": scheme.bandwidth,
            "delta": density_of(scheme),
            "seed": seed,
        }
    ]
    b = np.sqrt(scheme.operator_weights) * raw
    for fam, btype in spaces:
        space = make_space(fam, R, btype)
        res = reconstruct(scheme, space, b)
        rows.append(
            {
                "method": "nugs-" + space.label(),
                "error": reconstruction_error(f, space, res.coeffs),
                "N": scheme.N,
                "K": scheme.bandwidth,
                "delta": density_of(scheme),
                "seed": seed,
            }
        )
        samples["nugs-" + space.label()] = np.real(evaluate_reconstruction(space, res.coeffs, x))
    return rows, samples
