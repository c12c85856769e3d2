"""Stability constants and bounds for a (scheme, space) pair.

* ``C1 = min <Sf, f> / ||f||^2`` and ``C3 = max <Sf, f> / ||f||^2`` over the
  reconstruction space (generalized eigenvalues of ``A^* A`` against ``G``);
* ``C2`` (the same maximum over all of L^2(0,1)) estimated as the limit of
  ``C3`` over nested Haar spaces;
* the reconstruction-constant bounds ``(1+delta)/sqrt(C1)`` and
  ``sqrt(C2)/sqrt(C1)``;
* the z-residual ``E(T, z)``, the explicit Haar bound and the blowup scan.
"""

import json
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.linalg as sla

from .operators import (
    condition_number,
    dense_matrix,
    measure,
    projection_error,
    reconstruct,
    reconstruction_error,
)
from .sampling import density_of, jittered_scheme
from .signals import gauss_panels
from .wavelets.filters import make_filter
from .wavelets.space import basis_fourier, build_space


class InstabilityError(ArithmeticError):
    """C1 vanishes numerically: the reconstruction is unstable."""


def _whitened(scheme, space):
    """``A L^{-*}`` with ``G = L L^*``; its singular values give C1, C3."""
    A = dense_matrix(scheme, space)
    if space.is_orthonormal:
        return A
    L = np.linalg.cholesky(space.gram)
    return sla.solve_triangular(L, A.conj().T, lower=True).conj().T


def quadratic_form_extrema(scheme, space):
    """``(C1, C3)``: extreme generalized eigenvalues of ``(A^* A, G)``."""
    s = np.linalg.svd(_whitened(scheme, space), compute_uv=False)
    c3 = float(s[0] ** 2)
    c1 = float(s[-1] ** 2) if scheme.N >= space.M else 0.0
    return c1, c3


def sigma_extrema(scheme, space):
    c1, c3 = quadratic_form_extrema(scheme, space)
    return math.sqrt(c1), math.sqrt(c3)


@dataclass
class C2Estimate:
    value: float
    trace: list
    dimensions: list
    converged: bool


def _haar_c3(scheme, q):
    space = build_space(make_filter("haar"), q, 0, "periodic")
    A = dense_matrix(scheme, space)
    # the largest singular value only: use the smaller Gram product
    G = A @ A.conj().T if A.shape[0] <= A.shape[1] else A.conj().T @ A
    return float(sla.eigvalsh(G, subset_by_index=[G.shape[0] - 1, G.shape[0] - 1])[0])


def c2_estimate(scheme, tol=1e-3, q0=6, cap=4096):
    """``C2 ~ lim_q C3(scheme, Haar_{2^q})``; stops at relative change < tol or 2^q = cap."""
    qcap = int(round(math.log2(cap)))
    if 2**qcap != cap:
        raise ValueError("cap must be a power of two")
    q0 = max(2, min(q0, qcap))
    trace, dims = [], []
    converged = False
    for q in range(q0, qcap + 1):
        val = _haar_c3(scheme, q)
        if trace:
            val = max(val, trace[-1])  # nested spaces: the supremum cannot drop
        trace.append(val)
        dims.append(2**q)
        if len(trace) > 1 and abs(trace[-1] - trace[-2]) <= tol * trace[-1]:
            converged = True
            break
    if not converged and tol > 0:
        warnings.warn(f"C2 estimate stopped at the dimension cap {cap} before reaching tol={tol}", stacklevel=2)
    return C2Estimate(trace[-1], trace, dims, converged)


def sigma_max_at(scheme, dimension=4096):
    """``sigma_max(A)`` for the Haar space of the given dimension."""
    q = int(round(math.log2(dimension)))
    return math.sqrt(_haar_c3(scheme, q))


def reconstruction_bound(scheme, space, mode="dense", delta=None, c2=None):
    """``(1+delta)/sqrt(C1)`` (dense) or ``sqrt(C2)/sqrt(C1)`` (frame)."""
    c1, _ = quadratic_form_extrema(scheme, space)
    if c1 <= 1e-300 or not np.isfinite(c1):
        raise InstabilityError("C1 vanishes; the reconstruction is unstable")
    if mode == "dense":
        if delta is None:
            delta = density_of(scheme)
        return (1.0 + delta) / math.sqrt(c1)
    if mode == "frame":
        if c2 is None:
            c2 = c2_estimate(scheme, tol=0.0, cap=4096).value
        return math.sqrt(c2) / math.sqrt(c1)
    raise ValueError(f"unknown mode {mode!r}")


def haar_bound(delta, M, K):
    """Explicit upper bound on the reconstruction constant for Haar spaces."""
    delta = float(delta)
    if not (0 < delta < 1):
        raise ValueError("delta must lie in (0, 1)")
    M = int(M)
    if M < 2:
        raise ValueError("M must be at least 2")
    if M > 2 * K:
        raise ValueError("the Haar bound requires M <= 2K")
    ratio = (1 + delta) / (1 - delta)
    q = 2 * K / M
    if abs(q - round(q)) < 1e-12:
        return math.pi / 2 * ratio
    x = math.pi / 2 + math.pi * delta / M
    c0 = x / math.sin(x)
    return c0 * ratio


def _gz_matrix(space, z, panel=0.25, order=8):
    """``G_z[m, m'] = int_{-z}^{z} phi_m^ conj(phi_m'^)``."""
    if z <= 0:
        return np.zeros((space.M, space.M))
    n = max(1, int(math.ceil(2 * z / panel)))
    x, w = gauss_panels(n, -z, z, order=order)
    F = basis_fourier(space, x)
    Gz = (F.conj().T * w) @ F
    return np.real(0.5 * (Gz + Gz.conj().T))


def z_residual(space, z, panel=0.25):
    """``E(T, z)``: worst fraction of Fourier energy outside ``(-z, z)``."""
    z = float(z)
    if z < 0:
        raise ValueError("z must be non-negative")
    G = space.gram
    if z == 0:
        return 1.0
    D = G - _gz_matrix(space, z, panel)
    lam = sla.eigh(D, G, eigvals_only=True)[-1]
    return float(min(max(lam, 0.0), 1.0) ** 0.5)


def frame_tail_residual(space, frequencies, N, N_ext):
    """Truncated surrogate of ``E~(T, N)``: tail over ``N < |n| <= N_ext``."""
    freqs = np.asarray(frequencies(N_ext) if callable(frequencies) else frequencies, dtype=float)
    n_ext = freqs.size // 2
    if n_ext < N_ext or N >= N_ext:
        raise ValueError("extension horizon must exceed N")
    idx = np.r_[0 : N_ext - N, N_ext + N : 2 * N_ext]
    F = basis_fourier(space, freqs[idx])
    lam = sla.eigh(np.real(F.conj().T @ F), space.gram, eigvals_only=True)[-1]
    return float(math.sqrt(max(lam, 0.0)))


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class ConstantsReport:
    c1: float
    c3: float
    c2_estimate: float
    c2_trace: list
    c2_converged: bool
    kappa: float
    bound_dense: float = None
    bound_frame: float = None
    haar_bound: float = None
    z_residuals: list = field(default_factory=list)
    delta: float = None
    scheme: str = ""
    space: dict = field(default_factory=dict)

    def to_json(self):
        d = asdict(self)
        return json.dumps(d, indent=2, default=_json_default)


def _json_default(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    raise TypeError(type(v))


def constants_report(scheme, space, delta=None, c2_tol=1e-3, cap=4096, z_values=()):
    c1, c3 = quadratic_form_extrema(scheme, space)
    kappa = condition_number(dense_matrix(scheme, space))
    est = c2_estimate(scheme, tol=c2_tol, cap=cap)
    rep = ConstantsReport(
        c1,
        c3,
        est.value,
        est.trace,
        est.converged,
        kappa,
        scheme=scheme.label,
        space=space.descriptor(),
    )
    if c1 > 0:
        rep.bound_frame = math.sqrt(est.value / c1)
        if not scheme.frame:
            rep.delta = density_of(scheme) if delta is None else float(delta)
            rep.bound_dense = (1 + rep.delta) / math.sqrt(c1)
    if space.filter.family == "haar" and not scheme.frame:
        d = density_of(scheme) if delta is None else float(delta)
        try:
            rep.haar_bound = haar_bound(d, space.M, scheme.bandwidth)
        except ValueError:
            rep.haar_bound = None
    rep.z_residuals = [[float(z), z_residual(space, z)] for z in z_values]
    return rep


# ---------------------------------------------------------------------------
# blowup diagnostics
# ---------------------------------------------------------------------------


@dataclass
class BlowupRow:
    c0: float
    K: float
    N: int
    kappa: float
    ratio: float
    method: str


def blowup_scan(R, c_list, eps=0.6, eta=0.15, seed=0, family="haar", boundary_type="periodic", signal=None):
    """kappa(A) and error ratios for jittered schemes with ``K = c0 2^R``."""
    from .signals import NAMED

    f = NAMED["table2"]() if signal is None else signal
    space = build_space(make_filter(family), R, None, boundary_type)
    pe = projection_error(f, space)
    rows = []
    for c0 in c_list:
        K = c0 * 2**R
        scheme = jittered_scheme(K, eps, eta, seed)
        A = dense_matrix(scheme, space)
        kappa = condition_number(A)
        res = reconstruct(scheme, space, measure(f, scheme), kappa=kappa)
        err = reconstruction_error(f, space, res.coeffs)
        rows.append(BlowupRow(float(c0), K, scheme.N, kappa, err / pe, res.method))
    return rows
