"""Measurement systems, the NUGS least-squares solve, gridding and error metrics.

For a scheme ``{w_n}`` with weights ``mu_n`` and a reconstruction space with
basis ``phi_m`` the measurement system is

    A[n, m] = sqrt(mu_n) * phi_m^(w_n),     b[n] = sqrt(mu_n) * f^(w_n),

and the NUGS reconstruction is the least-squares solution of ``A a ~ b``.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from . import kernels
from .signals import Expansion, ExpSum, gauss_panels
from .wavelets.refinable import phi_hat
from .wavelets.space import basis_fourier, evaluate, inner_products

MAX_DENSE_ENTRIES = 200_000_000


def signal_fourier(f, omega):
    """``f^(omega) = int_0^1 f(x) exp(-2 pi i omega x) dx``."""
    return f.fourier(omega)


def measure(f, scheme):
    """``b_n = sqrt(mu_n) f^(w_n)``."""
    return np.sqrt(scheme.operator_weights) * np.asarray(f.fourier(scheme.frequencies), dtype=complex)


def perturb_measurements(b, h, eta, scheme):
    """Measurements of ``f + eta h`` given ``b = measure(f, scheme)``."""
    if eta < 0:
        raise ValueError("eta must be non-negative")
    if eta == 0:
        return np.array(b, dtype=complex)
    return np.asarray(b, dtype=complex) + eta * measure(h, scheme)


class SamplingOperator:
    """Matrix-free ``A`` and ``A^*``.

    Interior columns use ``diag(sqrt(mu)) diag(2^{-R/2} phi^(w/2^R))`` times a
    nonuniform DFT; the few edge columns are stored densely.
    """

    def __init__(self, scheme, space):
        self.scheme = scheme
        self.space = space
        self.omega = scheme.frequencies
        self.sqrt_mu = np.sqrt(scheme.operator_weights)
        self.xi = self.omega / space.L
        first, k0, count = space.interior_block
        self.interior = slice(first, first + count)
        self.k0 = k0
        self.count = count
        self.scale = self.sqrt_mu * 2.0 ** (-space.R / 2) * phi_hat(space.filter, self.xi)
        self.edge = np.array(space.edge_indices(), dtype=int)
        if self.edge.size:
            self.edge_cols = self.sqrt_mu[:, None] * basis_fourier(space, self.omega, self.edge)
        else:
            self.edge_cols = np.zeros((self.omega.size, 0), dtype=complex)

    @property
    def shape(self):
        return (self.omega.size, self.space.M)

    def forward(self, coeffs):
        c = np.asarray(coeffs, dtype=complex)
        if c.shape != (self.space.M,):
            raise ValueError(f"expected {self.space.M} coefficients, got shape {c.shape}")
        y = np.zeros(self.omega.size, dtype=complex)
        if self.count:
            y += self.scale * kernels.nudft_forward(self.xi, c[self.interior], self.k0)
        if self.edge.size:
            y += self.edge_cols @ c[self.edge]
        return y

    def adjoint(self, values):
        r = np.asarray(values, dtype=complex)
        if r.shape != (self.omega.size,):
            raise ValueError(f"expected {self.omega.size} values, got shape {r.shape}")
        out = np.zeros(self.space.M, dtype=complex)
        if self.count:
            out[self.interior] = kernels.nudft_adjoint(self.xi, np.conj(self.scale) * r, self.k0, self.count)
        if self.edge.size:
            out[self.edge] = self.edge_cols.conj().T @ r
        return out

    def dense(self):
        return dense_matrix(self.scheme, self.space)


def dense_matrix(scheme, space, max_entries=MAX_DENSE_ENTRIES):
    n, m = scheme.N, space.M
    if n * m > max_entries:
        raise MemoryError(f"dense system {n}x{m} exceeds the limit of {max_entries} entries")
    return np.sqrt(scheme.operator_weights)[:, None] * basis_fourier(space, scheme.frequencies)


def apply_forward(scheme, space, coeffs):
    return SamplingOperator(scheme, space).forward(coeffs)


def apply_adjoint(scheme, space, values):
    return SamplingOperator(scheme, space).adjoint(values)


@dataclass(eq=False)
class MeasurementSystem:
    scheme: object
    space: object
    A: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)

    @property
    def operator(self):
        return DenseOperator(self.A)


class DenseOperator:
    def __init__(self, A):
        self.A = A

    @property
    def shape(self):
        return self.A.shape

    def forward(self, x):
        return self.A @ x

    def adjoint(self, y):
        return self.A.conj().T @ y

    def dense(self):
        return self.A


def build_system(f, scheme, space, max_entries=MAX_DENSE_ENTRIES):
    """Dense ``A`` and ``b`` for signal ``f`` (``f=None`` leaves ``b`` zero)."""
    if scheme.N < space.M:
        warnings.warn(f"fewer samples ({scheme.N}) than unknowns ({space.M}); C1 will vanish", stacklevel=2)
    A = dense_matrix(scheme, space, max_entries)
    b = measure(f, scheme) if f is not None else np.zeros(scheme.N, dtype=complex)
    return MeasurementSystem(scheme, space, A, b)


# ---------------------------------------------------------------------------
# solvers
# ---------------------------------------------------------------------------


@dataclass
class SolveResult:
    coeffs: np.ndarray
    iterations: int
    converged: bool
    residual: float
    method: str = "cg"


def solve_nugs(system, b=None, tol=1e-12, max_iter=None):
    """Conjugate gradients on ``A^* A a = A^* b``.

    ``system`` is a :class:`MeasurementSystem` or any object with
    ``forward``/``adjoint``/``shape``.  Stops when the normal-equation
    residual drops below ``tol`` relative to ``||A^* b||``.
    """
    if isinstance(system, MeasurementSystem):
        op = system.operator
        b = system.b if b is None else b
    else:
        op = system
    if b is None:
        raise ValueError("right-hand side missing")
    b = np.asarray(b, dtype=complex)
    M = op.shape[1]
    if max_iter is None:
        max_iter = 10 * M
    x = np.zeros(M, dtype=complex)
    z = op.adjoint(b)
    ref = np.linalg.norm(z)
    if ref == 0:
        return SolveResult(x, 0, True, 0.0)
    r = b.copy()
    p = z.copy()
    zz = np.vdot(z, z).real
    best = (math.inf, x.copy())
    it = 0
    rel = 1.0
    while it < max_iter:
        w = op.forward(p)
        ww = np.vdot(w, w).real
        if ww == 0:
            break
        alpha = zz / ww
        x += alpha * p
        r -= alpha * w
        z = op.adjoint(r)
        zz_new = np.vdot(z, z).real
        it += 1
        rel = math.sqrt(zz_new) / ref
        if rel < best[0]:
            best = (rel, x.copy())
        if rel <= tol:
            return SolveResult(x, it, True, rel)
        p = z + (zz_new / zz) * p
        zz = zz_new
    return SolveResult(best[1], it, False, best[0])


def solve_lstsq(A, b):
    """Dense SVD-based least squares (for ill-conditioned systems)."""
    x, *_ = sla.lstsq(A, b, lapack_driver="gelsd")
    z = A.conj().T @ (b - A @ x)
    ref = np.linalg.norm(A.conj().T @ b)
    return SolveResult(x, 0, True, float(np.linalg.norm(z) / ref) if ref else 0.0, "lstsq")


def condition_number(A):
    """``sigma_max / sigma_min`` by full SVD (``inf`` for a singular matrix)."""
    A = np.asarray(A.A if isinstance(A, MeasurementSystem) else A)
    if A.shape[0] < A.shape[1]:
        return math.inf
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[-1] <= 0 or not np.isfinite(s[-1]):
        return math.inf
    return float(s[0] / s[-1])


def reconstruct(scheme, space, b, tol=1e-12, max_iter=None, kappa_switch=1e8, kappa=None):
    """NUGS coefficients from measurements ``b``.

    CG is used unless ``kappa(A) > kappa_switch`` or CG fails to converge,
    in which case the dense SVD least-squares solve is used.
    """
    A = None
    if kappa is None and scheme.N * space.M <= 4_000_000:
        A = dense_matrix(scheme, space)
        kappa = condition_number(A)
    if kappa is not None and kappa > kappa_switch:
        A = dense_matrix(scheme, space) if A is None else A
        return solve_lstsq(A, b)
    res = solve_nugs(SamplingOperator(scheme, space), b, tol, max_iter)
    if not res.converged:
        A = dense_matrix(scheme, space) if A is None else A
        fallback = solve_lstsq(A, b)
        fallback.iterations = res.iterations
        fallback.method = "cg->lstsq"
        return fallback
    return res


# ---------------------------------------------------------------------------
# gridding
# ---------------------------------------------------------------------------


class GriddingReconstruction(ExpSum):
    """``S f(x) = sum_n mu_n f^(w_n) exp(2 pi i w_n x)`` on [0, 1]."""

    kind = "gridding"

    @property
    def is_real(self):
        return False


def gridding_reconstruct(scheme, samples):
    """Density-compensated exponential sum from raw samples ``f^(w_n)``."""
    samples = np.asarray(samples, dtype=complex)
    if samples.shape != (scheme.N,):
        raise ValueError("one sample per frequency expected")
    return GriddingReconstruction(scheme.frequencies, scheme.weights * samples)


# ---------------------------------------------------------------------------
# evaluation and errors
# ---------------------------------------------------------------------------


def evaluate_reconstruction(space, coeffs, grid):
    return evaluate(space, coeffs, np.asarray(grid, dtype=float))


def l2_error(f, g, R=9, n_panels=None):
    """``||f - g||_{L^2(0,1)}`` by composite Gauss-Legendre.

    Panels have width ``2^{-(R+4)}`` unless ``n_panels`` is given.
    """
    n = n_panels if n_panels is not None else 2 ** (R + 4)
    x, w = gauss_panels(n, order=8)
    fv = f(x) if callable(f) else f.evaluate(x)
    gv = g(x) if callable(g) else g.evaluate(x)
    d = np.asarray(fv) - np.asarray(gv)
    return float(np.sqrt(np.sum(w * np.abs(d) ** 2)))


def _exact_inner_available(f, space):
    return hasattr(f, "exponentials") or getattr(f, "polynomial", None) is not None or getattr(f, "space", None) is space


def reconstruction_error(f, space, coeffs, R=None):
    """``||f - sum a_m phi_m||``; exact for exponential sums and polynomials."""
    a = np.asarray(coeffs, dtype=complex)
    if _exact_inner_available(f, space):
        v = inner_products(space, f)
        val = f.norm() ** 2 - 2 * np.real(np.vdot(a, v)) + np.real(np.vdot(a, space.gram @ a))
        return math.sqrt(max(val, 0.0))
    return l2_error(f, Expansion(space, coeffs), R=space.R if R is None else R)


def projection_coefficients(f, space):
    v = inner_products(space, f)
    return sla.cho_solve(space.cholesky(), v), v


def projection_error(f, space):
    """``||f - P_T f||`` (exact for exponential sums and polynomials)."""
    c, v = projection_coefficients(f, space)
    if _exact_inner_available(f, space):
        val = f.norm() ** 2 - np.real(np.vdot(c, v))
        return math.sqrt(max(val, 0.0))
    return l2_error(f, Expansion(space, c), R=space.R)


def gridding_error(f, recon, R=9):
    """``||f - S f||``; exact when ``f`` is an exponential sum."""
    if hasattr(f, "exponentials"):
        nu, amp = f.exponentials()
        diff = ExpSum(np.concatenate([nu, recon.freqs]), np.concatenate([amp, -recon.amps]))
        return diff.norm()
    return l2_error(f, recon, R=R)
