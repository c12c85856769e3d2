"""Wavelet reconstruction spaces ``V_R`` on [0, 1].

Every basis function is stored as a finite combination of *atoms*
``phi(s*y - c)`` restricted to ``y in [0, L]`` where ``y = L x`` and
``L = 2^R``; ``s = +1`` for plain translates and ``s = -1`` for reflections.
The basis function itself is ``2^{R/2} sum coef * atom``.

Three edge treatments are supported:

``periodic``
    translates wrapped around the interval.
``folded``
    translates plus their mirror images about 0 and 1 (even extension).
``boundary``
    interior translates plus, at each edge, ``p`` orthonormal functions
    spanning the truncated polynomial-reproducing combinations
    ``sum_c c^r phi(y - c)``, r < p.  This is the span of the classical
    edge-corrected wavelets on the interval.
"""

import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .filters import ScalingFilter, make_filter
from .refinable import half_line_tables, phi_hat, phi_values, cascade_evaluate

BOUNDARY_TYPES = ("periodic", "folded", "boundary")
_EVAL_Q = 16


@dataclass(frozen=True, eq=False)
class BasisFunction:
    signs: np.ndarray
    shifts: np.ndarray
    coefs: np.ndarray
    interior: bool

    def support(self, p):
        """Support in the y variable, clipped to the interval later."""
        lo = []
        hi = []
        for s, c in zip(self.signs, self.shifts):
            a, b = atom_support(int(s), int(c), p)
            lo.append(a)
            hi.append(b)
        return min(lo), max(hi)


def atom_support(s, c, p):
    if s > 0:
        return c - p + 1, c + p
    return -c - p, -c + p - 1


def _keep(s, c, p, L):
    a, b = atom_support(s, c, p)
    return min(b, L) - max(a, 0) > 0


def _make(atoms, p, L, interior=False):
    atoms = [(s, c, w) for s, c, w in atoms if w != 0.0 and _keep(s, c, p, L)]
    merged = defaultdict(float)
    for s, c, w in atoms:
        merged[(s, c)] += w
    keys = sorted(merged)
    return BasisFunction(
        np.array([k[0] for k in keys], dtype=int),
        np.array([k[1] for k in keys], dtype=int),
        np.array([merged[k] for k in keys], dtype=float),
        interior,
    )


@dataclass(eq=False)
class ReconstructionSpace:
    filter: ScalingFilter
    R: int
    J: int
    boundary_type: str
    functions: list = field(repr=False)
    gram: np.ndarray = field(repr=False, default=None)

    @property
    def p(self):
        return self.filter.p

    @property
    def L(self):
        return 2**self.R

    @property
    def dimension(self):
        return len(self.functions)

    M = dimension

    @property
    def interior_block(self):
        """(first column, first shift, count) of the contiguous interior block."""
        return self._interior

    def __post_init__(self):
        idx = [i for i, f in enumerate(self.functions) if f.interior]
        if idx:
            first = idx[0]
            shifts = [int(self.functions[i].shifts[0]) for i in idx]
            assert idx == list(range(first, first + len(idx)))
            assert shifts == list(range(shifts[0], shifts[0] + len(idx)))
            self._interior = (first, shifts[0], len(idx))
        else:
            self._interior = (0, 0, 0)
        self.tables = half_line_tables(self.filter)
        if self.gram is None:
            self.gram = _compute_gram(self)
        self._chol = None

    def descriptor(self):
        return {
            "family": self.filter.family,
            "p": self.p,
            "R": self.R,
            "J": self.J,
            "type": self.boundary_type,
        }

    def label(self):
        return f"{self.filter.name}-{self.boundary_type}-R{self.R}"

    @property
    def is_orthonormal(self):
        return bool(np.allclose(self.gram, np.eye(self.M), atol=1e-10))

    def cholesky(self):
        if self._chol is None:
            try:
                self._chol = sla.cho_factor(self.gram, lower=True)
            except np.linalg.LinAlgError as exc:
                raise np.linalg.LinAlgError(f"Gram matrix of {self.label()} is not positive definite") from exc
        return self._chol

    def edge_indices(self):
        return [i for i, f in enumerate(self.functions) if not f.interior]


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def build_space(filt, R, J=None, boundary_type="periodic"):
    """Construct the space ``V_R`` of the given type on [0, 1]."""
    if isinstance(filt, str):
        filt = make_filter(filt)
    btype = str(boundary_type).lower()
    aliases = {"per": "periodic", "fold": "folded", "int": "boundary", "cdv": "boundary"}
    btype = aliases.get(btype, btype)
    if btype not in BOUNDARY_TYPES:
        raise ValueError(f"unknown boundary type {boundary_type!r}")
    R = int(R)
    p = filt.p
    if R < 1 or 2 ** (R - 1) <= p:
        raise ValueError(f"need 2^(R-1) > p; got R={R}, p={p}")
    if J is None:
        J = default_coarse_level(filt, btype)
    J = int(J)
    if J < 0 or J > R:
        raise ValueError(f"need 0 <= J <= R; got J={J}, R={R}")
    if btype == "boundary" and 2**J < 2 * p:
        raise ValueError(f"boundary type needs 2^J >= 2p; got J={J}, p={p}")
    L = 2**R
    if btype == "periodic":
        funcs = _periodic_functions(p, L)
    elif btype == "folded":
        funcs = _folded_functions(p, L)
    else:
        funcs = _boundary_functions(filt, p, L)
    return ReconstructionSpace(filt, R, J, btype, funcs)


def default_coarse_level(filt, boundary_type):
    if boundary_type == "boundary":
        return int(math.ceil(math.log2(2 * filt.p)))
    return 0


def _single(k, p, L):
    """Interior index: k = p..L-p-1 (every k for Haar)."""
    a, b = atom_support(1, k, p)
    return a >= 0 and b <= L and (p == 1 or p <= k <= L - p - 1)


def _periodic_functions(p, L):
    out = []
    for k in range(L):
        if _single(k, p, L):
            out.append(_make([(1, k, 1.0)], p, L, interior=True))
        else:
            out.append(_make([(1, k + j * L, 1.0) for j in (-1, 0, 1)], p, L))
    return out


def _folded_functions(p, L):
    out = []
    for k in range(L):
        if _single(k, p, L):
            out.append(_make([(1, k, 1.0)], p, L, interior=True))
            continue
        atoms = []
        for j in (-1, 0, 1):
            atoms.append((1, k + 2 * j * L, 1.0))
            atoms.append((-1, k - 2 * j * L, 1.0))
        out.append(_make(atoms, p, L))
    return out


def _boundary_functions(filt, p, L):
    left = [_make([(1, c, float(c) ** r if c or r else 1.0) for c in range(-p + 1, p)], p, L) for r in range(p)]
    right = [
        _make([(1, c, float(c - L) ** r if (c - L) or r else 1.0) for c in range(L - p, L + p - 1)], p, L)
        for r in range(p)
    ]
    tables = half_line_tables(filt)
    edge = left + right
    # two Cholesky passes: the monomial-weighted raw functions are mildly ill-conditioned
    for _ in range(2):
        G = np.array([[_pair_product(tables, a, b, L) for b in edge] for a in edge])
        T = np.linalg.inv(np.linalg.cholesky(G))
        new = []
        for i in range(2 * p):
            atoms = []
            for j in range(i + 1):
                f = edge[j]
                atoms.extend((int(s), int(c), T[i, j] * w) for s, c, w in zip(f.signs, f.shifts, f.coefs))
            new.append(_make(atoms, p, L))
        edge = new
    interior = [_make([(1, k, 1.0)], p, L, interior=True) for k in range(p, L - p)]
    return edge[:p] + interior + edge[p:]


# ---------------------------------------------------------------------------
# exact integrals
# ---------------------------------------------------------------------------


def atom_product(tables, a, b, L):
    """int_0^L phi(s y - c) phi(s' y - c') dy."""
    (s, c), (t, d) = a, b
    if s > 0 and t > 0:
        return tables.I(c, d) - tables.I(c - L, d - L)
    if s < 0 and t < 0:
        return atom_product(tables, (1, c + L), (1, d + L), L)
    if s < 0:
        (s, c), (t, d) = b, a
    return tables.J(c, d) - tables.J(c - L, d + L)


def _pair_product(tables, f, g, L):
    total = 0.0
    for s, c, w in zip(f.signs, f.shifts, f.coefs):
        for t, d, v in zip(g.signs, g.shifts, g.coefs):
            total += w * v * atom_product(tables, (int(s), int(c)), (int(t), int(d)), L)
    return total


def _clipped_intervals(f, p, L):
    out = []
    for s, c in zip(f.signs, f.shifts):
        a, b = atom_support(int(s), int(c), p)
        out.append((max(a, 0), min(b, L)))
    return out


def _overlap(u, v):
    return any(min(b, d) > max(a, c) for a, b in u for c, d in v)


def _compute_gram(space):
    M = space.M
    p, L = space.p, space.L
    G = np.eye(M)
    edge = space.edge_indices()
    edge_set = set(edge)
    ivals = [_clipped_intervals(f, p, L) for f in space.functions]
    for i in edge:
        for j in range(M):
            if j in edge_set and j < i:
                continue
            if not _overlap(ivals[i], ivals[j]):
                G[i, j] = G[j, i] = 0.0
                continue
            G[i, j] = G[j, i] = _pair_product(space.tables, space.functions[i], space.functions[j], L)
    return 0.5 * (G + G.T)


def gram_matrix(space):
    """Gram matrix ``G[m, m'] = int_0^1 phi_m phi_m'`` (exact up to rounding)."""
    G = space.gram.copy()
    w = np.linalg.eigvalsh(G)
    if w[0] <= 1e-12 * max(w[-1], 1.0):
        raise np.linalg.LinAlgError(f"Gram matrix of {space.label()} is not positive definite")
    return G


# ---------------------------------------------------------------------------
# Fourier evaluation
# ---------------------------------------------------------------------------


class _HalfLine:
    """Cache of T_k(xi) for the integers k needed by the edge atoms."""

    def __init__(self, tables, xi):
        self.tables = tables
        self.xi = xi
        self.ph = phi_hat(tables.filt, xi)
        self._block = None

    def T(self, k):
        p = self.tables.p
        if -p + 1 <= k <= p - 2 and self._block is None:
            self._block = self.tables.half_line_block(self.xi)
        return self.tables.T(k, self.xi, ph=self.ph, block=self._block)

    def F_plus(self, c, L):
        return self.T(c) - np.exp(-2j * np.pi * self.xi * L) * self.T(c - L)

    def atom(self, s, c, L):
        if s > 0:
            return self.F_plus(c, L)
        return np.exp(-2j * np.pi * self.xi * L) * np.conj(self.F_plus(c + L, L))


def basis_fourier(space, omegas, columns=None):
    """Matrix of Fourier transforms ``phi_m^(omega_n)``, shape ``(len(omegas), M)``."""
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    L = space.L
    xi = omegas / L
    hl = _HalfLine(space.tables, xi)
    scale = 2.0 ** (-space.R / 2)
    cols = range(space.M) if columns is None else columns
    out = np.zeros((omegas.size, len(cols)), dtype=complex)
    first, k0, count = space.interior_block
    for j, m in enumerate(cols):
        f = space.functions[m]
        if f.interior:
            k = int(f.shifts[0])
            out[:, j] = scale * hl.ph * np.exp(-2j * np.pi * xi * k)
        else:
            acc = np.zeros(omegas.size, dtype=complex)
            for s, c, w in zip(f.signs, f.shifts, f.coefs):
                acc += w * hl.atom(int(s), int(c), L)
            out[:, j] = scale * acc
    return out


def scaling_fourier(filt, omega):
    return phi_hat(filt, omega)


# ---------------------------------------------------------------------------
# pointwise evaluation and inner products
# ---------------------------------------------------------------------------


def _atom_coefficients(space, coeffs):
    plus = defaultdict(complex)
    minus = defaultdict(complex)
    for a, f in zip(coeffs, space.functions):
        if a == 0:
            continue
        for s, c, w in zip(f.signs, f.shifts, f.coefs):
            (plus if s > 0 else minus)[int(c)] += a * w
    return plus, minus


def _dense_table(d):
    if not d:
        return 0, np.zeros(1, dtype=complex)
    lo, hi = min(d), max(d)
    arr = np.zeros(hi - lo + 1, dtype=complex)
    for c, v in d.items():
        arr[c - lo] = v
    return lo, arr


def evaluate(space, coeffs, x, q=_EVAL_Q):
    """Evaluate ``sum_m a_m phi_m(x)`` on [0, 1] (zero outside)."""
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (space.M,):
        raise ValueError(f"expected {space.M} coefficients, got shape {coeffs.shape}")
    x = np.asarray(x, dtype=float)
    y = space.L * x
    p = space.p
    plus, minus = _atom_coefficients(space, coeffs)
    out = np.zeros(x.shape, dtype=complex)
    for table, sign in ((plus, 1), (minus, -1)):
        if not table:
            continue
        lo, arr = _dense_table(table)
        base = np.floor(sign * y).astype(int)
        for o in range(-p, p + 1):
            c = base + o
            idx = c - lo
            ok = (idx >= 0) & (idx < arr.size)
            if not ok.any():
                continue
            vals = phi_values(space.filter, sign * y[ok] - c[ok], q)
            out[ok] += arr[idx[ok]] * vals
    out *= 2.0 ** (space.R / 2)
    out[(x < 0) | (x > 1)] = 0.0
    if not np.iscomplexobj(coeffs) or np.all(np.isreal(coeffs)):
        return out.real
    return out


def _atom_quadrature(filt, q):
    """Nodes (in the argument of phi) and weights for int g(t) phi(t) dt."""
    if filt.family == "haar":
        t, w = np.polynomial.legendre.leggauss(12)
        nodes = np.concatenate([(t + 1) / 4 + 0.5 * j for j in range(2)])
        weights = np.concatenate([w / 4] * 2)
        return nodes, weights, np.ones(nodes.size)
    x, v = cascade_evaluate(filt, q)
    keep = v != 0.0
    return x[keep], np.full(keep.sum(), 2.0**-q), v[keep]


_FIT_DEGREE = 10


def atom_inner_products(space, func, q=12):
    """``int_0^1 func(x) 2^{R/2} phi(s L x - c) dx`` for every atom in the space.

    Returns a dict keyed by ``(s, c)``.  Untruncated atoms use the dyadic
    trapezoid rule on the cascade grid, which is exact for polynomials of
    degree < p.  Atoms cut by an edge first subtract a local polynomial fit
    of ``func`` whose integral is known exactly from half-line moments.
    """
    L = space.L
    p = space.p
    atoms = sorted({(int(s), int(c)) for f in space.functions for s, c in zip(f.signs, f.shifts)})
    t, w, phiv = _atom_quadrature(space.filter, q)
    S = np.array([a[0] for a in atoms])[:, None]
    C = np.array([a[1] for a in atoms])[:, None]
    # phi(s y - c) = phi(t)  <=>  y = s (t + c)
    Y = S * (t[None, :] + C)
    W = np.broadcast_to(w * phiv, Y.shape).copy()
    W[(Y < 0) | (Y > L)] = 0.0
    exact = np.zeros(len(atoms), dtype=complex)
    if space.filter.family != "haar":
        W[np.isclose(Y, 0.0, atol=1e-12) | np.isclose(Y, L, atol=1e-12)] *= 0.5
    vals = np.zeros(Y.shape, dtype=complex)
    mask = W != 0.0
    vals[mask] = func(Y[mask] / L)
    if space.filter.family != "haar":
        for i, (s, c) in enumerate(atoms):
            a, b = atom_support(s, c, p)
            for e in (0, L):
                if a < e < b:
                    poly, exact[i] = _edge_fit(space, func, s, c, e, max(a, 0), min(b, L))
                    on = W[i] != 0.0
                    vals[i, on] -= poly(Y[i, on])
    res = ((vals * W).sum(axis=1) + exact) * 2.0 ** (-space.R / 2)
    return dict(zip(atoms, res))


def _edge_fit(space, func, s, c, e, lo, hi):
    """Local polynomial fit of ``func`` on an edge-cut atom and its exact integral."""
    width = hi - lo
    n = 4 * _FIT_DEGREE
    nodes = lo + width * 0.5 * (1 - np.cos(np.pi * (np.arange(n) + 0.5) / n))
    fv = np.asarray(func(nodes / space.L), dtype=complex)
    V = np.vander((nodes - e) / width, _FIT_DEGREE + 1, increasing=True)
    coef = np.linalg.lstsq(V, fv, rcond=None)[0]
    integral = sum(
        coef[r] * space.tables.edge_moment(s, c, r, space.L, e) / width**r for r in range(_FIT_DEGREE + 1)
    )

    def poly(y):
        return np.vander((y - e) / width, _FIT_DEGREE + 1, increasing=True) @ coef

    return poly, integral


def inner_products(space, f, q=12):
    """``v_m = <f, phi_m> = int_0^1 f phi_m`` for a signal ``f``."""
    exps = getattr(f, "exponentials", None)
    if exps is not None:
        nu, amp = exps()
        if len(nu) == 0:
            return np.zeros(space.M, dtype=complex)
        B = basis_fourier(space, -np.asarray(nu, dtype=float))
        return np.asarray(amp) @ B
    poly = getattr(f, "polynomial", None)
    if poly is not None:
        return polynomial_inner_products(space, poly)
    if getattr(f, "space", None) is space:
        return space.gram @ f.coeffs
    table = atom_inner_products(space, f, q)
    v = np.zeros(space.M, dtype=complex)
    for m, fn in enumerate(space.functions):
        v[m] = sum(w * table[(int(s), int(c))] for s, c, w in zip(fn.signs, fn.shifts, fn.coefs))
    return v


def polynomial_inner_products(space, poly):
    """Exact ``<x^r, phi_m>`` combinations for ``f = sum_r poly[r] x^r``."""
    L = space.L
    tb = space.tables
    v = np.zeros(space.M)
    for m, fn in enumerate(space.functions):
        acc = 0.0
        for s, c, w in zip(fn.signs, fn.shifts, fn.coefs):
            for r, a in enumerate(poly):
                if a:
                    acc += w * a * tb.interval_moment(int(s), int(c), r, L) / float(L) ** (r + 1)
        v[m] = acc * 2.0 ** (space.R / 2)
    return v


def project(space, f, q=12):
    """Coefficients of the orthogonal projection of ``f`` onto the space."""
    v = inner_products(space, f, q)
    c = sla.cho_solve(space.cholesky(), v)
    if np.allclose(c.imag, 0.0, atol=1e-14 * max(1.0, np.abs(c).max())):
        return c.real
    return c
