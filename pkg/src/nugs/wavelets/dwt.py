"""Discrete wavelet transform inside a reconstruction space.

Coefficients of ``f = sum c_m phi_{R,m}`` are mapped to the multilevel
representation ``[a_J, d_J, d_{J+1}, ..., d_{R-1}]`` of ``V_J + W_J + ... + W_{R-1}``
(coarsest first).

* periodic spaces use the periodized two-channel filter bank
  ``a_k = sum_n h_n c_{2k+n}``, ``d_k = sum_n g_n c_{2k+n}`` (indices mod 2^{j+1});
* other types use a generic nested construction: the coarse basis is refined
  exactly into the fine one through the refinement relation, and the detail
  space is the Gram-orthogonal complement, seeded by the standard wavelet
  pattern and symmetrically orthonormalized so interior details coincide with
  the usual wavelets.  Levels stop at the coarsest scale the space builder
  accepts.
"""

from functools import lru_cache

import numpy as np
import scipy.linalg as sla

from .space import BasisFunction, _clipped_intervals, _overlap, _pair_product, build_space


def _periodic_step(c, h, g, kmin):
    n = c.shape[0]
    half = n // 2
    idx = (2 * np.arange(half)[:, None] + kmin + np.arange(h.size)[None, :]) % n
    blk = c[idx]
    return blk @ h, blk @ g


def _periodic_inverse(a, d, h, g, kmin):
    half = a.shape[0]
    n = 2 * half
    out = np.zeros(n, dtype=np.result_type(a, d, float))
    idx = (2 * np.arange(half)[:, None] + kmin + np.arange(h.size)[None, :]) % n
    np.add.at(out, idx.ravel(), (a[:, None] * h[None, :] + d[:, None] * g[None, :]).ravel())
    return out


def _refine(f, taps, kmin):
    s = np.repeat(f.signs, taps.size)
    c = (2 * f.shifts[:, None] + kmin + np.arange(taps.size)[None, :]).ravel()
    w = (f.coefs[:, None] * taps[None, :]).ravel()
    return BasisFunction(s, c, w, False)


def _pattern(n_fine, k, taps, kmin):
    v = np.zeros(n_fine)
    for j, t in enumerate(taps):
        m = 2 * k + kmin + j
        if 0 <= m < n_fine:
            v[m] += t
    return v


class _Level:
    """Two-scale relation between ``V_j`` (coarse) and ``V_{j+1}`` (fine)."""

    def __init__(self, coarse, fine, tol=1e-9):
        filt = fine.filter
        h = filt.taps
        kmin = filt.kmin
        Lf = fine.L
        p = filt.p
        refined = [_refine(f, h, kmin) for f in coarse.functions]
        iv_f = [_clipped_intervals(f, p, Lf) for f in fine.functions]
        X = np.zeros((fine.M, coarse.M))
        for j, r in enumerate(refined):
            iv = _clipped_intervals(r, p, Lf)
            for i, f in enumerate(fine.functions):
                if _overlap(iv_f[i], iv):
                    X[i, j] = _pair_product(fine.tables, f, r, Lf)
        Gf = fine.gram
        P = sla.cho_solve(fine.cholesky(), X)
        resid = np.diag(coarse.gram) - np.einsum("ij,ij->j", X, P)
        if np.max(np.abs(resid)) > tol:
            raise ValueError(
                f"{coarse.label()} is not contained in {fine.label()} (residual {np.max(np.abs(resid)):.2e})"
            )
        self.P = P
        self.Gc = coarse.gram
        self.Gf = Gf
        self.coarse_chol = coarse.cholesky()
        # detail basis: complement of span(P) in the G_f inner product
        Lc = np.linalg.cholesky(Gf)
        Pw = Lc.T @ P
        g = filt.wavelet_taps()
        n_detail = fine.M - coarse.M
        seeds = np.column_stack([_pattern(fine.M, k, g, kmin) for k in range(n_detail)]) if n_detail else np.zeros((fine.M, 0))
        Sw = Lc.T @ seeds
        Qp, _ = np.linalg.qr(Pw)
        Sw = Sw - Qp @ (Qp.conj().T @ Sw)
        # symmetric (Loewdin) orthonormalization keeps the seeds' locality
        w, V = np.linalg.eigh(Sw.T @ Sw)
        if n_detail and w[0] <= 1e-12 * w[-1]:
            raise ValueError("degenerate detail seeds")
        Qw = Sw @ (V / np.sqrt(w)) @ V.T
        self.Q = sla.solve_triangular(Lc.T, Qw, lower=False)

    def forward(self, c):
        a = sla.cho_solve(self.coarse_chol, self.P.T @ (self.Gf @ c))
        d = self.Q.T @ (self.Gf @ c)
        return a, d

    def inverse(self, a, d):
        return self.P @ a + self.Q @ d


@lru_cache(maxsize=64)
def _levels(family, p, R, J, btype):
    from .filters import make_filter

    filt = make_filter(family, p)
    spaces = {}
    j = R
    while j - 1 >= J:
        try:
            spaces[j - 1] = build_space(filt, j - 1, min(J, j - 1), btype)
        except ValueError:
            break
        j -= 1
    spaces[R] = build_space(filt, R, J, btype)
    levels = []
    for k in range(j, R):
        levels.append(_Level(spaces[k], spaces[k + 1]))
    return j, levels


def coarsest_level(space):
    """Coarsest scale reached by :func:`dwt` for this space."""
    if space.boundary_type == "periodic":
        return space.J
    return _levels(space.filter.family, space.p, space.R, space.J, space.boundary_type)[0]


def dwt(space, coeffs):
    """Multilevel wavelet coefficients ``[a_J, d_J, ..., d_{R-1}]``."""
    c = np.asarray(coeffs)
    if c.shape != (space.M,):
        raise ValueError(f"expected {space.M} coefficients, got shape {c.shape}")
    details = []
    if space.boundary_type == "periodic":
        h, g, kmin = space.filter.taps, space.filter.wavelet_taps(), space.filter.kmin
        for _ in range(space.R - space.J):
            c, d = _periodic_step(c, h, g, kmin)
            details.append(d)
    else:
        _, levels = _levels(space.filter.family, space.p, space.R, space.J, space.boundary_type)
        for lev in reversed(levels):
            c, d = lev.forward(c)
            details.append(d)
    return np.concatenate([c] + details[::-1])


def idwt(space, wcoeffs):
    """Inverse of :func:`dwt`."""
    w = np.asarray(wcoeffs)
    if w.shape != (space.M,):
        raise ValueError(f"expected {space.M} coefficients, got shape {w.shape}")
    if space.boundary_type == "periodic":
        h, g, kmin = space.filter.taps, space.filter.wavelet_taps(), space.filter.kmin
        n = 2**space.J
        c = w[:n]
        pos = n
        while pos < space.M:
            c = _periodic_inverse(c, w[pos : pos + n], h, g, kmin)
            pos += n
            n *= 2
        return c
    j0, levels = _levels(space.filter.family, space.p, space.R, space.J, space.boundary_type)
    n = levels[0].P.shape[1] if levels else space.M
    c = w[:n]
    pos = n
    for lev in levels:
        m = lev.Q.shape[1]
        c = lev.inverse(c, w[pos : pos + m])
        pos += m
    return c


def level_slices(space):
    """Slices of the dwt output: ``[("a", j0, slice), ("d", j, slice), ...]``."""
    if space.boundary_type == "periodic":
        n = 2**space.J
        out = [("a", space.J, slice(0, n))]
        pos = n
        for j in range(space.J, space.R):
            out.append(("d", j, slice(pos, pos + 2**j)))
            pos += 2**j
        return out
    j0, levels = _levels(space.filter.family, space.p, space.R, space.J, space.boundary_type)
    n = levels[0].P.shape[1] if levels else space.M
    out = [("a", j0, slice(0, n))]
    pos = n
    for j, lev in zip(range(j0, space.R), levels):
        m = lev.Q.shape[1]
        out.append(("d", j, slice(pos, pos + m)))
        pos += m
    return out
