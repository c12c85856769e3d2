"""Exact quantities derived from the refinement equation.

``phi(x) = sqrt(2) sum_k h_k phi(2x - k)`` determines many integrals of phi
through finite linear systems.  This module computes:

* values on dyadic grids (cascade),
* the Fourier transform ``phi_hat`` (infinite product),
* moments and half-line moments,
* half-line Fourier transforms ``T_k(xi) = int_0^inf phi(x-k) e^{-2 pi i xi x} dx``,
* half-line products ``I(k, l) = int_0^inf phi(x-k) phi(x-l) dx``,
* folded products ``J(a, b) = int_0^inf phi(x-a) phi(-x-b) dx``.

These are enough to evaluate Gram matrices and Fourier transforms of the
truncated or reflected functions that appear near the interval edges.
"""

import math
from functools import lru_cache

import numpy as np

from .. import kernels
from .filters import ScalingFilter

_TAYLOR_XI = 2.0**-8
_TAYLOR_TERMS = 26


def integer_values(filt):
    """phi at the integers -p+1..p, normalised so that they sum to one."""
    p = filt.p
    if filt.family == "haar":
        return np.arange(-p + 1, p + 1), np.array([1.0, 0.0])
    ks = np.arange(-p + 2, p)  # interior integers; phi vanishes at the ends
    n = ks.size
    mat = np.zeros((n, n))
    for i, k in enumerate(ks):
        for j, l in enumerate(ks):
            mat[i, j] = math.sqrt(2.0) * filt.tap(2 * k - l)
    w, v = np.linalg.eig(mat)
    close = np.abs(w - 1.0) < 1e-8
    if close.sum() != 1:
        raise ValueError(f"filter {filt.name}: eigenvalue 1 is not simple; invalid filter")
    vec = np.real(v[:, np.argmax(close)])
    vec = vec / vec.sum()
    vals = np.concatenate([[0.0], vec, [0.0]])
    return np.arange(-p + 1, p + 1), vals


@lru_cache(maxsize=32)
def _cascade_cached(name, q):
    from .filters import make_filter

    return _cascade(make_filter(name), q)


def _cascade(filt, q):
    p = filt.p
    _, vals = integer_values(filt)
    if filt.family == "haar":
        x = -p + 1 + np.arange(2**q + 1) / 2**q
        v = np.ones(x.size)
        v[-1] = 0.0
        return x, v
    r2 = math.sqrt(2.0)
    for lev in range(q):
        step = 2**lev
        new = np.zeros(2 * vals.size - 1)
        # x_new[i] = -p+1 + i/2^{lev+1}; phi(x) = sqrt2 sum_n h_n phi(2x - n)
        idx = np.arange(new.size)
        for n in range(-p + 1, p + 1):
            src = idx + (1 - p - n) * step
            ok = (src >= 0) & (src < vals.size)
            new[ok] += r2 * filt.tap(n) * vals[src[ok]]
        vals = new
    x = -p + 1 + np.arange(vals.size) / 2**q
    return x, vals


def cascade_evaluate(filt, q):
    """Values of phi at ``j / 2^q`` on ``[-p+1, p]``; returns ``(x, values)``.

    The values are exact at every dyadic point of level ``q`` (up to rounding).
    """
    if q < 0:
        raise ValueError("q must be non-negative")
    x, v = _cascade_cached(filt.name, int(q))
    return x.copy(), v.copy()


def phi_values(filt, x, q=16):
    """phi at arbitrary points by linear interpolation of the level-q cascade."""
    grid, vals = _cascade_cached(filt.name, int(q))
    x = np.asarray(x, dtype=float)
    if filt.family == "haar":
        return ((x >= 0.0) & (x < 1.0)).astype(float)
    out = np.interp(x, grid, vals, left=0.0, right=0.0)
    return out


def phi_hat(filt, xi):
    """Fourier transform of phi, ``int phi(x) e^{-2 pi i xi x} dx``."""
    xi = np.asarray(xi, dtype=float)
    if filt.family == "haar":
        return np.exp(-1j * np.pi * xi) * np.sinc(xi)
    return kernels.phi_hat_product(filt.taps, filt.kmin, xi, filt.m1)


def m0(filt, xi):
    xi = np.asarray(xi, dtype=float)
    k = filt.indices
    return (np.exp(-2j * np.pi * xi[..., None] * k) @ filt.taps) / math.sqrt(2.0)


def moments(filt, rmax):
    """Moments ``M_r = int x^r phi(x) dx`` for r = 0..rmax."""
    h = filt.taps / math.sqrt(2.0)
    n = filt.indices.astype(float)
    M = np.zeros(rmax + 1)
    M[0] = 1.0
    for r in range(1, rmax + 1):
        acc = 0.0
        for i in range(r):
            acc += math.comb(r, i) * M[i] * np.dot(h, n ** (r - i))
        M[r] = acc * 2.0**-r / (1.0 - 2.0**-r)
    return M


def shifted_moment(M, r, k):
    """``int x^r phi(x - k) dx`` from the moments of phi."""
    return sum(math.comb(r, i) * float(k) ** (r - i) * M[i] for i in range(r + 1))


def _solve_closure(start, classify, children):
    """Solve x(u) = sum_w weight * x(child) over the closure of ``start``.

    ``classify(u)`` returns a known value or ``None`` for unknowns;
    ``children(u)`` yields ``(weight, child)`` pairs.
    """
    index = {}
    order = []
    todo = [u for u in start if classify(u) is None]
    while todo:
        u = todo.pop()
        if u in index:
            continue
        index[u] = len(order)
        order.append(u)
        for _, c in children(u):
            if c not in index and classify(c) is None:
                todo.append(c)
    n = len(order)
    mat = np.eye(n)
    rhs = np.zeros(n)
    for i, u in enumerate(order):
        for w, c in children(u):
            known = classify(c)
            if known is None:
                mat[i, index[c]] -= w
            else:
                rhs[i] += w * known
    sol = np.linalg.solve(mat, rhs) if n else np.zeros(0)
    return {u: sol[i] for i, u in enumerate(order)}


class HalfLineTables:
    """Exact integrals of truncated and reflected translates of phi."""

    def __init__(self, filt: ScalingFilter):
        self.filt = filt
        p = self.p = filt.p
        self.unknown = np.arange(-p + 1, p - 1)  # k with support straddling 0
        nU = self.unknown.size
        h2 = filt.taps / math.sqrt(2.0)
        # T_U(2 xi) = Mx T_U(xi) + known terms
        self.Mx = np.zeros((nU, nU))
        self._known = []  # (row, j, weight) with j >= p-1
        for a, k in enumerate(self.unknown):
            for n, w in zip(filt.indices, h2):
                j = 2 * k + n
                if j <= -p:
                    continue
                if j >= p - 1:
                    self._known.append((a, j, w))
                else:
                    self.Mx[a, j + p - 1] += w
        self._known_rows = np.array([t[0] for t in self._known], dtype=int)
        self._known_j = np.array([t[1] for t in self._known], dtype=float)
        self._known_w = np.array([t[2] for t in self._known], dtype=float)
        self.M = moments(filt, _TAYLOR_TERMS)
        self.half_moments = self._half_moments()
        self._I = {}
        self._J = {}
        self._g = self._reflected_autocorrelation()

    # -- half-line moments -------------------------------------------------
    def _half_moments(self):
        p = self.p
        nU = self.unknown.size
        out = np.zeros((nU, _TAYLOR_TERMS + 1))
        if nU == 0:
            return out
        for r in range(_TAYLOR_TERMS + 1):
            rhs = np.zeros(nU)
            for a, j, w in self._known:
                rhs[a] += w * shifted_moment(self.M, r, j)
            s = 2.0**-r
            out[:, r] = np.linalg.solve(np.eye(nU) - s * self.Mx, s * rhs)
        del p
        return out

    def H(self, k, r):
        """Half-line moment ``int_0^inf x^r phi(x - k) dx``."""
        p = self.p
        if k <= -p:
            return 0.0
        if k >= p - 1:
            return shifted_moment(self.M, r, k)
        return float(self.half_moments[k + p - 1, r])

    def interval_moment(self, s, c, r, L):
        """``int_0^L y^r phi(s y - c) dy`` for an atom of sign ``s``."""
        if s > 0:
            tail = sum(math.comb(r, i) * float(L) ** (r - i) * self.H(c - L, i) for i in range(r + 1))
            return self.H(c, r) - tail
        # y -> L - v maps the reflected atom to phi(v - (c + L))
        return sum(
            math.comb(r, i) * float(L) ** (r - i) * (-1.0) ** i * self.interval_moment(1, c + L, i, L)
            for i in range(r + 1)
        )

    def edge_moment(self, s, c, r, L, edge):
        """``int_[0,L] (y - edge)^r phi(s y - c) dy`` for an atom crossing only ``edge``."""
        full = shifted_moment
        sign = -1.0 if r % 2 else 1.0
        if s > 0 and edge == 0:
            return self.H(c, r)
        if s > 0:
            return full(self.M, r, c - L) - self.H(c - L, r)
        if edge == 0:
            return sign * (full(self.M, r, c) - self.H(c, r))
        return sign * self.H(L + c, r)

    # -- half-line Fourier transforms --------------------------------------
    def half_line_block(self, xi, ph=None):
        """T_k(xi) for k in ``self.unknown``; shape ``(len(unknown), len(xi))``."""
        xi = np.asarray(xi, dtype=float).ravel()
        nU = self.unknown.size
        if nU == 0 or xi.size == 0:
            return np.zeros((nU, xi.size), dtype=complex)
        amax = float(np.max(np.abs(xi)))
        levels = 0 if amax <= _TAYLOR_XI else int(math.ceil(math.log2(amax / _TAYLOR_XI)))
        xb = xi / 2.0**levels
        z = -2j * np.pi * xb
        T = np.zeros((nU, xi.size), dtype=complex)
        zr = np.ones(xi.size, dtype=complex)
        for r in range(_TAYLOR_TERMS + 1):
            T += self.half_moments[:, r : r + 1] * zr
            zr = zr * z / (r + 1)
        phb = phi_hat(self.filt, xb)
        cur = xb
        for _ in range(levels):
            known = np.zeros((nU, xi.size), dtype=complex)
            contrib = (
                self._known_w[:, None] * phb[None, :] * np.exp(-2j * np.pi * np.outer(self._known_j, cur))
            )
            np.add.at(known, self._known_rows, contrib)
            T = self.Mx @ T + known
            phb = m0(self.filt, cur) * phb
            cur = 2.0 * cur
        return T

    def T(self, k, xi, ph=None, block=None):
        """Half-line transform of ``phi(. - k)`` at ``xi`` (any integer k)."""
        p = self.p
        xi = np.asarray(xi, dtype=float)
        if k <= -p:
            return np.zeros(xi.shape, dtype=complex)
        if k >= p - 1:
            if ph is None:
                ph = phi_hat(self.filt, xi)
            return ph * np.exp(-2j * np.pi * xi * k)
        if block is None:
            block = self.half_line_block(xi).reshape((self.unknown.size,) + xi.shape)
        return block[k + p - 1]

    # -- half-line products ------------------------------------------------
    def _classify_I(self, u):
        k, l = u
        p = self.p
        if abs(k - l) >= 2 * p - 1 or min(k, l) + p <= 0:
            return 0.0
        if max(k, l) - p + 1 >= 0:
            return 1.0 if k == l else 0.0
        return None

    def _children(self, u):
        h = self.filt.taps
        ks = self.filt.indices
        for n, hn in zip(ks, h):
            for m, hm in zip(ks, h):
                yield hn * hm, (2 * u[0] + n, 2 * u[1] + m)

    def I(self, k, l):
        u = (int(k), int(l))
        val = self._classify_I(u)
        if val is not None:
            return val
        if u not in self._I:
            self._I.update(_solve_closure([u], self._classify_I, self._children))
        return float(self._I[u])

    # -- folded products ---------------------------------------------------
    def _reflected_autocorrelation(self):
        # g(t) = int phi(u) phi(-u - t) du, nonzero for t in [-2p+1, 2p-3]
        p = self.p
        ts = np.arange(-2 * p + 1, 2 * p - 2)
        hh = np.convolve(self.filt.taps, self.filt.taps)  # index n+m from 2(-p+1)
        off = 2 * (-p + 1)
        S = np.zeros((ts.size, ts.size))
        for i, t in enumerate(ts):
            for j, t2 in enumerate(ts):
                idx = t2 - 2 * t - off
                if 0 <= idx < hh.size:
                    S[i, j] = hh[idx]
        w, v = np.linalg.eig(S)
        close = np.abs(w - 1.0) < 1e-8
        if close.sum() != 1:
            raise ValueError("reflected autocorrelation is not uniquely determined")
        g = np.real(v[:, np.argmax(close)])
        g = g / g.sum()
        return {int(t): float(x) for t, x in zip(ts, g)}

    def g(self, t):
        return self._g.get(int(t), 0.0)

    def _classify_J(self, u):
        a, b = u
        p = self.p
        lo = max(a - p + 1, -b - p)
        hi = min(a + p, -b + p - 1)
        if hi <= lo or hi <= 0:
            return 0.0
        if lo >= 0:
            return self.g(a + b)
        return None

    def J(self, a, b):
        u = (int(a), int(b))
        val = self._classify_J(u)
        if val is not None:
            return val
        if u not in self._J:
            self._J.update(_solve_closure([u], self._classify_J, self._children))
        return float(self._J[u])


@lru_cache(maxsize=16)
def _tables_cached(name):
    from .filters import make_filter

    return HalfLineTables(make_filter(name))


def half_line_tables(filt):
    return _tables_cached(filt.name)
