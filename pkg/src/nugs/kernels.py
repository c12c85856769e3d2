"""Hot kernels: nonuniform DFT and the scaling-function Fourier product.

Every kernel has a numba version (``*_nb``) and a numpy version (``*_np``).
The public names dispatch on :data:`nugs._accel.USE_NUMBA`.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

_CHUNK = 512
TWO_PI = 2.0 * math.pi


def product_levels(xi_max):
    """Number of dyadic factors used for the infinite product at |xi| <= xi_max."""
    return max(30, int(math.ceil(math.log2(1.0 + abs(xi_max)))) + 30)


# ---------------------------------------------------------------------------
# y_n = sum_j c_j exp(-2 pi i xi_n (k0 + j))
# ---------------------------------------------------------------------------


def nudft_forward_np(xi, coeffs, k0):
    xi = np.asarray(xi, dtype=float)
    coeffs = np.asarray(coeffs, dtype=complex)
    k = k0 + np.arange(coeffs.size, dtype=float)
    out = np.empty(xi.size, dtype=complex)
    for s in range(0, xi.size, _CHUNK):
        e = np.exp(-2j * np.pi * np.outer(xi[s : s + _CHUNK], k))
        out[s : s + _CHUNK] = e @ coeffs
    return out


def nudft_adjoint_np(xi, values, k0, M):
    xi = np.asarray(xi, dtype=float)
    values = np.asarray(values, dtype=complex)
    k = k0 + np.arange(M, dtype=float)
    out = np.zeros(M, dtype=complex)
    for s in range(0, xi.size, _CHUNK):
        e = np.exp(2j * np.pi * np.outer(k, xi[s : s + _CHUNK]))
        out += e @ values[s : s + _CHUNK]
    return out


@njit
def nudft_forward_nb(xi, coeffs, k0):
    n = xi.shape[0]
    m = coeffs.shape[0]
    out = np.empty(n, dtype=np.complex128)
    for i in range(n):
        acc_re = 0.0
        acc_im = 0.0
        for j in range(m):
            t = -TWO_PI * xi[i] * (k0 + j)
            c = math.cos(t)
            s = math.sin(t)
            a = coeffs[j]
            acc_re += a.real * c - a.imag * s
            acc_im += a.real * s + a.imag * c
        out[i] = complex(acc_re, acc_im)
    return out


@njit
def nudft_adjoint_nb(xi, values, k0, M):
    n = xi.shape[0]
    out = np.zeros(M, dtype=np.complex128)
    for j in range(M):
        acc_re = 0.0
        acc_im = 0.0
        for i in range(n):
            t = TWO_PI * xi[i] * (k0 + j)
            c = math.cos(t)
            s = math.sin(t)
            a = values[i]
            acc_re += a.real * c - a.imag * s
            acc_im += a.real * s + a.imag * c
        out[j] = complex(acc_re, acc_im)
    return out


# ---------------------------------------------------------------------------
# phi_hat(xi) = prod_{j>=1} m0(xi / 2^j),  m0(x) = 2^{-1/2} sum_k h_k e^{-2 pi i k x}
# ---------------------------------------------------------------------------


def phi_hat_product_np(taps, kmin, xi, m1):
    xi = np.asarray(xi, dtype=float)
    flat = xi.ravel()
    out = np.ones(flat.size, dtype=complex)
    if flat.size == 0:
        return out.reshape(xi.shape)
    levels = product_levels(np.max(np.abs(flat)))
    k = kmin + np.arange(len(taps), dtype=float)
    h = np.asarray(taps, dtype=float) / math.sqrt(2.0)
    s = flat.copy()
    for _ in range(levels):
        s *= 0.5
        out *= np.exp(-2j * np.pi * np.outer(s, k)) @ h
    # remaining factor phi_hat(s) ~ exp(-2 pi i m1 s) for tiny s
    out *= np.exp(-2j * np.pi * m1 * s)
    return out.reshape(xi.shape)


@njit
def _phi_hat_product_flat_nb(taps, kmin, xi, m1):
    n = xi.shape[0]
    ntap = taps.shape[0]
    out = np.empty(n, dtype=np.complex128)
    r2 = math.sqrt(2.0)
    for i in range(n):
        x = xi[i]
        levels = max(30, int(math.ceil(math.log2(1.0 + abs(x)))) + 30)
        acc = complex(1.0, 0.0)
        s = x
        for _ in range(levels):
            s *= 0.5
            re = 0.0
            im = 0.0
            for j in range(ntap):
                t = -TWO_PI * s * (kmin + j)
                re += taps[j] * math.cos(t)
                im += taps[j] * math.sin(t)
            acc *= complex(re / r2, im / r2)
        t = -TWO_PI * m1 * s
        out[i] = acc * complex(math.cos(t), math.sin(t))
    return out


def phi_hat_product_nb(taps, kmin, xi, m1):
    xi = np.asarray(xi, dtype=float)
    flat = np.ascontiguousarray(xi.ravel())
    taps = np.ascontiguousarray(taps, dtype=float)
    return _phi_hat_product_flat_nb(taps, int(kmin), flat, float(m1)).reshape(xi.shape)


def _forward_nb(xi, coeffs, k0):
    return nudft_forward_nb(
        np.ascontiguousarray(xi, dtype=float), np.ascontiguousarray(coeffs, dtype=complex), int(k0)
    )


def _adjoint_nb(xi, values, k0, M):
    return nudft_adjoint_nb(
        np.ascontiguousarray(xi, dtype=float),
        np.ascontiguousarray(values, dtype=complex),
        int(k0),
        int(M),
    )


BACKENDS = {
    "numpy": {
        "nudft_forward": nudft_forward_np,
        "nudft_adjoint": nudft_adjoint_np,
        "phi_hat_product": phi_hat_product_np,
    },
    "numba": {
        "nudft_forward": _forward_nb,
        "nudft_adjoint": _adjoint_nb,
        "phi_hat_product": phi_hat_product_nb,
    },
}

BACKEND = "numba" if USE_NUMBA else "numpy"
nudft_forward = BACKENDS[BACKEND]["nudft_forward"]
nudft_adjoint = BACKENDS[BACKEND]["nudft_adjoint"]
phi_hat_product = BACKENDS[BACKEND]["phi_hat_product"]
