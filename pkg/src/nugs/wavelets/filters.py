"""Orthonormal scaling filters (Haar and Daubechies DB2-DB4).

Taps are indexed ``h_k`` for ``k = -p+1, ..., p`` so that the scaling function
is supported in ``[-p+1, p]``.  For Haar (``p = 1``) this gives
``phi = 1_[0,1)``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

SUPPORTED_P = (1, 2, 3, 4)


@dataclass(frozen=True, eq=False)
class ScalingFilter:
    family: str
    p: int
    taps: np.ndarray = field(repr=False)

    @property
    def name(self):
        return "haar" if self.family == "haar" else f"db{self.p}"

    @property
    def kmin(self):
        return -self.p + 1

    @property
    def indices(self):
        return np.arange(self.kmin, self.p + 1)

    @property
    def m1(self):
        """First moment of phi, which equals sum_k k h_k / sqrt(2)."""
        return float(np.dot(self.indices, self.taps) / math.sqrt(2.0))

    def tap(self, k):
        j = k - self.kmin
        if 0 <= j < self.taps.size:
            return float(self.taps[j])
        return 0.0

    def wavelet_taps(self):
        """g_k = (-1)^k h_{1-k}, on the same index range as h."""
        ks = self.indices
        return np.array([(-1.0) ** k * self.tap(1 - k) for k in ks])


def _daubechies_taps(p):
    # |m0|^2 = cos^{2p}(pi x) P(sin^2(pi x)) with P(y) = sum_k C(p-1+k, k) y^k.
    # Factor P keeping the roots of z^2 - (2 - 4y) z + 1 inside the unit circle.
    coeffs = [math.comb(p - 1 + k, k) for k in range(p)]
    poly = np.poly1d([1.0])
    for _ in range(p):
        poly = poly * np.poly1d([1.0, 1.0])
    for y in np.roots(coeffs[::-1]) if p > 1 else []:
        pair = np.roots([1.0, -(2.0 - 4.0 * y), 1.0])
        z = pair[np.argmin(np.abs(pair))]
        poly = poly * np.poly1d([1.0, -z])
    h = np.real(poly.coeffs)
    return h * math.sqrt(2.0) / h.sum()


def make_filter(family, p=None):
    """Build a scaling filter.

    ``family`` is ``"haar"``, ``"daubechies"`` (with ``p``) or a short name
    such as ``"db2"``.
    """
    fam = str(family).strip().lower()
    if fam.startswith("db") and fam[2:].isdigit():
        p = int(fam[2:])
        fam = "daubechies"
    if fam == "haar":
        if p not in (None, 1):
            raise ValueError("the Haar filter has p = 1")
        return ScalingFilter("haar", 1, np.array([1.0, 1.0]) / math.sqrt(2.0))
    if fam in ("daubechies", "db"):
        if p is None:
            raise ValueError("daubechies filters need p")
        p = int(p)
        if p not in SUPPORTED_P:
            raise ValueError(f"unsupported filter order p={p}; expected one of {SUPPORTED_P}")
        if p == 1:
            return make_filter("haar")
        return ScalingFilter("daubechies", p, _daubechies_taps(p))
    raise ValueError(f"unknown filter family {family!r}")


def check_filter(filt, tol=1e-12):
    """Return the largest violation of the orthonormality conditions."""
    h = filt.taps
    err = abs(h.sum() - math.sqrt(2.0))
    for m in range(filt.p):
        s = float(np.dot(h[2 * m :], h[: h.size - 2 * m]))
        err = max(err, abs(s - (1.0 if m == 0 else 0.0)))
    return err
