"""Test signals supported on [0, 1] with pointwise and Fourier evaluation.

Fourier convention: ``f_hat(w) = int_0^1 f(x) exp(-2 pi i w x) dx``.

Signals that are finite sums of exponentials (trigonometric polynomials,
indicator of [0,1], single exponentials) have exact transforms and expose
``exponentials()`` so that inner products with wavelet bases are exact.
Everything else goes through Gauss-Legendre panel quadrature.
"""

import math

import numpy as np

from .wavelets.space import basis_fourier, evaluate

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class QuadratureError(RuntimeError):
    """Quadrature did not reach the requested tolerance."""

    def __init__(self, achieved, tol):
        super().__init__(f"quadrature reached {achieved:.3e}, requested {tol:.1e}")
        self.achieved = achieved
        self.tol = tol


def _unit_exp_integral(t):
    """int_0^1 exp(2 pi i t x) dx."""
    t = np.asarray(t, dtype=float)
    return np.exp(1j * np.pi * t) * np.sinc(t)


def gauss_panels(n_panels, a=0.0, b=1.0, order=None):
    """Nodes and weights of composite Gauss-Legendre on ``n_panels`` equal panels."""
    if order is None:
        t, w = _GL_NODES, _GL_WEIGHTS
    else:
        t, w = np.polynomial.legendre.leggauss(order)
    h = (b - a) / n_panels
    left = a + h * np.arange(n_panels)
    x = (left[:, None] + h * (t[None, :] + 1) / 2).ravel()
    wt = np.tile(w * h / 2, n_panels)
    return x, wt


def fourier_quadrature(func, omega, tol=1e-9, max_panels=2**16, chunk=256):
    """Fourier transform of ``func`` on [0, 1] by panel Gauss-Legendre.

    Panels are no wider than ``1/(4 |omega|)``; the panel count doubles until
    two successive estimates agree to ``tol``.
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    wmax = float(np.max(np.abs(omega))) if omega.size else 0.0
    n = max(16, int(math.ceil(4 * wmax)))

    def estimate(npan):
        x, wt = gauss_panels(npan)
        fx = np.asarray(func(x), dtype=complex) * wt
        out = np.empty(omega.size, dtype=complex)
        for s in range(0, omega.size, chunk):
            out[s : s + chunk] = np.exp(-2j * np.pi * np.outer(omega[s : s + chunk], x)) @ fx
        return out

    prev = estimate(n)
    while True:
        n *= 2
        cur = estimate(n)
        err = float(np.max(np.abs(cur - prev))) if cur.size else 0.0
        if err <= tol:
            return cur
        if n >= max_panels:
            raise QuadratureError(err, tol)
        prev = cur


class Signal:
    """Base class: subclasses implement ``evaluate`` and ``fourier``."""

    kind = "signal"

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):  # pragma: no cover - abstract
        raise NotImplementedError

    def fourier(self, omega):  # pragma: no cover - abstract
        raise NotImplementedError

    def norm(self):
        x, w = gauss_panels(256)
        return float(np.sqrt(np.sum(w * np.abs(self.evaluate(x)) ** 2)))

    def descriptor(self):
        return {"kind": self.kind}


class ExpSum(Signal):
    """``f(x) = sum_j a_j exp(2 pi i nu_j x)`` on [0, 1]."""

    kind = "exp-sum"

    def __init__(self, freqs, amps):
        self.freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
        self.amps = np.atleast_1d(np.asarray(amps, dtype=complex))
        if self.freqs.shape != self.amps.shape:
            raise ValueError("freqs and amps must have the same length")

    def exponentials(self):
        return self.freqs, self.amps

    @property
    def is_real(self):
        # real iff amplitudes pair up as conjugates at opposite frequencies
        for nu, a in zip(self.freqs, self.amps):
            j = np.where(np.isclose(self.freqs, -nu))[0]
            b = self.amps[j].sum() if j.size else 0.0
            if abs(a - np.conj(b)) > 1e-14 * max(1.0, abs(a)):
                return False
        return True

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        vals = np.exp(2j * np.pi * np.multiply.outer(x, self.freqs)) @ self.amps
        vals = np.where((x >= 0) & (x <= 1), vals, 0.0)
        return vals.real if self.is_real else vals

    def fourier(self, omega):
        omega_arr = np.asarray(omega, dtype=float)
        flat = omega_arr.ravel()
        vals = _unit_exp_integral(self.freqs[None, :] - flat[:, None]) @ self.amps
        return vals.reshape(omega_arr.shape) if omega_arr.ndim else complex(vals[0])

    def norm(self):
        if not self.freqs.size:
            return 0.0
        E = _unit_exp_integral(self.freqs[:, None] - self.freqs[None, :])
        return float(np.sqrt(max(np.real(self.amps @ E @ np.conj(self.amps)), 0.0)))

    def descriptor(self):
        return {"kind": self.kind, "freqs": self.freqs.tolist(), "amps": [[a.real, a.imag] for a in self.amps]}


class TrigPoly(ExpSum):
    """``sum a_k cos(2 pi k x) + b_k sin(2 pi k x)`` restricted to [0, 1]."""

    kind = "trig-poly"

    def __init__(self, terms):
        self.terms = tuple((float(k), float(a), float(b)) for k, a, b in terms)
        freqs, amps = [], []
        for k, a, b in self.terms:
            if k == 0:
                freqs.append(0.0)
                amps.append(a)
                continue
            freqs += [k, -k]
            amps += [0.5 * a - 0.5j * b, 0.5 * a + 0.5j * b]
        super().__init__(freqs, amps)

    @property
    def is_real(self):
        return True

    def descriptor(self):
        return {"kind": self.kind, "terms": [list(t) for t in self.terms]}


class Exponential(ExpSum):
    """``exp(2 pi i w0 x)`` on [0, 1]."""

    kind = "exponential"

    def __init__(self, w0, amplitude=1.0):
        super().__init__([w0], [amplitude])

    @property
    def is_real(self):
        return False


def indicator():
    """The indicator of [0, 1]."""
    return TrigPoly([(0, 1.0, 0.0)])


class Composite(Signal):
    """Arbitrary pointwise-evaluable function on [0, 1] (quadrature-backed)."""

    kind = "composite"

    def __init__(self, func, label="composite", tol=1e-9, norm_panels=512):
        self.func = func
        self.label = label
        self.tol = tol
        self.norm_panels = norm_panels

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= 0) & (x <= 1)
        out = np.zeros(x.shape, dtype=float)
        out[inside] = self.func(x[inside])
        return out

    def fourier(self, omega):
        omega_arr = np.asarray(omega, dtype=float)
        vals = fourier_quadrature(self.func, omega_arr.ravel(), tol=self.tol)
        return vals.reshape(omega_arr.shape) if omega_arr.ndim else complex(vals[0])

    def norm(self):
        x, w = gauss_panels(self.norm_panels)
        return float(np.sqrt(np.sum(w * np.abs(self.func(x)) ** 2)))

    def descriptor(self):
        return {"kind": self.kind, "label": self.label}


class NormalizedSinc(Composite):
    """``sin(r pi (x - c)) / (r pi (x - c))`` scaled to unit norm on [0, 1]."""

    kind = "normalized-sinc"

    def __init__(self, center=0.5, rate=14.0, tol=1e-9):
        self.center = float(center)
        self.rate = float(rate)
        raw = Composite(lambda x: np.sinc(self.rate * (x - self.center)))
        self.scale = 1.0 / raw.norm()
        super().__init__(lambda x: self.scale * np.sinc(self.rate * (x - self.center)), "normalized-sinc", tol)

    def descriptor(self):
        return {"kind": self.kind, "center": self.center, "rate": self.rate}


class Polynomial(Composite):
    """``sum_r c_r x^r``; inner products with wavelet atoms are exact."""

    kind = "polynomial"

    def __init__(self, coeffs, tol=1e-9):
        self.polynomial = tuple(float(c) for c in coeffs)
        super().__init__(lambda x: np.polynomial.polynomial.polyval(x, self.polynomial), "polynomial", tol)

    def norm(self):
        c = np.array(self.polynomial)
        n = c.size
        H = 1.0 / (np.arange(n)[:, None] + np.arange(n)[None, :] + 1.0)
        return float(np.sqrt(c @ H @ c))

    def descriptor(self):
        return {"kind": self.kind, "coeffs": list(self.polynomial)}


class Expansion(Signal):
    """An element ``sum_m a_m phi_m`` of a reconstruction space."""

    kind = "expansion"

    def __init__(self, space, coeffs):
        self.space = space
        self.coeffs = np.asarray(coeffs)
        if self.coeffs.shape != (space.M,):
            raise ValueError(f"expected {space.M} coefficients")

    def evaluate(self, x):
        return evaluate(self.space, self.coeffs, x)

    def fourier(self, omega):
        omega_arr = np.asarray(omega, dtype=float)
        vals = basis_fourier(self.space, omega_arr.ravel()) @ self.coeffs
        return vals.reshape(omega_arr.shape) if omega_arr.ndim else complex(vals[0])

    def norm(self):
        c = self.coeffs
        return float(np.sqrt(max(np.real(np.conj(c) @ self.space.gram @ c), 0.0)))

    def descriptor(self):
        return {"kind": self.kind, "space": self.space.descriptor(), "coeffs": np.asarray(self.coeffs).tolist()}


# ---------------------------------------------------------------------------
# named signals used by the experiments
# ---------------------------------------------------------------------------


def _fig_noise_signal(x):
    return -np.exp(np.cos(6 * np.pi * x) + np.sin(4 * np.pi * x)) * np.cos(10 * np.pi * x) + np.cos(4 * np.pi * x)


NAMED = {
    # cos(6 pi x) + 1/2 sin(2 pi x)
    "table3": lambda: TrigPoly([(3, 1.0, 0.0), (1, 0.0, 0.5)]),
    # 1/2 cos(4 pi x)
    "table2": lambda: TrigPoly([(2, 0.5, 0.0)]),
    # cos(8 pi x) - 2 sin(2 pi x)
    "table4": lambda: TrigPoly([(4, 1.0, 0.0), (1, 0.0, -2.0)]),
    # sin(10 pi x) / ||sin(10 pi x)||
    "table4-noise": lambda: TrigPoly([(5, 0.0, math.sqrt(2.0))]),
    # 1/2 cos(8 pi x) - sin(2 pi x)
    "gridding": lambda: TrigPoly([(4, 0.5, 0.0), (1, 0.0, -1.0)]),
    "smooth-nonperiodic": lambda: Composite(_fig_noise_signal, "smooth-nonperiodic"),
    "sinc-noise": lambda: NormalizedSinc(0.5, 14.0),
    "indicator": indicator,
    "zero": lambda: TrigPoly([]),
}


def parse_signal(spec):
    """Build a signal from a name in :data:`NAMED` or an inline description.

    Inline forms: ``trig:k,a,b;k,a,b`` for trigonometric polynomials,
    ``sinc:center,rate`` for a normalised sinc, ``poly:c0,c1,...``.
    """
    if isinstance(spec, Signal):
        return spec
    text = str(spec).strip()
    if text in NAMED:
        return NAMED[text]()
    kind, _, body = text.partition(":")
    try:
        if kind == "trig":
            terms = [tuple(float(v) for v in part.split(",")) for part in body.split(";") if part.strip()]
            if any(len(t) != 3 for t in terms):
                raise ValueError
            return TrigPoly(terms)
        if kind == "sinc":
            c, r = (float(v) for v in body.split(","))
            return NormalizedSinc(c, r)
        if kind == "poly":
            return Polynomial([float(v) for v in body.split(",")])
    except ValueError:
        pass
    raise ValueError(f"cannot parse signal {spec!r}; known names: {sorted(NAMED)}")
