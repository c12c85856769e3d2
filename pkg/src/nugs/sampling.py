"""Nonuniform sampling schemes and density-compensation weights.

A scheme is a sorted list of frequencies in ``[-K, K]`` together with the
weights ``mu_n = (w_{n+1} - w_{n-1}) / 2`` where the sequence is extended by
the ghost points ``w_0 = w_N - 2K`` and ``w_{N+1} = w_1 + 2K``.  The weights
telescope to ``sum mu_n = 2K``.

Jittered schemes draw their perturbations from numpy's ``PCG64`` bit
generator seeded with the user seed; this generator is portable and its
algorithm is fixed, so schemes are reproducible across platforms.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

RNG_NAME = "numpy.random.PCG64"
FRAME_FAMILIES = ("seip",)


@dataclass(frozen=True, eq=False)
class SamplingScheme:
    """Frequencies, bandwidth and weights of a sampling scheme.

    ``frame`` marks schemes that are truncations of a Fourier frame.  Their
    measurement operator is the unweighted partial frame operator, so
    :attr:`operator_weights` is all ones; the density weights are still
    stored for reference.
    """

    frequencies: np.ndarray
    bandwidth: float
    weights: np.ndarray
    label: str = ""
    generator: dict = field(default_factory=dict)
    frame: bool = False

    def __post_init__(self):
        w = np.asarray(self.frequencies, dtype=float)
        mu = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "frequencies", w)
        object.__setattr__(self, "weights", mu)
        object.__setattr__(self, "bandwidth", float(self.bandwidth))
        if w.ndim != 1 or w.shape != mu.shape:
            raise ValueError("frequencies and weights must be 1-d arrays of equal length")
        _check_frequencies(w, self.bandwidth, allow_ties=self.frame)
        if np.any(mu <= 0):
            raise ValueError("weights must be positive")

    @property
    def N(self):
        return self.frequencies.size

    def __len__(self):
        return self.N

    @property
    def operator_weights(self):
        if self.frame:
            return np.ones(self.N)
        return self.weights

    def density(self, K=None):
        return density_of(self, self.bandwidth if K is None else K)

    def permuted(self, perm):
        """The same samples in another order (used to test order invariance).

        The result bypasses the sortedness check; it is only meant for
        operator-level computations.
        """
        perm = np.asarray(perm)
        obj = object.__new__(SamplingScheme)
        for name, val in (
            ("frequencies", self.frequencies[perm]),
            ("bandwidth", self.bandwidth),
            ("weights", self.weights[perm]),
            ("label", self.label + " (permuted)"),
            ("generator", dict(self.generator)),
            ("frame", self.frame),
        ):
            object.__setattr__(obj, name, val)
        return obj

    # -- serialization ------------------------------------------------------
    def to_json(self):
        gen = dict(self.generator)
        gen.setdefault("family", "custom")
        gen.setdefault("params", {})
        gen.setdefault("seed", None)
        body = {
            "label": self.label,
            "bandwidth": _Num(self.bandwidth),
            "frequencies": [_Num(v) for v in self.frequencies],
            "weights": [_Num(v) for v in self.weights],
            "generator": gen,
        }
        if self.frame:
            body["frame"] = True
        return _dumps(body)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        try:
            gen = d.get("generator", {}) or {}
            frame = bool(d.get("frame", gen.get("family") in FRAME_FAMILIES))
            return cls(
                np.array(d["frequencies"], dtype=float),
                float(d["bandwidth"]),
                np.array(d["weights"], dtype=float),
                d.get("label", ""),
                gen,
                frame,
            )
        except KeyError as exc:
            raise ValueError(f"scheme file is missing field {exc}") from exc

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())


class _Num(float):
    """Float that serializes with 17 significant digits."""


def _fmt(v):
    if not math.isfinite(v):
        raise ValueError("non-finite number in scheme")
    return format(float(v), ".17g")


def _dumps(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, _Num):
        return _fmt(obj)
    if isinstance(obj, dict):
        items = [f'{pad}  {json.dumps(k)}: {_dumps(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if obj and all(isinstance(v, _Num) for v in obj):
            return "[" + ", ".join(_fmt(v) for v in obj) + "]"
        return "[" + ", ".join(_dumps(v, indent + 1) for v in obj) + "]"
    if isinstance(obj, float):
        return _fmt(obj)
    return json.dumps(obj)


# ---------------------------------------------------------------------------
# weights and density
# ---------------------------------------------------------------------------


def _check_frequencies(w, K, allow_ties=False):
    if not (K > 0) or not math.isfinite(K):
        raise ValueError(f"bandwidth must be positive, got {K}")
    if w.size == 0:
        raise ValueError("a scheme needs at least one frequency")
    if not np.all(np.isfinite(w)):
        raise ValueError("frequencies must be finite")
    d = np.diff(w)
    if np.any(d < 0) or (not allow_ties and np.any(d == 0)):
        raise ValueError("frequencies must be strictly increasing")
    if np.max(np.abs(w)) > K * (1 + 1e-15):
        raise ValueError(f"frequencies must lie in [-K, K] with K={K}")


def _extended(w, K):
    return np.concatenate([[w[-1] - 2 * K], w, [w[0] + 2 * K]])


def compute_weights(frequencies, K, allow_ties=False):
    """Density-compensation weights ``mu_n = (w_{n+1} - w_{n-1}) / 2``."""
    w = np.asarray(frequencies, dtype=float)
    _check_frequencies(w, float(K), allow_ties)
    ext = _extended(w, float(K))
    mu = 0.5 * (ext[2:] - ext[:-2])
    if np.any(mu <= 0):
        raise ValueError("non-positive weight: more than two coincident frequencies")
    return mu


def density_of(scheme, K=None):
    """Largest gap of the scheme including the two wrap-around gaps."""
    if isinstance(scheme, SamplingScheme):
        w = scheme.frequencies
        K = scheme.bandwidth if K is None else K
        allow = scheme.frame
    else:
        w = np.asarray(scheme, dtype=float)
        allow = False
    _check_frequencies(w, float(K), allow)
    return float(np.max(np.diff(_extended(w, float(K)))))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def _validate_unit(name, v, lo_open=True, hi_closed=False):
    v = float(v)
    ok = (v > 0 if lo_open else v >= 0) and (v <= 1 if hi_closed else v < 1)
    if not ok or not math.isfinite(v):
        raise ValueError(f"{name}={v} out of range")
    return v


def jittered_scheme(K, eps, eta, seed=0):
    """``w_n = n eps + eta_n``, ``|n| <= floor(K/eps)``, ``eta_n ~ U(-eta, eta)``.

    The result is (K + eta, eps + 2 eta)-dense with bandwidth ``K + eta``.
    """
    K = float(K)
    if not (K > 0):
        raise ValueError("K must be positive")
    eps = _validate_unit("eps", eps)
    eta = float(eta)
    if not (0 <= eta < 1):
        raise ValueError(f"eta={eta} out of range")
    if eps + 2 * eta >= 1:
        raise ValueError("need eps + 2 eta < 1")
    n_half = int(math.floor(K / eps + 1e-12))
    n = np.arange(-n_half, n_half + 1)
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    jitter = rng.uniform(-eta, eta, size=n.size) if eta > 0 else np.zeros(n.size)
    w = n * eps + jitter
    if np.any(np.diff(w) <= 0):
        w = np.sort(w)
        if np.any(np.diff(w) == 0):
            raise ValueError("jitter produced duplicate frequencies")
    bw = K + eta
    return SamplingScheme(
        w,
        bw,
        compute_weights(w, bw),
        f"jittered K={K:g} eps={eps:g} eta={eta:g} seed={int(seed)}",
        {"family": "jittered", "params": {"K": K, "eps": eps, "eta": eta}, "seed": int(seed), "rng": RNG_NAME},
    )


def log_cardinality(K, delta, nu):
    """``N~ = ceil(-(log10 K + nu) / log10(1 - delta/K))``."""
    return int(math.ceil(-(math.log10(K) + nu) / math.log10(1 - delta / K)))


def log_scheme(K, delta, nu):
    """Symmetric logarithmically spaced scheme, (K, delta)-dense."""
    K = float(K)
    delta = float(delta)
    nu = float(nu)
    if not (0 < delta < 1):
        raise ValueError("delta must lie in (0, 1)")
    if not (nu > 0):
        raise ValueError("nu must be positive")
    if not (delta < K):
        raise ValueError("need delta < K")
    if not (2 * 10**-nu < delta):
        raise ValueError("need 2 * 10^-nu < delta")
    nt = log_cardinality(K, delta, nu)
    pos = 10 ** (-nu + np.arange(nt + 1) / nt * (math.log10(K) + nu))
    pos[-1] = K
    w = np.concatenate([-pos[::-1], pos])
    return SamplingScheme(
        w,
        K,
        compute_weights(w, K),
        f"log K={K:g} delta={delta:g} nu={nu:g}",
        {"family": "log", "params": {"K": K, "delta": delta, "nu": nu}, "seed": None},
    )


def seip_frequencies(N):
    n = np.arange(1, int(N) + 1, dtype=float)
    pos = n * (1 - n**-0.5)
    return np.concatenate([-pos[::-1], pos])


def seip_scheme(N):
    """Truncated frame ``w_n = n (1 - |n|^{-1/2})``, ``1 <= |n| <= N``.

    ``w_1 = w_{-1} = 0`` for every N, so the list holds ``2N`` entries with a
    double point at zero, matching the frame sequence's indexing.  N = 1 has
    zero bandwidth and is rejected.
    """
    N = int(N)
    if N < 2:
        raise ValueError("seip scheme needs N >= 2 (N = 1 gives the single double point 0)")
    w = seip_frequencies(N)
    K = float(w[-1])
    return SamplingScheme(
        w,
        K,
        compute_weights(w, K, allow_ties=True),
        f"seip N={N}",
        {"family": "seip", "params": {"N": N}, "seed": None},
        frame=True,
    )


def uniform_scheme(K, eps=1.0):
    """``w_n = n eps`` for ``|n| <= floor(K/eps)``."""
    K = float(K)
    eps = _validate_unit("eps", eps, hi_closed=True)
    if not (K > 0):
        raise ValueError("K must be positive")
    n_half = int(math.floor(K / eps + 1e-12))
    w = np.arange(-n_half, n_half + 1) * eps
    return SamplingScheme(
        w,
        K,
        compute_weights(w, K),
        f"uniform K={K:g} eps={eps:g}",
        {"family": "uniform", "params": {"K": K, "eps": eps}, "seed": None},
    )


def scheme_from_frequencies(frequencies, K, label="custom", weights=None):
    w = np.asarray(frequencies, dtype=float)
    mu = compute_weights(w, K) if weights is None else np.asarray(weights, dtype=float)
    return SamplingScheme(w, K, mu, label, {"family": "custom", "params": {}, "seed": None})
