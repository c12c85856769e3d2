import json
import math

import numpy as np
import pytest
import scipy.linalg as sla
from scipy.integrate import trapezoid

from nugs.constants import (
    InstabilityError,
    _haar_c3,
    blowup_scan,
    c2_estimate,
    constants_report,
    haar_bound,
    quadratic_form_extrema,
    reconstruction_bound,
    sigma_max_at,
    z_residual,
)
from nugs.operators import condition_number, dense_matrix
from nugs.sampling import SamplingScheme, density_of, jittered_scheme, log_scheme, seip_scheme, uniform_scheme
from nugs.wavelets.filters import make_filter
from nugs.wavelets.space import build_space

from helpers import random_dense_scheme


def haar(R):
    return build_space(make_filter("haar"), R, 0, "periodic")


def nyquist(M):
    n = np.arange(-M // 2, M // 2).astype(float)
    return SamplingScheme(n, M / 2 + 0.5, np.ones(M))


# -- C1, C3 --------------------------------------------------------------------


def test_uniform_nyquist_extrema():
    # A = diag(phi^(n/M)) * unitary DFT, so the extrema are sinc^2 at n = -M/2 and n = 0
    c1, c3 = quadratic_form_extrema(nyquist(16), haar(4))
    assert c1 == pytest.approx((2 / math.pi) ** 2, abs=1e-12)
    assert c3 == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("fam,btype", [("haar", "periodic"), ("db2", "boundary"), ("db3", "folded")])
def test_extrema_match_generalized_eigenproblem(fam, btype):
    sp = build_space(make_filter(fam), 5, None, btype)
    sch = log_scheme(32, 0.8, 0.4)
    A = dense_matrix(sch, sp)
    lam = sla.eigh(A.conj().T @ A, sp.gram, eigvals_only=True)
    c1, c3 = quadratic_form_extrema(sch, sp)
    assert c1 == pytest.approx(lam[0], rel=1e-8)
    assert c3 == pytest.approx(lam[-1], rel=1e-8)


def test_underdetermined_c1_zero():
    c1, c3 = quadratic_form_extrema(uniform_scheme(8, 1.0), haar(5))
    assert c1 == 0.0 and c3 > 0


@pytest.mark.parametrize(
    "scheme", [log_scheme(32, 0.8, 0.4), jittered_scheme(32, 0.6, 0.1, 0), log_scheme(64, 0.95, 0.33)], ids=["log", "jit", "log95"]
)
def test_ordering_and_dense_upper_bound(scheme):
    d = density_of(scheme)
    for fam, btype in [("haar", "periodic"), ("db2", "periodic"), ("db2", "boundary")]:
        sp = build_space(make_filter(fam), 6, None, btype)
        c1, c3 = quadratic_form_extrema(scheme, sp)
        assert 0 < c1 <= c3 <= (1 + d) ** 2 * (1 + 1e-10)


def test_kappa_is_sqrt_c3_over_c1():
    for R in (5, 6):
        sch = log_scheme(32, 0.8, 0.4)
        c1, c3 = quadratic_form_extrema(sch, haar(R))
        k = condition_number(dense_matrix(sch, haar(R)))
        assert k == pytest.approx(math.sqrt(c3 / c1), rel=1e-8)
        assert (1 + 0.8) / math.sqrt(c1) >= k


# -- C2 ------------------------------------------------------------------------


def test_c2_trace_monotone_and_bounded():
    sch = log_scheme(32, 0.8, 0.4)
    est = c2_estimate(sch, tol=1e-4, cap=1024)
    assert all(b >= a for a, b in zip(est.trace, est.trace[1:]))
    assert est.value <= (1 + 0.8) ** 2 * (1 + 1e-10)
    assert est.dimensions[0] == 64
    # the raw values increase too, since Haar spaces are nested
    raw = [_haar_c3(sch, q) for q in range(4, 10)]
    assert all(b >= a * (1 - 1e-12) for a, b in zip(raw, raw[1:]))


def test_c2_dominates_c3_over_haar_subspaces():
    sch = jittered_scheme(32, 0.6, 0.1, 3)
    est = c2_estimate(sch, tol=0.0, cap=2048)
    for R in (4, 6, 8):
        _, c3 = quadratic_form_extrema(sch, haar(R))
        assert c3 <= est.value * (1 + 1e-8)


def test_c2_cap_warning():
    with pytest.warns(UserWarning):
        est = c2_estimate(seip_scheme(38), tol=1e-12, q0=6, cap=128)
    assert not est.converged and est.dimensions[-1] == 128
    with pytest.raises(ValueError):
        c2_estimate(seip_scheme(38), cap=1000)


def test_sigma_max_at():
    sch = seip_scheme(38)
    assert sigma_max_at(sch, 256) == pytest.approx(math.sqrt(_haar_c3(sch, 8)))


# -- bounds --------------------------------------------------------------------


def test_reconstruction_bound_modes():
    sch = log_scheme(32, 0.8, 0.4)
    sp = haar(6)
    c1, _ = quadratic_form_extrema(sch, sp)
    assert reconstruction_bound(sch, sp, "dense", delta=0.8) == pytest.approx(1.8 / math.sqrt(c1))
    assert reconstruction_bound(sch, sp, "frame", c2=2.0) == pytest.approx(math.sqrt(2.0 / c1))
    with pytest.raises(ValueError):
        reconstruction_bound(sch, sp, "other")
    with pytest.raises(InstabilityError):
        reconstruction_bound(uniform_scheme(8, 1.0), haar(5))


def test_nyquist_bound_tends_to_one():
    # delta -> 0 with the sinc envelope flattening as the space shrinks relative to K
    vals = []
    for R in (2, 3, 4):
        sch = uniform_scheme(64, 1.0 / 8)
        c1, _ = quadratic_form_extrema(sch, haar(R))
        vals.append((1 + density_of(sch)) / math.sqrt(c1))
    assert vals[0] < vals[1] < vals[2] < 1.3


def test_haar_bound_cases():
    assert haar_bound(0.8, 64, 32) == pytest.approx(math.pi / 2 * 9, abs=1e-9)
    assert haar_bound(0.8, 64, 32) == pytest.approx(14.137167, abs=1e-6)
    assert haar_bound(0.9, 64, 64) == pytest.approx(29.845130, abs=1e-6)
    x = math.pi / 2 + math.pi * 0.5 / 10
    assert haar_bound(0.5, 10, 7.3) == pytest.approx(x / math.sin(x) * 3)


def test_haar_bound_large_m_limit():
    vals = [haar_bound(0.5, M, M / 2 + 0.25) / 3 for M in (10, 100, 1000, 10**6)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(math.pi / 2, rel=1e-5)


@pytest.mark.parametrize("args", [(0.5, 65, 32), (0.0, 8, 8), (1.0, 8, 8), (0.5, 1, 8)])
def test_haar_bound_refuses(args):
    with pytest.raises(ValueError):
        haar_bound(*args)


def test_haar_bound_dominates_measured_constant():
    rng = np.random.default_rng(11)
    for _ in range(50):
        R = int(rng.integers(3, 6))
        M = 2**R
        K = float(rng.uniform(M / 2, 2 * M))
        delta = float(rng.uniform(0.1, 0.9))
        sch = random_dense_scheme(rng, K, delta)
        c1, _ = quadratic_form_extrema(sch, haar(R))
        assert (1 + delta) / math.sqrt(c1) <= haar_bound(delta, M, K) * (1 + 1e-6)


# -- z-residual ----------------------------------------------------------------


def test_z_residual_zero_and_monotone():
    sp = haar(3)
    assert z_residual(sp, 0.0) == 1.0
    zs = [0.0, 0.5, 1, 2, 4, 8, 16, 32, 64]
    E = [z_residual(sp, z) for z in zs]
    assert all(b <= a + 1e-12 for a, b in zip(E, E[1:]))
    assert E[-1] < 0.2
    with pytest.raises(ValueError):
        z_residual(sp, -1)


def test_z_residual_boundary_space_monotone():
    sp = build_space(make_filter("db2"), 4, None, "boundary")
    E = [z_residual(sp, z) for z in (2, 8, 32)]
    assert 1 >= E[0] >= E[1] >= E[2] > 0


def test_z_residual_haar_r3_fine_grid_oracle():
    # Haar basis transforms in closed form, inside-energy matrix by trapezoid on a fine grid
    M, z = 8, 64.0
    w = np.linspace(-z, z, 2**19 + 1)
    k = np.arange(M)
    F = np.exp(-1j * np.pi * w / M)[:, None] * np.sinc(w / M)[:, None] * np.exp(-2j * np.pi * np.outer(w, k) / M) / math.sqrt(M)
    inside = trapezoid(F.conj()[:, :, None] * F[:, None, :], w, axis=0)
    lam_min = np.linalg.eigvalsh(np.real(inside))[0]
    oracle = math.sqrt(1 - lam_min)
    assert abs(z_residual(haar(3), z) - oracle) < 1e-4


# -- report --------------------------------------------------------------------


def test_report_json_roundtrip():
    sch = log_scheme(32, 0.8, 0.4)
    rep = constants_report(sch, haar(6), delta=0.8, c2_tol=1e-3, cap=1024, z_values=(0, 16))
    d = json.loads(rep.to_json())
    assert d["kappa"] >= 1
    assert 0 < d["c1"] <= d["c3"] <= d["c2_estimate"] * (1 + 1e-3)
    assert d["haar_bound"] == pytest.approx(14.137167, abs=1e-6)
    assert d["bound_dense"] == pytest.approx(1.8 / math.sqrt(d["c1"]))
    assert d["z_residuals"][0] == [0.0, 1.0]
    assert d["space"]["R"] == 6


def test_report_frame_has_no_dense_bound():
    rep = constants_report(seip_scheme(38), haar(6), cap=512)
    assert rep.bound_dense is None and rep.haar_bound is None
    assert rep.bound_frame > 0


# -- blowup --------------------------------------------------------------------


def test_blowup_stable_and_unstable_regimes():
    rows = blowup_scan(6, (0.3125, 0.4375, 0.5, 0.625))
    k = {r.c0: r.kappa for r in rows}
    assert k[0.3125] > 1e10
    assert k[0.4375] > 1e4
    assert k[0.3125] > k[0.4375]
    assert k[0.5] < 2 and k[0.625] < 2
    assert k[0.5] == pytest.approx(1.7835, rel=0.1)
    for r in rows:
        if r.c0 >= 0.5:
            assert r.ratio == pytest.approx(1.0, abs=0.01)


def test_blowup_grows_with_resolution():
    # below the critical bandwidth the condition number grows with 2^R
    kappas = [blowup_scan(R, (0.4375,))[0].kappa for R in (5, 6, 7)]
    assert kappas[0] < kappas[1] < kappas[2]
