import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nugs import kernels
from nugs._accel import HAVE_NUMBA
from nugs.wavelets.filters import make_filter

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


def direct_nudft(xi, c, k0):
    k = k0 + np.arange(c.size)
    return np.exp(-2j * np.pi * np.outer(xi, k)) @ c


@pytest.mark.parametrize("backend", ["numpy", pytest.param("numba", marks=needs_numba)])
def test_nudft_against_direct(backend):
    rng = np.random.default_rng(0)
    xi = rng.uniform(-3, 3, 700)
    c = rng.standard_normal(37) + 1j * rng.standard_normal(37)
    f = kernels.BACKENDS[backend]["nudft_forward"]
    a = kernels.BACKENDS[backend]["nudft_adjoint"]
    np.testing.assert_allclose(f(xi, c, -5), direct_nudft(xi, c, -5), atol=1e-11)
    y = rng.standard_normal(700) + 1j * rng.standard_normal(700)
    k = -5 + np.arange(37)
    ref = np.exp(2j * np.pi * np.outer(k, xi)) @ y
    np.testing.assert_allclose(a(xi, y, -5, 37), ref, atol=1e-10)


@needs_numba
@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["db2", "db3", "db4"]), st.floats(-500, 500))
def test_phi_hat_backends_agree(name, center):
    f = make_filter(name)
    xi = center + np.linspace(-1, 1, 33)
    a = kernels.BACKENDS["numpy"]["phi_hat_product"](f.taps, f.kmin, xi, f.m1)
    b = kernels.BACKENDS["numba"]["phi_hat_product"](f.taps, f.kmin, xi, f.m1)
    np.testing.assert_allclose(a, b, atol=1e-13)


def test_product_levels():
    assert kernels.product_levels(0) == 30
    assert kernels.product_levels(1023) == 40


def _backend_in_subprocess(flag):
    env = dict(os.environ)
    if flag is None:
        env.pop("NUGS_DISABLE_NUMBA", None)
    else:
        env["NUGS_DISABLE_NUMBA"] = flag
    out = subprocess.run(
        [sys.executable, "-c", "from nugs import kernels; print(kernels.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return out.stdout.strip()


def test_env_flag_selects_numpy():
    assert _backend_in_subprocess("1") == "numpy"
    assert _backend_in_subprocess("true") == "numpy"


@needs_numba
def test_default_backend_is_numba():
    assert _backend_in_subprocess(None) == "numba"
    assert _backend_in_subprocess("0") == "numba"
