import numpy as np
import pytest

from nugs.signals import Expansion
from nugs.wavelets.dwt import coarsest_level, dwt, idwt, level_slices
from nugs.wavelets.filters import make_filter
from nugs.wavelets.space import build_space

CASES = [
    ("haar", "periodic", 0),
    ("db2", "periodic", 2),
    ("db3", "periodic", 3),
    ("db4", "periodic", 3),
    ("haar", "boundary", None),
    ("db2", "boundary", None),
    ("db3", "boundary", None),
]


@pytest.mark.parametrize("fam,btype,J", CASES)
def test_roundtrip_and_norm(fam, btype, J):
    sp = build_space(make_filter(fam), 6, J, btype)
    c = np.random.default_rng(0).standard_normal(sp.M)
    w = dwt(sp, c)
    assert w.shape == c.shape
    np.testing.assert_allclose(idwt(sp, w), c, atol=1e-12)
    # orthonormal bases on both sides: the function norm equals the coefficient norm
    assert abs(np.linalg.norm(w) - Expansion(sp, c).norm()) < 1e-12 * np.linalg.norm(c)


def test_constant_haar_has_no_details():
    sp = build_space(make_filter("haar"), 6, 0, "periodic")
    w = dwt(sp, np.ones(64))
    assert abs(w[0] - 8.0) < 1e-12
    assert np.max(np.abs(w[1:])) < 1e-12


def test_periodic_filter_bank_against_direct_haar():
    sp = build_space(make_filter("haar"), 3, 2, "periodic")
    c = np.arange(8.0)
    w = dwt(sp, c)
    s = 2**-0.5
    np.testing.assert_allclose(w[:4], s * (c[0::2] + c[1::2]), atol=1e-14)
    np.testing.assert_allclose(np.abs(w[4:]), s * np.abs(c[0::2] - c[1::2]), atol=1e-14)


def test_boundary_polynomial_has_small_details():
    # boundary DB2 reproduces linears, so the details of a linear function vanish
    sp = build_space(make_filter("db2"), 6, None, "boundary")
    from nugs.operators import projection_coefficients
    from nugs.signals import Polynomial

    c, _ = projection_coefficients(Polynomial([0.3, 1.0]), sp)
    w = dwt(sp, c)
    a = level_slices(sp)[0][2]
    assert np.max(np.abs(w[a.stop :])) < 1e-8


def test_level_slices_cover_vector():
    for fam, btype, J in CASES:
        sp = build_space(make_filter(fam), 6, J, btype)
        sl = level_slices(sp)
        assert sl[0][0] == "a" and sl[0][1] == coarsest_level(sp)
        assert sl[-1][2].stop == sp.M
        assert all(a[2].stop == b[2].start for a, b in zip(sl, sl[1:]))


def test_folded_daubechies_is_not_nested():
    sp = build_space(make_filter("db2"), 5, None, "folded")
    with pytest.raises(ValueError, match="not contained"):
        dwt(sp, np.zeros(sp.M))


def test_folded_haar_roundtrip():
    sp = build_space(make_filter("haar"), 5, 0, "folded")
    c = np.random.default_rng(1).standard_normal(32)
    np.testing.assert_allclose(idwt(sp, dwt(sp, c)), c, atol=1e-12)


def test_length_mismatch():
    sp = build_space(make_filter("haar"), 4, 0, "periodic")
    with pytest.raises(ValueError):
        dwt(sp, np.ones(5))
    with pytest.raises(ValueError):
        idwt(sp, np.ones(5))
