import math

import numpy as np
import pytest
from scipy.integrate import quad

from nugs.signals import (
    NAMED,
    Composite,
    Exponential,
    NormalizedSinc,
    Polynomial,
    QuadratureError,
    TrigPoly,
    fourier_quadrature,
    indicator,
    parse_signal,
)


def quad_fourier(func, w):
    re = quad(lambda x: func(x) * math.cos(2 * math.pi * w * x), 0, 1, limit=400, epsabs=1e-13)[0]
    im = quad(lambda x: -func(x) * math.sin(2 * math.pi * w * x), 0, 1, limit=400, epsabs=1e-13)[0]
    return re + 1j * im


def test_indicator_transform():
    w = np.array([-2.5, -1.0, 0.0, 0.3, 1.0, 7.25])
    ref = np.exp(-1j * np.pi * w) * np.sinc(w)
    np.testing.assert_allclose(indicator().fourier(w), ref, atol=1e-15)


def test_exponential_at_own_frequency():
    assert abs(Exponential(3.7).fourier(3.7) - 1) < 1e-15
    assert abs(Exponential(3.7).norm() - 1) < 1e-14


def test_table3_signal_against_quadrature():
    f = NAMED["table3"]()
    g = lambda x: math.cos(6 * math.pi * x) + 0.5 * math.sin(2 * math.pi * x)
    for w in (3.0, -3.0, 0.0, 1.37, 11.2):
        assert abs(f.fourier(w) - quad_fourier(g, w)) < 1e-9


def test_trig_poly_evaluate_and_norm():
    f = TrigPoly([(4, 1.0, 0.0), (1, 0.0, -2.0)])
    x = np.linspace(0, 1, 11)
    np.testing.assert_allclose(f(x), np.cos(8 * np.pi * x) - 2 * np.sin(2 * np.pi * x), atol=1e-14)
    # 1/2 + 4/2 for orthogonal integer frequencies
    assert f.norm() == pytest.approx(math.sqrt(2.5), abs=1e-14)
    assert np.all(f([-0.5, 1.5]) == 0)
    assert np.isrealobj(f(x))


def test_noise_signal_has_unit_norm():
    assert NAMED["table4-noise"]().norm() == pytest.approx(1.0, abs=1e-14)


def test_composite_matches_closed_form():
    f = TrigPoly([(2, 0.5, 0.0)])
    c = Composite(lambda x: 0.5 * np.cos(4 * np.pi * x))
    w = np.linspace(-30, 30, 37) + 0.11
    np.testing.assert_allclose(c.fourier(w), f.fourier(w), atol=1e-9)
    assert c.norm() == pytest.approx(f.norm(), abs=1e-12)


def test_smooth_signal_against_quadrature():
    f = NAMED["smooth-nonperiodic"]()
    for w in (0.0, 5.5, -40.0):
        assert abs(f.fourier(w) - quad_fourier(lambda x: float(f.func(np.array([x]))[0]), w)) < 1e-9


def test_quadrature_error_reports_tolerance():
    with pytest.raises(QuadratureError) as e:
        fourier_quadrature(lambda x: np.sign(x - 1 / 3), [1.0], tol=1e-15, max_panels=64)
    assert e.value.tol == 1e-15 and e.value.achieved > 1e-15


def test_normalized_sinc_unit_norm():
    assert NormalizedSinc(0.5, 14.0).norm() == pytest.approx(1.0, abs=1e-12)


def test_polynomial_norm():
    assert Polynomial([0.0, 1.0]).norm() == pytest.approx(1 / math.sqrt(3))
    assert Polynomial([1.0, -2.0, 3.0]).norm() == pytest.approx(
        math.sqrt(quad(lambda x: (1 - 2 * x + 3 * x * x) ** 2, 0, 1)[0]), rel=1e-13
    )


def test_parse_signal():
    assert parse_signal("zero").norm() == 0
    f = parse_signal("trig:3,1,0;1,0,0.5")
    np.testing.assert_allclose(f.fourier([0.5, 3.0]), NAMED["table3"]().fourier([0.5, 3.0]), atol=1e-15)
    assert isinstance(parse_signal("sinc:0.5,14"), NormalizedSinc)
    assert isinstance(parse_signal("poly:1,2"), Polynomial)
    for bad in ("nope", "trig:1,2", "sinc:1"):
        with pytest.raises(ValueError):
            parse_signal(bad)


def test_descriptors():
    assert NAMED["table2"]().descriptor() == {"kind": "trig-poly", "terms": [[2.0, 0.5, 0.0]]}
    assert NormalizedSinc().descriptor()["kind"] == "normalized-sinc"
