import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nugs.sampling import (
    RNG_NAME,
    SamplingScheme,
    compute_weights,
    density_of,
    jittered_scheme,
    log_cardinality,
    log_scheme,
    scheme_from_frequencies,
    seip_scheme,
    uniform_scheme,
)


def brute_weights(w, K):
    # direct transcription of the half-gap rule with ghost points
    n = len(w)
    out = []
    for i in range(n):
        left = w[i - 1] if i > 0 else w[-1] - 2 * K
        right = w[i + 1] if i < n - 1 else w[0] + 2 * K
        out.append(0.5 * (right - left))
    return np.array(out)


# -- weights -----------------------------------------------------------------


def test_single_frequency_weight():
    assert compute_weights([0.0], 1.0).tolist() == [2.0]


def test_symmetric_uniform_weights():
    np.testing.assert_array_equal(compute_weights([-1.0, 0.0, 1.0], 1.5), [1.0, 1.0, 1.0])


def test_log_weights_telescope():
    s = log_scheme(32, 0.8, 0.4)
    assert abs(s.weights.sum() - 64) <= 1e-12 * 64


@pytest.mark.parametrize("bad", [[0.0, 0.0], [1.0, 0.0], [0.0, 2.5]])
def test_weights_reject_invalid(bad):
    with pytest.raises(ValueError):
        compute_weights(bad, 2.0)


@given(
    st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=60, unique=True),
    st.floats(0.0, 5.0),
)
def test_weights_match_brute_force_and_telescope(freqs, extra):
    w = np.sort(np.array(freqs))
    if np.any(np.diff(w) <= 1e-9):
        return
    K = float(np.max(np.abs(w))) + extra + 1e-3
    mu = compute_weights(w, K)
    np.testing.assert_allclose(mu, brute_weights(w, K), rtol=1e-12, atol=1e-12)
    assert np.all(mu > 0)
    assert abs(mu.sum() - 2 * K) <= 1e-12 * 2 * K + 1e-12 * np.abs(w).sum()


# -- density -----------------------------------------------------------------


def test_density_examples():
    assert density_of(uniform_scheme(1.5, 1.0)) == 1.0
    assert density_of([0.0], 1.0) == 2.0
    assert density_of(log_scheme(32, 0.8, 0.4), 32) <= 0.8


def test_density_includes_wrap_gap():
    # interior gaps 0.1, wrap gap 2 - 0.2
    assert density_of([-0.1, 0.0, 0.1], 1.0) == pytest.approx(1.8)


# -- jittered ----------------------------------------------------------------


def test_jittered_cardinality_and_bandwidth():
    s = jittered_scheme(32, 0.6, 0.1, seed=3)
    assert s.N == 2 * math.floor(32 / 0.6) + 1 == 107
    assert s.bandwidth == pytest.approx(32.1)
    assert s.generator["rng"] == RNG_NAME


def test_jittered_zero_jitter_is_uniform():
    s = jittered_scheme(1, 0.5, 0.0)
    np.testing.assert_allclose(s.frequencies, [-1, -0.5, 0, 0.5, 1])
    # ghosts at +-1.5 make the end weights a quarter
    np.testing.assert_allclose(s.weights, [0.25, 0.5, 0.5, 0.5, 0.25])
    assert s.weights.sum() == pytest.approx(2.0)


def test_jittered_is_deterministic():
    a = jittered_scheme(32, 0.6, 0.15, seed=11)
    b = jittered_scheme(32, 0.6, 0.15, seed=11)
    c = jittered_scheme(32, 0.6, 0.15, seed=12)
    np.testing.assert_array_equal(a.frequencies, b.frequencies)
    assert not np.array_equal(a.frequencies, c.frequencies)
    assert a.to_json() == b.to_json()


def test_jittered_rejects_dense_parameters():
    with pytest.raises(ValueError):
        jittered_scheme(32, 0.6, 0.2)
    with pytest.raises(ValueError):
        jittered_scheme(32, 1.2, 0.0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.floats(4, 80), st.floats(0.3, 0.8), st.floats(0.0, 0.099))
def test_jittered_gap_bounds(seed, K, eps, eta):
    if eps + 2 * eta >= 1:
        return
    s = jittered_scheme(K, eps, eta, seed)
    w = s.frequencies
    assert np.max(np.diff(w)) <= eps + 2 * eta + 1e-12
    # the wrap-around gap depends on how far n*eps falls short of K
    n_half = (s.N - 1) // 2
    wrap = 2 * s.bandwidth - (w[-1] - w[0])
    assert wrap <= 2 * (K - n_half * eps) + 4 * eta + 1e-12
    assert abs(s.weights.sum() - 2 * s.bandwidth) <= 1e-12 * 2 * s.bandwidth


def test_jittered_example_density():
    # the seed used in the experiments lands inside the nominal density
    s = jittered_scheme(32, 0.6, 0.15, seed=0)
    assert density_of(s) <= 0.9


# -- log ---------------------------------------------------------------------


def test_log_table_cardinality():
    assert log_cardinality(32, 0.8, 0.4) == 174
    s = log_scheme(32, 0.8, 0.4)
    assert s.N == 350
    assert s.frequencies[-1] == 32.0 and s.frequencies[0] == -32.0


@pytest.mark.parametrize("K,delta,nu", [(32, 0.8, 0.4), (64, 0.95, 0.33), (7.5, 0.5, 1.0), (256, 0.8, 0.4)])
def test_log_is_dense(K, delta, nu):
    s = log_scheme(K, delta, nu)
    assert density_of(s, K) <= delta
    np.testing.assert_array_equal(s.frequencies, -s.frequencies[::-1])


@pytest.mark.parametrize("args", [(32, 0.8, 0.05), (32, 1.0, 0.4), (0.5, 0.8, 0.4), (32, 0.8, -1)])
def test_log_rejects(args):
    with pytest.raises(ValueError):
        log_scheme(*args)


# -- seip --------------------------------------------------------------------


def test_seip_examples():
    s = seip_scheme(38)
    assert s.N == 76 and s.bandwidth <= 32
    assert seip_scheme(4).frequencies[-1] == 2.0
    # omega_{+-1} = 0 appears twice
    assert np.count_nonzero(s.frequencies == 0) == 2
    assert s.frame and np.all(s.operator_weights == 1)


def test_seip_rejects_degenerate():
    with pytest.raises(ValueError):
        seip_scheme(1)


def test_seip_weights_telescope():
    for N in (2, 5, 38, 139):
        s = seip_scheme(N)
        assert abs(s.weights.sum() - 2 * s.bandwidth) <= 1e-12 * 2 * s.bandwidth


# -- uniform -----------------------------------------------------------------


def test_uniform_examples():
    s = uniform_scheme(1.5, 1.0)
    np.testing.assert_array_equal(s.frequencies, [-1, 0, 1])
    np.testing.assert_array_equal(s.weights, [1, 1, 1])
    assert uniform_scheme(1.0, 1.0).weights.sum() == 2.0
    assert uniform_scheme(256, 0.5).N == 1025


# -- serialization -----------------------------------------------------------


@pytest.mark.parametrize(
    "scheme",
    [jittered_scheme(16, 0.6, 0.15, 5), log_scheme(32, 0.8, 0.4), seip_scheme(10), uniform_scheme(3, 0.7)],
    ids=["jittered", "log", "seip", "uniform"],
)
def test_json_roundtrip_bitwise(scheme, tmp_path):
    path = tmp_path / "s.json"
    scheme.save(path)
    back = SamplingScheme.load(path)
    np.testing.assert_array_equal(back.frequencies, scheme.frequencies)
    np.testing.assert_array_equal(back.weights, scheme.weights)
    assert back.bandwidth == scheme.bandwidth
    assert back.label == scheme.label
    assert back.frame == scheme.frame
    d = json.loads(path.read_text())
    assert set(d) >= {"label", "bandwidth", "frequencies", "weights", "generator"}
    assert set(d["generator"]) >= {"family", "params", "seed"}


def test_json_missing_field():
    with pytest.raises(ValueError):
        SamplingScheme.from_json('{"bandwidth": 1, "weights": [2]}')


def test_scheme_validation():
    with pytest.raises(ValueError):
        SamplingScheme(np.array([0.5, 0.1]), 1.0, np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        SamplingScheme(np.array([0.1, 0.5]), 1.0, np.array([1.0, -1.0]))
    s = scheme_from_frequencies([-0.5, 0.25], 1.0)
    np.testing.assert_allclose(s.weights, brute_weights([-0.5, 0.25], 1.0))


def test_jittered_wrap_gap_can_exceed_nominal_density():
    # with floor(K/eps) * eps < K the wrap gap is not controlled by eps + 2 eta
    over = [s for s in range(200) if density_of(jittered_scheme(32, 0.6, 0.15, s)) > 0.9]
    assert over
    s = jittered_scheme(32, 0.6, 0.15, over[0])
    assert np.max(np.diff(s.frequencies)) <= 0.9
