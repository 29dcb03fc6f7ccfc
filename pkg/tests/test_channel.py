import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import polarkit as pk
from polarkit.channel import frame_rng, noise_sigma2, quantize_llr


def test_awgn_noiseless_limit_signs(rng):
    x = rng.integers(0, 2, size=256, dtype=np.uint8)
    llr = pk.awgn_llr(x, 40.0, 0.5, frame_rng(3, 0))  # essentially noiseless
    assert np.array_equal((llr < 0).astype(np.uint8), x)


def test_awgn_llr_moments_on_all_zero():
    # mean 2/sigma^2 and variance 4/sigma^2, 1% tolerance over 1e6 samples
    n = 1_000_000
    ebno, rate = 2.0, 0.7
    s2 = noise_sigma2(ebno, rate)
    x = np.zeros(n, dtype=np.uint8)
    llr = pk.awgn_llr(x, ebno, rate, frame_rng(12, 0))
    assert llr.mean() == pytest.approx(2.0 / s2, rel=0.01)
    assert llr.var() == pytest.approx(4.0 / s2, rel=0.01)


def test_awgn_determinism():
    x = np.zeros(64, dtype=np.uint8)
    a = pk.awgn_llr(x, 1.0, 0.5, frame_rng(9, 41))
    b = pk.awgn_llr(x, 1.0, 0.5, frame_rng(9, 41))
    c = pk.awgn_llr(x, 1.0, 0.5, frame_rng(9, 42))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_bec_llr_alphabet_and_rate():
    x = np.zeros(1_000_000, dtype=np.uint8)
    x[1::2] = 1
    llr = pk.bec_llr(x, 0.5, frame_rng(5, 0))
    vals = set(np.unique(llr))
    assert vals <= {-np.inf, 0.0, np.inf}
    erased = (llr == 0).mean()
    assert abs(erased - 0.5) < 0.002
    known = llr != 0
    assert np.array_equal(llr[known] < 0, x[known].astype(bool))


def test_bec_llr_no_erasure_limit():
    x = np.zeros(10_000, dtype=np.uint8)
    llr = pk.bec_llr(x, 1e-12, frame_rng(5, 1))
    assert np.all(llr != 0)


def test_quantize_saturation_and_zero():
    assert quantize_llr([100.0], bits=5, step=0.5)[0] == 7.5
    assert quantize_llr([-100.0], bits=5, step=0.5)[0] == -7.5
    assert quantize_llr([0.0], bits=5, step=0.5)[0] == 0.0


@settings(max_examples=50, deadline=None)
@given(st.floats(-50, 50), st.integers(2, 8), st.floats(0.01, 2.0))
def test_quantize_idempotent(v, bits, step):
    once = quantize_llr([v], bits, step)
    twice = quantize_llr(once, bits, step)
    assert np.array_equal(once, twice)


def test_quantize_validation():
    with pytest.raises(ValueError):
        quantize_llr([1.0], bits=1, step=0.5)
    with pytest.raises(ValueError):
        quantize_llr([1.0], bits=5, step=0.0)


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        pk.NoiseSpec("fading", 1.0)
    with pytest.raises(ValueError):
        pk.NoiseSpec("bec", 1.5)
    assert pk.NoiseSpec("awgn", 2.0, 0.5).param == 2.0
