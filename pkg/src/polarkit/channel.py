"""Noisy-channel LLR generation: BPSK over AWGN, erasures, and quantization.

Reproducibility contract: the noise of frame i under seed s depends only on
(s, i). Each frame gets its own counter-based generator, so any partition of
frames across workers replays identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_bits

# Finite stand-in for certain (+-inf) erasure-channel LLRs inside decoders;
# large enough to dominate any real LLR, small enough that metric sums over a
# codeword stay far from overflow.
BEC_LLR_CLAMP = 1e30


@dataclass(frozen=True)
class NoiseSpec:
    """Channel selection: 'awgn' with Eb/N0 in dB, or 'bec' with erasure prob."""

    channel: str
    param: float
    rate_for_snr: float = 1.0

    def __post_init__(self):
        if self.channel not in ("awgn", "bec"):
            raise ValueError("channel must be 'awgn' or 'bec'")
        if self.channel == "bec" and not 0.0 < self.param < 1.0:
            raise ValueError("erasure probability must lie in (0, 1)")
        if not 0.0 < self.rate_for_snr <= 1.0:
            raise ValueError("rate_for_snr must lie in (0, 1]")


def frame_rng(seed: int, frame_index: int) -> np.random.Generator:
    """Counter-based generator for one frame, keyed by (seed, frame_index)."""
    if not 0 <= seed < 2**64 or frame_index < 0:
        raise ValueError("seed must fit in 64 bits and frame_index be >= 0")
    key = np.array([seed, frame_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def noise_sigma2(ebno_db: float, rate: float) -> float:
    """Noise variance for unit-energy BPSK at Eb/N0 = ebno_db and given rate."""
    if not 0.0 < rate <= 1.0:
        raise ValueError("rate must lie in (0, 1]")
    return 1.0 / (2.0 * rate * 10.0 ** (ebno_db / 10.0))


def awgn_llr(x, ebno_db: float, rate: float, rng: np.random.Generator) -> np.ndarray:
    """Channel LLRs for codeword x over BPSK-AWGN (bit 0 -> +1, 1 -> -1).

    LLR_i = 2 y_i / sigma^2; on the all-zero word the LLRs are Gaussian with
    mean 2/sigma^2 and variance 4/sigma^2.
    """
    x = as_bits(x)
    sigma2 = noise_sigma2(ebno_db, rate)
    symbols = 1.0 - 2.0 * x.astype(np.float64)
    y = symbols + np.sqrt(sigma2) * rng.standard_normal(len(x))
    return 2.0 * y / sigma2


def bec_llr(x, eps: float, rng: np.random.Generator) -> np.ndarray:
    """Erasure-channel LLRs: 0 with probability eps, else +-inf by the bit."""
    x = as_bits(x)
    if not 0.0 < eps < 1.0:
        raise ValueError("erasure probability must lie in (0, 1)")
    known = np.where(x == 0, np.inf, -np.inf)
    return np.where(rng.random(len(x)) < eps, 0.0, known)


def quantize_llr(llr, bits: int, step: float) -> np.ndarray:
    """Uniform symmetric quantizer saturating at +-(2**(bits-1) - 1) * step.

    Zero maps to zero and quantized values are fixed points (round half to
    even at bin edges).
    """
    if bits < 2:
        raise ValueError("bits must be >= 2")
    if step <= 0:
        raise ValueError("step must be > 0")
    llr = np.asarray(llr, dtype=np.float64)
    lim = float((1 << (bits - 1)) - 1)
    return np.clip(np.rint(llr / step), -lim, lim) * step
