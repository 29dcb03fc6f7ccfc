"""Polar encoding, bit-reversal utilities, and bit-level CRC.

Bit vectors are 1-D numpy uint8 arrays with values in {0, 1}. Positions are
0-based in code; file formats and user-facing docs number bits from 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

Bits = np.ndarray


def as_bits(seq) -> Bits:
    """Coerce a 0/1 sequence into a validated uint8 bit array."""
    bits = np.asarray(seq, dtype=np.uint8)
    if bits.ndim != 1 or bits.size == 0:
        raise ValueError("bit vector must be a nonempty 1-D sequence")
    if bits.max(initial=0) > 1:
        raise ValueError("bit vector entries must be 0 or 1")
    return bits


def _log2_exact(n: int) -> int:
    if n <= 0 or n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    return n.bit_length() - 1


@lru_cache(maxsize=None)
def bitrev_indices(n: int) -> np.ndarray:
    """Permutation p with p[i] = the n-bit reversal of i."""
    idx = np.arange(1 << n)
    rev = np.zeros_like(idx)
    for _ in range(n):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    rev.setflags(write=False)
    return rev


def bit_reverse_permute(v) -> np.ndarray:
    """Reorder a power-of-two-length array by bit-reversed index.

    Self-inverse: applying it twice returns the input.
    """
    v = np.asarray(v)
    n = _log2_exact(v.shape[-1])
    return v[..., bitrev_indices(n)]


def polar_transform(u) -> Bits:
    """Apply the polar generator (bit-reversal permutation, then the
    kernel butterfly) over GF(2) along the last axis.

    Accepts a single bit vector or a batch of rows. Involution: applying it
    twice gives back the input.
    """
    u = np.asarray(u, dtype=np.uint8)
    x = bit_reverse_permute(u).copy()
    shape = x.shape
    span = shape[-1]
    _log2_exact(span)
    x = x.reshape(-1, span)
    while span > 1:
        half = span // 2
        blocks = x.reshape(-1, span)
        blocks[:, :half] ^= blocks[:, half:]
        span = half
    return x.reshape(shape)


@dataclass(frozen=True)
class Construction:
    """How a frozen set was designed: channel family plus its parameter."""

    channel: str  # "bec" or "awgn-ga"
    design_param: float  # erasure probability, or design Eb/N0 in dB


@dataclass
class PolarCode:
    """Code description: length, frozen set, and construction metadata.

    K counts every non-frozen position, CRC bits included when crc_width > 0.
    """

    n: int
    K: int
    frozen_mask: Bits
    construction: Construction | None = None
    crc_width: int = 0

    def __post_init__(self):
        self.frozen_mask = as_bits(self.frozen_mask)
        if len(self.frozen_mask) != self.N:
            raise ValueError("frozen_mask length must equal 2**n")
        if not 0 < self.K < self.N:
            raise ValueError(f"K must satisfy 0 < K < N, got K={self.K}, N={self.N}")
        if int(self.frozen_mask.sum()) != self.N - self.K:
            raise ValueError("frozen_mask weight must equal N - K")
        if not 0 <= self.crc_width < self.K:
            raise ValueError("crc_width must be >= 0 and smaller than K")

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def info_positions(self) -> np.ndarray:
        """Indices of the K non-frozen positions, ascending."""
        return np.flatnonzero(self.frozen_mask == 0)

    @property
    def payload_bits(self) -> int:
        """Message bits per frame once CRC bits are set aside."""
        return self.K - self.crc_width

    @property
    def rate(self) -> float:
        return self.K / self.N


def encode(code: PolarCode, u) -> Bits:
    """Encode a full length-N input word (frozen positions must be zero)."""
    u = as_bits(u)
    if len(u) != code.N:
        raise ValueError(f"input length {len(u)} != code length {code.N}")
    if np.any(u & code.frozen_mask):
        raise ValueError("nonzero bit at a frozen position")
    return polar_transform(u)


def assemble_input(code: PolarCode, info) -> Bits:
    """Place K info bits (ascending) into a length-N word, frozen bits zero."""
    info = as_bits(info)
    if len(info) != code.K:
        raise ValueError(f"expected {code.K} info bits, got {len(info)}")
    u = np.zeros(code.N, dtype=np.uint8)
    u[code.info_positions] = info
    return u


# ---------------------------------------------------------------------------
# CRC


@dataclass(frozen=True)
class CrcSpec:
    """Bit-level CRC parameters.

    `polynomial` is in normal form with the leading x**width term implicit.
    With reflect=True the register is run LSB-first (the zlib convention when
    the input bits are each byte's bits least-significant first).
    """

    width: int
    polynomial: int
    init: int
    xor_out: int
    reflect: bool = True

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("CRC width must be >= 1")
        if not 0 < self.polynomial < (1 << self.width):
            raise ValueError("polynomial degree must equal width")


CRC32 = CrcSpec(width=32, polynomial=0x04C11DB7, init=0xFFFFFFFF, xor_out=0xFFFFFFFF)


def _reflect_int(value: int, width: int) -> int:
    out = 0
    for _ in range(width):
        out = (out << 1) | (value & 1)
        value >>= 1
    return out


def crc_remainder_rows(rows: np.ndarray, spec: CrcSpec = CRC32) -> np.ndarray:
    """CRC register value for each row of a (rows, nbits) bit matrix."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.uint8))
    w = spec.width
    reg = np.full(rows.shape[0], spec.init, dtype=np.uint64)
    if spec.reflect:
        poly = np.uint64(_reflect_int(spec.polynomial, w))
        one = np.uint64(1)
        for j in range(rows.shape[1]):
            fb = (reg ^ rows[:, j].astype(np.uint64)) & one
            reg = (reg >> one) ^ (fb * poly)
    else:
        poly = np.uint64(spec.polynomial)
        top = np.uint64(w - 1)
        mask = np.uint64((1 << w) - 1)
        one = np.uint64(1)
        for j in range(rows.shape[1]):
            fb = ((reg >> top) ^ rows[:, j].astype(np.uint64)) & one
            reg = ((reg << one) & mask) ^ (fb * poly)
    return (reg ^ np.uint64(spec.xor_out)) & np.uint64((1 << w) - 1)


def crc_bits(info, spec: CrcSpec = CRC32) -> Bits:
    """CRC of a bit sequence, as `spec.width` bits ready to append.

    Reflected CRCs emit the register LSB first; unreflected ones MSB first.
    """
    info = as_bits(info)
    reg = int(crc_remainder_rows(info[None, :], spec)[0])
    if spec.reflect:
        order = range(spec.width)
    else:
        order = range(spec.width - 1, -1, -1)
    return np.array([(reg >> k) & 1 for k in order], dtype=np.uint8)


def crc_append(info, spec: CrcSpec = CRC32) -> Bits:
    """Append the CRC of `info`, giving len(info) + width bits."""
    info = as_bits(info)
    return np.concatenate([info, crc_bits(info, spec)])


def crc_check(payload, spec: CrcSpec = CRC32) -> bool:
    """True iff the trailing `spec.width` bits match the CRC of the rest."""
    payload = as_bits(payload)
    if len(payload) <= spec.width:
        raise ValueError("payload shorter than CRC width")
    return bool(np.array_equal(crc_bits(payload[: -spec.width], spec), payload[-spec.width :]))


def crc_check_rows(payloads: np.ndarray, spec: CrcSpec = CRC32) -> np.ndarray:
    """Vectorized crc_check over the rows of a bit matrix."""
    payloads = np.atleast_2d(np.asarray(payloads, dtype=np.uint8))
    if payloads.shape[1] <= spec.width:
        raise ValueError("payload shorter than CRC width")
    body, tail = payloads[:, : -spec.width], payloads[:, -spec.width :]
    reg = crc_remainder_rows(body, spec)
    if spec.reflect:
        weights = np.uint64(1) << np.arange(spec.width, dtype=np.uint64)
    else:
        weights = np.uint64(1) << np.arange(spec.width - 1, -1, -1, dtype=np.uint64)
    got = (tail.astype(np.uint64) * weights).sum(axis=1)
    return reg == got
