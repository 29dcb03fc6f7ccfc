"""Seeded Monte Carlo frame-error simulation.

Frames are generated and decoded in fixed-size batches. Frame i's payload and
noise depend only on (seed, i), and the early-stop rule (cumulative frame
errors >= target) is evaluated at batch boundaries in frame-index order, so
tallies are byte-identical for any worker count. The batch size is part of
the reproducibility contract.

SNR convention: Eb/N0 in dB with rate = K/N, K counting CRC bits.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import frame_rng, quantize_llr
from .core import CrcSpec, PolarCode, polar_transform
from .decoder import ModeConfig, _ListDecoder

CSV_HEADER = "snr_db,eps,mode,L,q,theta,frames,bit_errors,frame_errors,ber,fer,seed"


def default_batch_frames(N: int) -> int:
    """Default frames per batch, sized so working arrays stay modest."""
    return max(16, min(128, (1 << 21) // N))


@dataclass
class SweepSpec:
    """One sweep: channel parameter points plus stopping rules."""

    channel: str  # 'awgn' | 'bec'
    points: tuple  # Eb/N0 dB values, or erasure probabilities
    max_frames: int = 100_000
    target_frame_errors: int = 100
    seed: int = 1
    quantize_bits: int | None = None
    quantize_step: float | None = None

    def __post_init__(self):
        if self.channel not in ("awgn", "bec"):
            raise ValueError("channel must be 'awgn' or 'bec'")
        if not self.points:
            raise ValueError("sweep needs at least one point")
        if self.max_frames < 1:
            raise ValueError("max_frames must be positive")


@dataclass
class SimPoint:
    """Tallies for one (channel parameter, mode) point."""

    snr_db: float | None
    eps: float | None
    mode: str
    L: int
    q: int
    theta: int | None
    frames: int
    bit_errors: int
    frame_errors: int
    seed: int

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.frames * self._k) if self.frames else 0.0

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames if self.frames else 0.0

    _k: int = field(default=1, repr=False)

    def csv_row(self) -> str:
        sn = "" if self.snr_db is None else repr(float(self.snr_db))
        ep = "" if self.eps is None else repr(float(self.eps))
        th = "" if self.theta is None else str(self.theta)
        return (f"{sn},{ep},{self.mode},{self.L},{self.q},{th},{self.frames},"
                f"{self.bit_errors},{self.frame_errors},{repr(self.ber)},"
                f"{repr(self.fer)},{self.seed}")

    def as_dict(self) -> dict:
        return {
            "snr_db": self.snr_db, "eps": self.eps, "mode": self.mode, "L": self.L,
            "q": self.q, "theta": self.theta, "frames": self.frames,
            "bit_errors": self.bit_errors, "frame_errors": self.frame_errors,
            "ber": self.ber, "fer": self.fer, "seed": self.seed,
        }


def _build_frames(code: PolarCode, crc: CrcSpec | None, channel: str, param: float,
                  seed: int, start: int, count: int, quant):
    """Per-frame payloads and channel LLRs for frames [start, start+count).

    Random draws happen per frame from its own counter stream (payload bits,
    then the noise row), so frame i is independent of batch boundaries; the
    CRC/encode/LLR arithmetic is vectorized over the batch and matches the
    per-frame channel functions bit for bit.
    """
    from .channel import noise_sigma2
    from .core import crc_remainder_rows

    N, K = code.N, code.K
    payloads = np.empty((count, code.payload_bits), dtype=np.uint8)
    raw = np.empty((count, N))
    for i in range(count):
        rng = frame_rng(seed, start + i)
        payloads[i] = rng.integers(0, 2, size=code.payload_bits, dtype=np.uint8)
        raw[i] = rng.standard_normal(N) if channel == "awgn" else rng.random(N)
    if crc is not None:
        regs = crc_remainder_rows(payloads, crc)
        order = np.arange(crc.width) if crc.reflect else np.arange(crc.width - 1, -1, -1)
        tails = ((regs[:, None] >> order.astype(np.uint64)) & 1).astype(np.uint8)
        infos = np.concatenate([payloads, tails], axis=1)
    else:
        infos = payloads
    u = np.zeros((count, N), dtype=np.uint8)
    u[:, code.info_positions] = infos
    x = polar_transform(u)
    if channel == "awgn":
        s2 = noise_sigma2(param, K / N)
        y = (1.0 - 2.0 * x.astype(np.float64)) + np.sqrt(s2) * raw
        llrs = 2.0 * y / s2
    else:
        known = np.where(x == 0, np.inf, -np.inf)
        llrs = np.where(raw < param, 0.0, known)
    if quant is not None:
        llrs = quantize_llr(llrs, *quant)
    return infos, llrs


def _run_batch(code, crc, cfg_fields, channel, param, seed, start, count, quant):
    """Decode one batch; returns (frames, bit_errors, frame_errors)."""
    infos, llrs = _build_frames(code, crc, channel, param, seed, start, count, quant)
    L, q, theta, schedule = cfg_fields
    dec = _ListDecoder(code, L=L, q=q, theta=theta, schedule=schedule)
    u, _, _ = dec.decode(llrs, crc=crc)
    got = u[:, code.info_positions]
    bad = got != infos
    return count, int(bad.sum()), int(bad.any(axis=1).sum())


def simulate_point(code: PolarCode, cfg: ModeConfig, channel: str, param: float, *,
                   crc: CrcSpec | None = None, seed: int = 1, target_fe: int = 100,
                   max_frames: int = 100_000, batch_frames: int | None = None,
                   workers: int = 1, quantize: tuple | None = None) -> SimPoint:
    """Monte Carlo tallies at one channel point under one decoding mode.

    Stops after the first batch whose cumulative frame errors reach target_fe
    (0 disables early stop), or at the frame cap. Identical output for any
    `workers`.
    """
    if crc is not None and code.K <= crc.width:
        raise ValueError("code lacks CRC capacity (K <= crc width)")
    batch = batch_frames or default_batch_frames(code.N)
    q_eff = cfg.q if cfg.q is not None else min(cfg.L, 256)
    cfg_fields = (cfg.L, q_eff, cfg.effective_theta, cfg.schedule)
    starts = list(range(0, max_frames, batch))
    frames = bit_errors = frame_errors = 0

    def consume(res):
        nonlocal frames, bit_errors, frame_errors
        f, be, fe = res
        frames += f
        bit_errors += be
        frame_errors += fe
        return target_fe > 0 and frame_errors >= target_fe

    if workers <= 1:
        for s in starts:
            n = min(batch, max_frames - s)
            if consume(_run_batch(code, crc, cfg_fields, channel, param, seed, s, n, quantize)):
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pending = {}
            stop = False
            it = iter(starts)
            submitted = []
            for s in it:
                n = min(batch, max_frames - s)
                pending[s] = pool.submit(_run_batch, code, crc, cfg_fields, channel,
                                         param, seed, s, n, quantize)
                submitted.append(s)
                if len(pending) < 2 * workers:
                    continue
                s0 = submitted.pop(0)
                if consume(pending.pop(s0).result()):
                    stop = True
                    break
            if not stop:
                for s0 in submitted:
                    if consume(pending.pop(s0).result()):
                        break
            for fut in pending.values():
                fut.cancel()
    snr = param if channel == "awgn" else None
    eps = param if channel == "bec" else None
    return SimPoint(snr, eps, cfg.mode, cfg.L, q_eff, cfg.effective_theta,
                    frames, bit_errors, frame_errors, seed, _k=code.K)


def simulate_sweep(code: PolarCode, cfg: ModeConfig, spec: SweepSpec, *,
                   crc: CrcSpec | None = None, batch_frames: int | None = None,
                   workers: int = 1, progress=None) -> list[SimPoint]:
    quant = None
    if spec.quantize_bits is not None:
        step = spec.quantize_step
        if step is None:
            # default: saturation at ~4 sigma of the channel LLR at 2 dB
            from .channel import noise_sigma2
            std = 2.0 / np.sqrt(noise_sigma2(2.0, code.K / code.N))
            step = 4.0 * std / ((1 << (spec.quantize_bits - 1)) - 1)
        quant = (spec.quantize_bits, step)
    out = []
    for p in spec.points:
        pt = simulate_point(code, cfg, spec.channel, p, crc=crc, seed=spec.seed,
                            target_fe=spec.target_frame_errors, max_frames=spec.max_frames,
                            batch_frames=batch_frames, workers=workers, quantize=quant)
        out.append(pt)
        if progress is not None:
            progress(pt)
    return out


def points_to_csv(points) -> str:
    return "\n".join([CSV_HEADER, *[p.csv_row() for p in points]]) + "\n"


def points_to_json(points, meta: dict | None = None) -> str:
    doc = {
        "convention": "Eb/N0 in dB with rate K/N (K includes CRC bits); BER over all K "
                      "non-frozen positions; FER counts payload mismatches",
        "results": [p.as_dict() for p in points],
    }
    if meta:
        doc["meta"] = meta
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
