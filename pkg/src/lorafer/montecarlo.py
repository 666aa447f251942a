"""Monte Carlo simulation of the full coded LoRa link.

Every frame goes through the whole chain: random payload, Hamming
encoding, diagonal interleaving, Gray mapping, chirp modulation, CFO,
AWGN, DFT demodulation and the inverse receive steps.

Random streams are derived from the master seed with
``SeedSequence(seed, spawn_key=(sf, lam_key, snr_key, batch))``, so a point
always reproduces regardless of which other points are in the grid or how
many workers run. Frames are simulated in fixed-size batches; the stopping
rule is applied frame by frame in batch order (the point ends exactly at
the frame carrying the ``min_errors``-th error), so results do not depend
on the worker count.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analytic.awgn import FrameConfig
from .channel import ChannelConfig, add_awgn, apply_cfo
from .coding import (
    CodeConfig,
    DecodeStatus,
    deinterleave,
    gray_demap,
    gray_map,
    hamming_decode,
    hamming_encode,
    interleave,
)
from .curves import ErrorRateCurve, FrameCounts
from .modulation import LoRaParams, demodulate, modulate

log = logging.getLogger(__name__)

BATCH_SAMPLES = 1 << 21
SAMPLE_DTYPE = np.complex64


@dataclass
class FrameResult:
    frame_error: bool
    counts: FrameCounts


@dataclass
class _BatchTallies:
    """Per-frame error counts of one batch, kept separate so the batch can be truncated."""

    frame_error: np.ndarray
    codeword_errors: np.ndarray
    bit_errors: np.ndarray
    symbol_errors: np.ndarray
    codewords_per_frame: int
    bits_per_frame: int
    symbols_per_frame: int

    def counts(self, n: int | None = None) -> FrameCounts:
        sl = slice(None, n)
        frames = len(self.frame_error[sl])
        return FrameCounts(
            frames=frames,
            frame_errors=int(self.frame_error[sl].sum()),
            codewords=frames * self.codewords_per_frame,
            codeword_errors=int(self.codeword_errors[sl].sum()),
            bits=frames * self.bits_per_frame,
            bit_errors=int(self.bit_errors[sl].sum()),
            symbols=frames * self.symbols_per_frame,
            symbol_errors=int(self.symbol_errors[sl].sum()),
        )


def _transmit(symbols: np.ndarray, p: LoRaParams, ch: ChannelConfig, rng) -> np.ndarray:
    """Modulate ``(frames, n_sym)`` symbols, pass them through the channel, demodulate."""
    n_frames, n_sym = symbols.shape
    x = modulate(symbols, p, dtype=SAMPLE_DTYPE).reshape(n_frames, n_sym * p.n_chips)
    y = add_awgn(apply_cfo(x, ch, p), ch, rng, dtype=SAMPLE_DTYPE)
    s_hat, _ = demodulate(y.reshape(n_frames, n_sym, p.n_chips), p)
    return s_hat


def _simulate_batch(p: LoRaParams, cfg: CodeConfig, fc: FrameConfig, ch: ChannelConfig,
                    rng: np.random.Generator, n_frames: int) -> _BatchTallies:
    sf = p.sf
    if not cfg.coded:
        labels = rng.integers(0, 2, size=(n_frames, fc.n_payload_symbols, sf), dtype=np.uint8)
        symbols = gray_map(labels)
        s_hat = _transmit(symbols, p, ch, rng)
        bit_err = (gray_demap(s_hat, sf) != labels).sum(axis=(1, 2))
        sym_err = (s_hat != symbols).sum(axis=1)
        return _BatchTallies(
            frame_error=bit_err > 0,
            codeword_errors=sym_err,
            bit_errors=bit_err,
            symbol_errors=sym_err,
            codewords_per_frame=fc.n_payload_symbols,
            bits_per_frame=fc.n_payload_symbols * sf,
            symbols_per_frame=fc.n_payload_symbols,
        )

    n_blocks = fc.n_blocks(cfg)
    data = rng.integers(0, 2, size=(n_frames, n_blocks, sf, 4), dtype=np.uint8)
    codewords = hamming_encode(data, cfg)
    labels = interleave(codewords)
    symbols = gray_map(labels).reshape(n_frames, -1)

    s_hat = _transmit(symbols, p, ch, rng)

    labels_hat = gray_demap(s_hat.reshape(n_frames, n_blocks, cfg.n), sf)
    received = deinterleave(labels_hat)
    decoded = hamming_decode(received, cfg)
    cw_err = (decoded.status == DecodeStatus.FAILURE) | np.any(decoded.data != data, axis=-1)
    cw_err = cw_err.reshape(n_frames, -1)
    return _BatchTallies(
        frame_error=cw_err.any(axis=1),
        codeword_errors=cw_err.sum(axis=1),
        bit_errors=(labels_hat != labels).reshape(n_frames, -1).sum(axis=1),
        symbol_errors=(s_hat != symbols).sum(axis=1),
        codewords_per_frame=n_blocks * sf,
        bits_per_frame=fc.n_payload_symbols * sf,
        symbols_per_frame=fc.n_payload_symbols,
    )


def simulate_frames(p: LoRaParams, cfg: CodeConfig, fc: FrameConfig, ch: ChannelConfig,
                    rng: np.random.Generator, n_frames: int) -> FrameCounts:
    """Simulate ``n_frames`` independent frames and return the summed counts.

    ``bit_errors`` counts raw label bits at the decoder input; a codeword
    error is any decoded codeword that differs from the transmitted one,
    decoder failures included.
    """
    fc.check(cfg)
    return _simulate_batch(p, cfg, fc, ch, rng, n_frames).counts()


def simulate_frame(p: LoRaParams, cfg: CodeConfig, fc: FrameConfig, ch: ChannelConfig,
                   rng: np.random.Generator) -> FrameResult:
    counts = simulate_frames(p, cfg, fc, ch, rng, 1)
    return FrameResult(frame_error=bool(counts.frame_errors), counts=counts)


# -- sweeps ------------------------------------------------------------------


@dataclass
class SweepSpec:
    """Experiment grid and stopping rule.

    A point stops at the frame carrying the ``min_errors``-th error, or after
    ``max_frames`` frames. Coded sweeps count frame errors; uncoded sweeps
    count symbol errors. An empty ``lams`` list means pure AWGN.
    """

    snr_db: list[float]
    sf: list[int]
    code: CodeConfig = field(default_factory=CodeConfig)
    lams: list[float] = field(default_factory=list)
    n_payload_symbols: int = 32
    min_errors: int = 100
    max_frames: int = 10 ** 6
    seed: int = 0

    def __post_init__(self):
        if not len(self.snr_db):
            raise ValueError("SNR grid is empty")
        if not len(self.sf):
            raise ValueError("SF list is empty")
        if self.min_errors < 1:
            raise ValueError("min_errors must be >= 1")
        if self.max_frames < 1:
            raise ValueError("max_frames must be >= 1")
        for sf in self.sf:
            LoRaParams(sf)
        for lam in self.lam_grid:
            ChannelConfig(lam=lam)
        FrameConfig(self.n_payload_symbols).check(self.code)

    @property
    def lam_grid(self) -> list[float]:
        return list(self.lams) if len(self.lams) else [0.0]


def _value_key(x: float, scale: float = 1e6, offset: float = 1000.0) -> int:
    # micro-unit grid; the noiseless point gets a key of its own
    if math.isinf(x):
        return 0 if x < 0 else 2 ** 63 - 1
    return int(round((x + offset) * scale))


def point_seed(seed: int, sf: int, lam: float, snr_db: float, batch: int) -> np.random.SeedSequence:
    """Documented split of the master seed into per-batch streams."""
    return np.random.SeedSequence(
        seed, spawn_key=(sf, _value_key(lam), _value_key(snr_db), batch)
    )


def batch_frames(p: LoRaParams, fc: FrameConfig) -> int:
    return max(1, BATCH_SAMPLES // (fc.n_payload_symbols * p.n_chips))


def _run_batch(args) -> _BatchTallies:
    sf, code, n_pl, snr_db, lam, seed, batch, n_frames = args
    p = LoRaParams(sf)
    ch = ChannelConfig(snr_db=snr_db, lam=lam)
    rng = np.random.default_rng(point_seed(seed, sf, lam, snr_db, batch))
    return _simulate_batch(p, code, FrameConfig(n_pl), ch, rng, n_frames)


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("LORAFER_WORKERS", "1"))
    return max(1, int(workers))


def simulate_point(spec: SweepSpec, sf: int, lam: float, snr_db: float,
                   pool: ProcessPoolExecutor | None = None, workers: int = 1) -> FrameCounts:
    """Run one grid point to its stopping rule."""
    p = LoRaParams(sf)
    fc = FrameConfig(spec.n_payload_symbols)
    per_batch = batch_frames(p, fc)
    err_field = "frame_error" if spec.code.coded else "symbol_errors"
    total = FrameCounts()
    errors = 0
    batch = 0
    while total.frames < spec.max_frames:
        jobs = []
        planned = total.frames
        for _ in range(workers):
            if planned >= spec.max_frames:
                break
            n = min(per_batch, spec.max_frames - planned)
            jobs.append((sf, spec.code, spec.n_payload_symbols, float(snr_db), float(lam),
                         spec.seed, batch, n))
            planned += n
            batch += 1
        results = pool.map(_run_batch, jobs) if pool is not None else map(_run_batch, jobs)
        for tallies in results:
            per_frame = np.asarray(getattr(tallies, err_field), dtype=np.int64)
            cum = errors + np.cumsum(per_frame)
            hit = np.flatnonzero(cum >= spec.min_errors)
            if hit.size:
                total = total + tallies.counts(int(hit[0]) + 1)
                return total
            total = total + tallies.counts()
            errors = int(cum[-1]) if cum.size else errors
    return total


def _sweep(spec: SweepSpec, estimator: str, metric: str, workers, on_point):
    workers = resolve_workers(workers)
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    curves = []
    try:
        for sf in spec.sf:
            for lam in spec.lam_grid:
                curve = ErrorRateCurve(estimator, sf, metric, float(lam), spec.code.label,
                                       spec.n_payload_symbols)
                curves.append(curve)
                for snr_db in spec.snr_db:
                    counts = simulate_point(spec, sf, lam, snr_db, pool, workers)
                    pt = curve.add_counts(float(snr_db), counts)
                    log.info("SF%d lam=%.3g %.2f dB: %s=%.3e (%d frames)", sf, lam, snr_db,
                             metric, pt.rate, counts.frames)
                    if on_point is not None:
                        on_point(curve, pt)
    finally:
        if pool is not None:
            pool.shutdown()
    return curves


def run_sweep(spec: SweepSpec, workers: int | None = None, on_point=None) -> list[ErrorRateCurve]:
    """Coded Monte Carlo FER curves, one per (SF, lambda).

    ``on_point(curve, point)`` is called as each point completes.
    """
    if not spec.code.coded:
        raise ValueError("run_sweep needs a coded configuration; use uncoded_sweep")
    return _sweep(spec, "mc", "fer", workers, on_point)


def uncoded_sweep(spec: SweepSpec, workers: int | None = None, on_point=None) -> list[ErrorRateCurve]:
    """Raw SER curves with coding and interleaving bypassed.

    Bit errors are tallied on the Gray labels; use ``curve.as_metric("ber")``
    for the BER view of the same run.
    """
    if spec.code.coded:
        spec = SweepSpec(**{**spec.__dict__, "code": CodeConfig.uncoded()})
    return _sweep(spec, "mc", "ser", workers, on_point)
