"""Closed-form SER, BER, CWER and FER approximations under AWGN."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..coding import CodeConfig
from ..modulation import LoRaParams
from .special import harmonic, q_function

_PI2_12 = math.pi ** 2 / 12.0


@dataclass(frozen=True)
class FrameConfig:
    """Payload length in LoRa symbols."""

    n_payload_symbols: int = 32

    def __post_init__(self):
        if self.n_payload_symbols < 1:
            raise ValueError("payload needs at least one symbol")

    def check(self, cfg: CodeConfig):
        if cfg.coded and self.n_payload_symbols % cfg.n:
            raise ValueError(
                f"payload length {self.n_payload_symbols} is not a multiple of n={cfg.n}"
            )

    def n_blocks(self, cfg: CodeConfig) -> int:
        """Number of interleaver blocks (SF codewords each)."""
        self.check(cfg)
        return self.n_payload_symbols // cfg.n

    def n_codewords(self, p: LoRaParams, cfg: CodeConfig) -> int:
        return self.n_blocks(cfg) * p.sf


def _symbol_snr(snr_db, p: LoRaParams):
    # energy of the dechirped peak over the noise per DFT bin
    return p.n_chips * 10.0 ** (np.asarray(snr_db, dtype=float) / 10.0)


def _ser_with_harmonic(snr_db, p: LoRaParams, h: float):
    c = h * h - _PI2_12
    num = np.sqrt(_symbol_snr(snr_db, p)) - c ** 0.25
    den = math.sqrt(h - math.sqrt(c) + 0.5)
    return np.clip(q_function(num / den), 0.0, 1.0)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def ser_awgn(snr_db, p: LoRaParams):
    """Approximate uncoded symbol error probability at per-chip SNR ``snr_db``."""
    return _scalar(_ser_with_harmonic(snr_db, p, harmonic(p.n_chips - 1)))


def ber_awgn(snr_db, p: LoRaParams):
    return _scalar(0.5 * np.asarray(ser_awgn(snr_db, p)))


def cwer_awgn(p_b, n: int):
    """Probability of two or more bit errors among n iid bits with error rate ``p_b``.

    Summed over the error weights directly rather than as ``1 - P(0) - P(1)``
    so small rates keep full relative precision.
    """
    p_b = np.asarray(p_b, dtype=float)
    if np.any((p_b < 0) | (p_b > 1)):
        raise ValueError("bit error probability must lie in [0, 1]")
    q = 1.0 - p_b
    total = np.zeros_like(p_b)
    for k in range(2, n + 1):
        total = total + math.comb(n, k) * p_b ** k * q ** (n - k)
    return _scalar(np.clip(total, 0.0, 1.0))


def fer_from_cwer(p_cw, n_codewords: float):
    """``1 - (1 - p_cw) ** n_codewords`` evaluated in the log domain."""
    p_cw = np.asarray(p_cw, dtype=float)
    with np.errstate(divide="ignore"):
        return _scalar(-np.expm1(n_codewords * np.log1p(-p_cw)))


def fer_awgn_approx1(snr_db, p: LoRaParams, cfg: CodeConfig, fc: FrameConfig):
    """FER treating every codeword in the payload as independent."""
    p_cw = cwer_awgn(ber_awgn(snr_db, p), cfg.n)
    return fer_from_cwer(p_cw, fc.n_codewords(p, cfg))


def cond_ser_awgn(snr_db, p: LoRaParams, i: int):
    """SER given that the first ``i - 1`` bits of the symbol are known correct.

    The competing bins shrink to ``N / 2**(i-1) - 1``, which enters through
    the harmonic number. ``i = 1`` is the unconditional SER.
    """
    if not 1 <= i <= p.sf:
        raise ValueError(f"bit index must be in 1..{p.sf}, got {i}")
    h = harmonic(p.n_chips // (1 << (i - 1)) - 1)
    return _scalar(_ser_with_harmonic(snr_db, p, h))


def fer_awgn_approx2(snr_db, p: LoRaParams, cfg: CodeConfig, fc: FrameConfig):
    """FER with the i-th codeword of each block using the i-th conditional SER."""
    n_blocks = fc.n_blocks(cfg)
    log_ok = 0.0
    for i in range(1, p.sf + 1):
        p_cw = np.asarray(cwer_awgn(0.5 * np.asarray(cond_ser_awgn(snr_db, p, i)), cfg.n))
        with np.errstate(divide="ignore"):
            log_ok = log_ok + np.log1p(-p_cw)
    return _scalar(-np.expm1(n_blocks * log_ok))
