"""AWGN and fractional carrier frequency offset applied to baseband frames."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .modulation import LoRaParams


@dataclass(frozen=True)
class ChannelConfig:
    """Channel state for one operating point.

    ``snr_db`` is the per-chip SNR: with unit-power chips the complex noise
    variance per sample is ``10 ** (-snr_db / 10)``. ``snr_db = inf`` turns
    the noise off. ``lam`` is the residual CFO as a fraction of one DFT bin;
    the integer part of the offset is always zero.
    """

    snr_db: float = math.inf
    lam: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        if math.isnan(self.snr_db):
            raise ValueError("snr_db must not be NaN")
        if not abs(self.lam) <= 0.5:
            raise ValueError(f"fractional CFO must satisfy |lam| <= 0.5, got {self.lam}")

    @property
    def noise_var(self) -> float:
        return 10.0 ** (-self.snr_db / 10.0)


def noise_variance(snr_db: float) -> float:
    return 10.0 ** (-snr_db / 10.0)


def add_awgn(x, cfg: ChannelConfig, rng: np.random.Generator, dtype=np.complex128) -> np.ndarray:
    """Add circularly-symmetric complex Gaussian noise of variance ``cfg.noise_var``."""
    x = np.asarray(x)
    if math.isinf(cfg.snr_db) and cfg.snr_db > 0:
        return x.astype(np.result_type(x.dtype, dtype), copy=True)
    real_dtype = np.float32 if np.dtype(dtype) == np.complex64 else np.float64
    z = rng.standard_normal(x.shape + (2,), dtype=real_dtype).view(dtype)[..., 0]
    z *= real_dtype(math.sqrt(cfg.noise_var / 2.0))
    z += x
    return z


def cfo_phasor(n_samples: int, lam: float, p: LoRaParams) -> np.ndarray:
    """``exp(j*2*pi*n*lam/N)`` for ``n = 0..n_samples-1``."""
    n = np.arange(n_samples)
    return np.exp(2j * np.pi * lam * n / p.n_chips)


def apply_cfo(x, cfg: ChannelConfig, p: LoRaParams) -> np.ndarray:
    """Rotate a frame by the fractional CFO.

    The time index runs continuously along the last axis, so pass a flat
    frame (not one row per symbol) to keep the phase continuous between
    symbols.
    """
    x = np.asarray(x)
    if cfg.lam == 0:
        return x.copy()
    c = cfo_phasor(x.shape[-1], cfg.lam, p)
    return x * c.astype(np.result_type(x.dtype, np.complex64))


class Channel:
    """AWGN + CFO channel owning its random stream.

    One instance per worker; instances are not meant to be shared between
    threads.
    """

    def __init__(self, cfg: ChannelConfig, p: LoRaParams, rng: np.random.Generator | None = None,
                 dtype=np.complex128):
        self.cfg = cfg
        self.params = p
        self.rng = rng if rng is not None else np.random.default_rng(cfg.seed)
        self.dtype = dtype

    def __call__(self, x) -> np.ndarray:
        """``y = c * x + z`` on a frame whose last axis is time."""
        return add_awgn(apply_cfo(x, self.cfg, self.params), self.cfg, self.rng, self.dtype)
