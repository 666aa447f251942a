"""Chirp modulation and DFT demodulation of LoRa symbols at one sample per chip."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft

SUPPORTED_SF = range(7, 13)


@dataclass(frozen=True)
class LoRaParams:
    sf: int
    n_chips: int = field(init=False)

    def __post_init__(self):
        if isinstance(self.sf, bool) or int(self.sf) != self.sf or self.sf not in SUPPORTED_SF:
            raise ValueError(f"spreading factor must be one of 7..12, got {self.sf!r}")
        object.__setattr__(self, "sf", int(self.sf))
        object.__setattr__(self, "n_chips", 1 << self.sf)


def _check_symbols(s, p: LoRaParams) -> np.ndarray:
    s = np.asarray(s)
    if not np.issubdtype(s.dtype, np.integer):
        raise TypeError("symbols must be integers")
    if np.any(s < 0) or np.any(s >= p.n_chips):
        raise ValueError(f"symbol out of range 0..{p.n_chips - 1}")
    return s.astype(np.int64)


def _chirp_phase_index(s: np.ndarray, n_chips: int) -> np.ndarray:
    # x[n] = exp(j*2*pi*(n^2 + 2*s*n - N*n) / (2N)); the numerator is an integer
    # int32 is exact here: every term is below 2 * 4096**2
    n = np.arange(n_chips, dtype=np.int32)
    base = n * n - n_chips * n
    return (base + 2 * s[..., None].astype(np.int32) * n) % (2 * n_chips)


def _unit_roots(m: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(m) / m)


def modulate(s, p: LoRaParams, dtype=np.complex128) -> np.ndarray:
    """Baseband chirp(s) for symbol value(s) ``s``.

    A scalar symbol gives a length-N vector; an array of shape ``(...,)``
    gives ``(..., N)``. Phases are built from exact integer indices into a
    table of 2N-th roots of unity, so every sample has unit modulus.
    """
    s = _check_symbols(s, p)
    return _unit_roots(2 * p.n_chips).astype(dtype)[_chirp_phase_index(s, p.n_chips)]


def reference_chirp(p: LoRaParams) -> np.ndarray:
    """Upchirp used for dechirping (the symbol ``s = 0``)."""
    return modulate(0, p)


def dechirp_spectrum(y, p: LoRaParams) -> np.ndarray:
    """Unnormalized DFT of ``y * conj(x_ref)`` along the last axis."""
    y = np.asarray(y)
    if y.shape[-1:] != (p.n_chips,):
        raise ValueError(f"expected {p.n_chips} samples per symbol, got shape {y.shape}")
    ref = reference_chirp(p).astype(np.result_type(y.dtype, np.complex64))
    return scipy.fft.fft(y * np.conj(ref), axis=-1)


def demodulate(y, p: LoRaParams):
    """Return ``(symbol, magnitudes)`` for one or more received symbols.

    ``y`` has shape ``(..., N)``. The decision is the argmax of the DFT
    magnitude; ``np.argmax`` keeps the lowest index on ties.
    """
    mags = np.abs(dechirp_spectrum(y, p))
    s_hat = np.argmax(mags, axis=-1)
    if s_hat.ndim == 0:
        s_hat = int(s_hat)
    return s_hat, mags


def split_symbols(frame, p: LoRaParams) -> np.ndarray:
    """Reshape a flat frame of samples into rows of N samples."""
    frame = np.asarray(frame)
    if frame.shape[-1] % p.n_chips:
        raise ValueError(f"frame length {frame.shape[-1]} is not a multiple of {p.n_chips}")
    return frame.reshape(*frame.shape[:-1], -1, p.n_chips)
