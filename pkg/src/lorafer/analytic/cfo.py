"""Bit, codeword and frame error rates under AWGN plus a fractional CFO.

Each DFT bin magnitude, normalised by the per-dimension noise standard
deviation, is Rice distributed with location set by the CFO pattern. The
symbol error splits into "an adjacent bin wins" (one bit wrong thanks to
Gray labelling) and "some other bin wins" (half the bits wrong on
average); each is an order-statistic integral over the correct bin's
density.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ..coding import CodeConfig
from ..modulation import LoRaParams
from .awgn import FrameConfig, cwer_awgn, fer_from_cwer
from .special import rice_logcdf, rice_pdf

QUAD_EPSABS = 1e-14
QUAD_EPSREL = 1e-10
TAIL_SPAN = 12.0


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class CfoPattern:
    """DFT of the noiseless dechirped symbol under CFO.

    ``values == magnitudes * exp(1j * phases)`` with the forward DFT
    ``sum_n x[n] exp(-2j*pi*k*n/N)``.
    """

    magnitudes: np.ndarray
    phases: np.ndarray

    @property
    def values(self) -> np.ndarray:
        return self.magnitudes * np.exp(1j * self.phases)


def cfo_pattern(s: int, lam: float, p: LoRaParams) -> CfoPattern:
    if not abs(lam) <= 0.5:
        raise ValueError(f"fractional CFO must satisfy |lam| <= 0.5, got {lam}")
    if not 0 <= s < p.n_chips:
        raise ValueError(f"symbol out of range 0..{p.n_chips - 1}")
    n = p.n_chips
    d = s - np.arange(n) + lam
    den = np.sin(np.pi * d / n)
    peak = np.abs(den) < 1e-15
    amp = np.where(peak, float(n), np.sin(np.pi * d) / np.where(peak, 1.0, den))
    phase = np.pi * d * (n - 1) / n
    phase = np.where(amp < 0, phase + np.pi, phase)
    phase = np.angle(np.exp(1j * phase))
    return CfoPattern(magnitudes=np.abs(amp), phases=phase)


def rice_locations(snr_db: float, lam: float, p: LoRaParams, s: int) -> np.ndarray:
    """Location parameter of every bin's normalised magnitude for symbol ``s``.

    Noise in each unnormalised DFT bin is CN(0, N * sigma^2), i.e. variance
    ``N * sigma^2 / 2`` per real dimension.
    """
    sigma2 = 10.0 ** (-snr_db / 10.0)
    return cfo_pattern(s, lam, p).magnitudes / math.sqrt(p.n_chips * sigma2 / 2.0)


def _exceed_probability(v_s: float, v_others: np.ndarray) -> float:
    """``P(max_j |Y_j| > |Y_s|)`` for independent unit-scale Rice magnitudes."""

    def integrand(y):
        log_f = float(np.sum(rice_logcdf(y, v_others)))
        return rice_pdf(y, v_s) * -math.expm1(log_f)

    upper = v_s + TAIL_SPAN
    points = [v_s] if 0.0 < v_s < upper else None
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(integrand, 0.0, upper, points=points,
                                        epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=200)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(
                f"order-statistic integral did not converge (v_s={v_s:.6g}, "
                f"{len(v_others)} competing bins): {exc}"
            ) from exc
    return min(max(value, 0.0), 1.0)


def error_terms(snr_db: float, lam: float, p: LoRaParams, s: int | None = None):
    """Return ``(P_adjacent, P_rest)`` for transmitted symbol ``s``.

    ``P_adjacent`` is the probability that one of the two neighbouring bins
    (wrapping modulo N) beats the correct bin; ``P_rest`` is the same for
    the remaining N - 3 bins.
    """
    if s is None:
        s = p.n_chips // 2
    if snr_db == math.inf:
        # noiseless: the correct bin wins unless the CFO splits the peak evenly
        return (0.5, 0.0) if abs(lam) == 0.5 else (0.0, 0.0)
    v = rice_locations(snr_db, lam, p, s)
    n = p.n_chips
    adjacent = [(s - 1) % n, (s + 1) % n]
    rest = np.ones(n, dtype=bool)
    rest[[s, *adjacent]] = False
    return (_exceed_probability(v[s], v[adjacent]),
            _exceed_probability(v[s], v[rest]))


def ser_cfo(snr_db: float, lam: float, p: LoRaParams, s: int | None = None) -> float:
    """Two-term symbol error probability (the joint-event term is dropped)."""
    p_adj, p_rest = error_terms(snr_db, lam, p, s)
    return min(p_adj + p_rest, 1.0)


def ber_cfo_given_symbol(snr_db: float, lam: float, p: LoRaParams, s: int) -> float:
    p_adj, p_rest = error_terms(snr_db, lam, p, s)
    return min(p_adj / p.sf + 0.5 * p_rest, 1.0)


def ber_cfo(snr_db, lam: float, p: LoRaParams):
    """Bit error probability averaged over uniformly distributed symbols.

    The CFO pattern of every symbol is a circular shift of the same
    magnitudes, so a single symbol (N/2) stands in for the average.
    """
    if np.ndim(snr_db):
        return np.array([ber_cfo(x, lam, p) for x in np.asarray(snr_db, dtype=float)])
    return ber_cfo_given_symbol(float(snr_db), lam, p, p.n_chips // 2)


def cwer_cfo(snr_db, lam: float, p: LoRaParams, cfg: CodeConfig):
    return cwer_awgn(ber_cfo(snr_db, lam, p), cfg.n)


def fer_cfo(snr_db, lam: float, p: LoRaParams, cfg: CodeConfig, fc: FrameConfig):
    return fer_from_cwer(cwer_cfo(snr_db, lam, p, cfg), fc.n_codewords(p, cfg))
