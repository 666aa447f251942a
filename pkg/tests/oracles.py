"""Independent reference computations used by several test modules."""

import math

import numpy as np
from scipy import integrate, stats

from lorafer import ChannelConfig, LoRaParams, add_awgn, apply_cfo, demodulate, modulate
from lorafer.coding import gray_demap


def exact_ser_awgn(snr_db: float, sf: int) -> float:
    """Exact non-coherent SER: 1 - E[F_Rayleigh(Y_s)^(N-1)] by quadrature."""
    n = 1 << sf
    v = math.sqrt(2 * n * 10 ** (snr_db / 10))

    def f(y):
        if y <= 0:
            return 0.0
        # 1 - (1 - e^{-y^2/2})^(N-1), kept accurate in both tails
        return stats.rice.pdf(y, v) * -math.expm1((n - 1) * math.log1p(-math.exp(-y * y / 2)))

    return integrate.quad(f, 0, v + 15, points=[v], epsabs=1e-15, limit=200)[0]


def uncoded_chain(snr_db, lam, sf, n_symbols, rng, chunk=20000):
    """Symbol and bit error counts of random Gray-labelled symbols through the channel."""
    p = LoRaParams(sf)
    ch = ChannelConfig(snr_db=snr_db, lam=lam)
    sym_err = bit_err = done = 0
    while done < n_symbols:
        m = min(chunk, n_symbols - done)
        s = rng.integers(0, p.n_chips, m)
        y = add_awgn(apply_cfo(modulate(s, p, dtype=np.complex64), ch, p), ch, rng,
                     dtype=np.complex64)
        s_hat, _ = demodulate(y, p)
        sym_err += int((s_hat != s).sum())
        bit_err += int((gray_demap(s_hat, sf) != gray_demap(s, sf)).sum())
        done += m
    return sym_err, bit_err


def binomial_half_width(k: int, n: int, z: float = 1.96) -> float:
    """Normal-approximation half-width, floored at one event to stay sane near 0."""
    p = max(k, 1) / n
    return z * math.sqrt(p * (1 - p) / n)
