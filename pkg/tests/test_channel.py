import math

import numpy as np
import pytest

from lorafer import Channel, ChannelConfig, LoRaParams, add_awgn, apply_cfo, modulate
from lorafer.analytic import cfo_pattern
from lorafer.channel import cfo_phasor, noise_variance
from lorafer.modulation import demodulate


def test_config_validation():
    ChannelConfig(lam=0.5)
    ChannelConfig(lam=-0.5)
    for bad in (0.51, -0.6, float("nan")):
        with pytest.raises(ValueError):
            ChannelConfig(lam=bad)


def test_noise_variance_convention():
    assert noise_variance(0.0) == 1.0
    assert math.isclose(noise_variance(-10.0), 10.0)
    assert ChannelConfig(snr_db=math.inf).noise_var == 0.0


def test_noiseless_passthrough(rng):
    x = modulate(np.arange(4), LoRaParams(7))
    y = add_awgn(x, ChannelConfig(), rng)
    np.testing.assert_array_equal(y, x)
    assert y is not x


def test_noise_power(rng):
    # per-sample noise variance is 10 at -10 dB (signal power 1 per chip)
    z = add_awgn(np.zeros(10 ** 6, complex), ChannelConfig(snr_db=-10.0), rng)
    assert abs(np.mean(np.abs(z) ** 2) / 10.0 - 1) < 0.01
    # circular: equal power in I and Q, uncorrelated
    assert abs(np.var(z.real) / np.var(z.imag) - 1) < 0.01
    assert abs(np.mean(z.real * z.imag)) < 0.05


def test_noise_is_deterministic():
    x = np.zeros(1000, complex)
    cfg = ChannelConfig(snr_db=-3.0)
    a = add_awgn(x, cfg, np.random.default_rng(7))
    b = add_awgn(x, cfg, np.random.default_rng(7))
    np.testing.assert_array_equal(a, b)


def test_cfo_zero_is_identity():
    p = LoRaParams(7)
    x = modulate(np.arange(3), p)
    np.testing.assert_array_equal(apply_cfo(x, ChannelConfig(lam=0.0), p), x)


def test_cfo_phasor_value():
    p = LoRaParams(7)
    c = cfo_phasor(256, 0.5, p)
    assert abs(c[128] - (-1)) < 1e-12
    assert abs(c[0] - 1) < 1e-15


def test_cfo_is_unit_modulus(rng):
    p = LoRaParams(8)
    x = rng.standard_normal(512) + 1j * rng.standard_normal(512)
    y = apply_cfo(x, ChannelConfig(lam=0.37), p)
    np.testing.assert_allclose(np.abs(y), np.abs(x), rtol=1e-12)


def test_cfo_peak_matches_pattern():
    p = LoRaParams(7)
    y = apply_cfo(modulate(0, p), ChannelConfig(lam=0.2), p)
    _, mags = demodulate(y, p)
    a_s = math.sin(0.2 * math.pi) / math.sin(0.2 * math.pi / 128)
    assert abs(mags[0] - a_s) < 1e-9
    np.testing.assert_allclose(mags, cfo_pattern(0, 0.2, p).magnitudes, atol=1e-9)


def test_cfo_continuous_across_symbols():
    p = LoRaParams(7)
    x = np.ones((2, 128), complex)
    y = apply_cfo(x.reshape(-1), ChannelConfig(lam=0.3), p)
    ratio = y[1:] / y[:-1]
    np.testing.assert_allclose(ratio, ratio[0], atol=1e-12)


def test_channel_callable_order():
    p = LoRaParams(7)
    cfg = ChannelConfig(snr_db=-5.0, lam=0.25)
    x = modulate(np.arange(4), p).reshape(-1)
    y1 = Channel(cfg, p, np.random.default_rng(3))(x)
    y2 = add_awgn(apply_cfo(x, cfg, p), cfg, np.random.default_rng(3))
    np.testing.assert_allclose(y1, y2, atol=1e-12)
