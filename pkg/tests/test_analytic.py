import math

import numpy as np
import pytest
from scipy import integrate, stats

from lorafer import LoRaParams, apply_cfo, ChannelConfig, modulate
from lorafer.analytic import (
    FrameConfig,
    ber_awgn,
    ber_cfo,
    ber_cfo_given_symbol,
    cfo_pattern,
    cond_ser_awgn,
    cwer_awgn,
    cwer_cfo,
    error_terms,
    fer_awgn_approx1,
    fer_awgn_approx2,
    fer_cfo,
    fer_from_cwer,
    harmonic,
    marcum_q1,
    q_function,
    rice_cdf,
    rice_locations,
    rice_logcdf,
    rice_pdf,
    ser_awgn,
    ser_cfo,
)
from lorafer.analytic.cfo import _exceed_probability
from lorafer.coding import CodeConfig
from lorafer.modulation import dechirp_spectrum

from oracles import binomial_half_width, exact_ser_awgn, uncoded_chain

P7 = LoRaParams(7)
C8 = CodeConfig(n=8)
FC = FrameConfig(32)


# -- special functions ---------------------------------------------------------


def test_q_function():
    assert q_function(0.0) == 0.5
    assert q_function(-math.inf) == 1.0
    assert q_function(math.inf) == 0.0
    assert abs(q_function(1.6449) - 0.05) < 1e-4
    x = np.linspace(-5, 5, 11)
    np.testing.assert_allclose(q_function(x), stats.norm.sf(x), rtol=1e-12)


def test_harmonic():
    assert harmonic(0) == 0
    assert harmonic(1) == 1
    assert math.isclose(harmonic(3), 11 / 6)
    assert math.isclose(harmonic(4095), sum(1 / k for k in range(1, 4096)), rel_tol=1e-14)
    with pytest.raises(ValueError):
        harmonic(-1)


def test_rice_degenerates_to_rayleigh():
    assert math.isclose(rice_pdf(1.0, 0.0), math.exp(-0.5), rel_tol=1e-14)
    y = np.linspace(0, 6, 25)
    np.testing.assert_allclose(rice_cdf(y, 0.0), 1 - np.exp(-y ** 2 / 2), atol=1e-14)


def test_rice_cdf_limits():
    assert rice_cdf(0.0, 3.0) == 0.0
    assert rice_cdf(1e3, 3.0) == 1.0
    assert marcum_q1(3.0, 0.0) == 1.0


def test_rice_matches_scipy_rice():
    y = np.linspace(0.01, 30, 200)
    for v in (0.5, 5.0, 20.0):
        np.testing.assert_allclose(rice_pdf(y, v), stats.rice.pdf(y, v), rtol=1e-9, atol=1e-300)


def test_rice_cdf_vs_quadrature():
    # the pdf is built from i0e, the cdf from the noncentral chi-square; they must agree
    v = 5.0
    for y in (0.5, 3.0, 5.0, 7.5, 20.0):
        quad = integrate.quad(rice_pdf, 0, y, args=(v,), epsabs=1e-14, epsrel=1e-12, limit=200)[0]
        assert abs(rice_cdf(y, v) - quad) < 1e-8


def test_marcum_against_series():
    # Q1(a, b) = exp(-(a^2 + b^2)/2) * sum_k (a/b)^k I_k(ab)
    from scipy.special import ive
    for a, b in [(1.0, 2.0), (3.0, 2.5), (5.0, 6.0)]:
        k = np.arange(0, 200)
        series = np.sum((a / b) ** k * ive(k, a * b)) * math.exp(-(a - b) ** 2 / 2)
        assert abs(marcum_q1(a, b) - series) < 1e-10


def test_rice_logcdf_tails():
    np.testing.assert_allclose(rice_logcdf(np.array([0.5, 3.0]), 2.0),
                               np.log(rice_cdf(np.array([0.5, 3.0]), 2.0)), rtol=1e-12)
    # deep lower tail: never NaN, and far below any cdf that matters
    assert rice_logcdf(1e-3, 30.0) < -400
    # near one: log1p keeps the tiny deficit
    tail = marcum_q1(0.0, 12.0)
    assert math.isclose(float(rice_logcdf(12.0, 0.0)), math.log1p(-tail), rel_tol=1e-10)


# -- AWGN symbol, bit, codeword and frame errors --------------------------------------


def test_ser_limits_and_monotone():
    assert ser_awgn(math.inf, P7) == 0.0
    grid = np.arange(-30, 5, 0.5)
    ser = ser_awgn(grid, P7)
    assert np.all((ser >= 0) & (ser <= 1))
    assert np.all(np.diff(ser) <= 0)


def test_spreading_gain_dominates():
    assert ser_awgn(-15.0, LoRaParams(12)) < ser_awgn(-15.0, P7)


@pytest.mark.parametrize("sf", [7, 9, 12])
def test_ser_close_to_exact_integral(sf):
    """Closed form tracks the exact order-statistic SER within 30% down to 1e-6."""
    p = LoRaParams(sf)
    for snr in np.arange(-30.0, -4.0, 1.0):
        exact = exact_ser_awgn(snr, sf)
        if exact < 1e-6:
            continue
        assert abs(ser_awgn(snr, p) / exact - 1) < 0.30, snr


def test_exact_integral_matches_simulation(rng):
    snr = -8.0
    n = 400_000
    k, _ = uncoded_chain(snr, 0.0, 7, n, rng)
    assert abs(k / n - exact_ser_awgn(snr, 7)) < 3 * binomial_half_width(k, n)


def test_ber_is_half_ser():
    assert ber_awgn(math.inf, P7) == 0.0
    grid = np.arange(-20, 0, 1.0)
    np.testing.assert_allclose(ber_awgn(grid, P7), 0.5 * ser_awgn(grid, P7), rtol=0)


def test_cwer_values():
    assert cwer_awgn(0.0, 8) == 0.0
    assert cwer_awgn(1.0, 7) == 1.0
    expect = 1 - (0.95 ** 8 + 8 * 0.05 * 0.95 ** 7)
    assert math.isclose(cwer_awgn(0.05, 8), expect, rel_tol=1e-12)
    with pytest.raises(ValueError):
        cwer_awgn(1.5, 8)


def test_cwer_small_rate_precision():
    # leading term C(n,2) p^2 must survive where 1 - P0 - P1 would cancel
    p_b = 1e-12
    assert math.isclose(cwer_awgn(p_b, 8), 28 * p_b ** 2, rel_tol=1e-9)


def test_fer_from_cwer():
    assert fer_from_cwer(0.0, 56) == 0.0
    assert fer_from_cwer(0.3, 1) == pytest.approx(0.3, rel=1e-14)
    assert math.isclose(fer_from_cwer(1e-15, 56), 56e-15, rel_tol=1e-9)


def test_frame_config():
    assert FC.n_blocks(C8) == 4
    assert FC.n_codewords(P7, C8) == 28
    with pytest.raises(ValueError):
        FrameConfig(30).check(C8)


def test_approx1_structure():
    p_cw = cwer_awgn(ber_awgn(-9.0, P7), 8)
    assert math.isclose(fer_awgn_approx1(-9.0, P7, C8, FC), 1 - (1 - p_cw) ** 28, rel_tol=1e-12)


def test_approx1_monotone():
    fer = fer_awgn_approx1(np.arange(-14, -2, 0.25), P7, C8, FC)
    assert np.all((fer >= 0) & (fer <= 1))
    assert np.all(np.diff(fer) <= 0)


def test_cond_ser_first_is_unconditional():
    grid = np.arange(-14, -4, 1.0)
    np.testing.assert_array_equal(cond_ser_awgn(grid, P7, 1), ser_awgn(grid, P7))
    with pytest.raises(ValueError):
        cond_ser_awgn(-6.0, P7, 0)
    with pytest.raises(ValueError):
        cond_ser_awgn(-6.0, P7, 8)


def test_cond_ser_last_bit_finite():
    # i = SF leaves a single competing bin (harmonic number H_1)
    for sf in range(7, 13):
        p = LoRaParams(sf)
        val = cond_ser_awgn(-10.0, p, sf)
        assert np.isfinite(val) and 0 <= val <= 1


@pytest.mark.parametrize("snr", [-12.0, -9.0])
def test_cond_ser_decreasing_sf7(snr):
    seq = [cond_ser_awgn(snr, P7, i) for i in range(1, 8)]
    assert all(a > b for a, b in zip(seq, seq[1:]))


def test_cond_ser_decreasing_sf7_m6_except_last():
    # with a single competing bin (H_1) the closed form's wider denominator makes
    # the last term rise again at high SNR, so only the first SF - 1 terms are ordered
    seq = [cond_ser_awgn(-6.0, P7, i) for i in range(1, 8)]
    assert all(a > b for a, b in zip(seq[:-1], seq[1:-1]))


def test_approx2_structure_single_block():
    fc = FrameConfig(8)
    snr = -8.0
    expect = 1.0
    for i in range(1, 8):
        expect *= 1 - cwer_awgn(0.5 * cond_ser_awgn(snr, P7, i), 8)
    assert math.isclose(fer_awgn_approx2(snr, P7, C8, fc), 1 - expect, rel_tol=1e-9)


@pytest.mark.parametrize("sf", range(7, 13))
def test_approx2_below_approx1(sf):
    p = LoRaParams(sf)
    grid = np.arange(-30, 0, 0.25)
    a1 = fer_awgn_approx1(grid, p, C8, FC)
    a2 = fer_awgn_approx2(grid, p, C8, FC)
    live = a1 >= 1e-12
    assert live.sum() > 10
    assert np.all(a2[live] <= a1[live])
    assert fer_awgn_approx2(math.inf, p, C8, FC) == 0.0


# -- CFO -----------------------------------------------------------------------------


def test_cfo_pattern_lambda_zero():
    pat = cfo_pattern(17, 0.0, P7)
    assert abs(pat.magnitudes[17] - 128) < 1e-12
    assert np.max(np.delete(pat.magnitudes, 17)) < 1e-12


@pytest.mark.parametrize("s,lam", [(0, 0.2), (5, -0.35), (127, 0.5), (64, 0.3)])
def test_cfo_pattern_vs_fft(s, lam):
    y = apply_cfo(modulate(s, P7), ChannelConfig(lam=lam), P7)
    spec = dechirp_spectrum(y, P7)
    pat = cfo_pattern(s, lam, P7)
    np.testing.assert_allclose(pat.values, spec, atol=1e-9)


@pytest.mark.parametrize("lam", [0.0, 0.1, 0.25, 0.4, 0.5, -0.3])
@pytest.mark.parametrize("sf", [7, 10, 12])
def test_cfo_pattern_parseval(lam, sf):
    p = LoRaParams(sf)
    a = cfo_pattern(3, lam, p).magnitudes
    assert abs(np.sum(a ** 2) / p.n_chips ** 2 - 1) < 1e-6


def test_cfo_pattern_is_circular_shift():
    a0 = cfo_pattern(0, 0.3, P7).magnitudes
    for s in (1, 64, 127):
        np.testing.assert_allclose(cfo_pattern(s, 0.3, P7).magnitudes, np.roll(a0, s), atol=1e-9)


def test_cfo_pattern_validation():
    with pytest.raises(ValueError):
        cfo_pattern(0, 0.6, P7)
    with pytest.raises(ValueError):
        cfo_pattern(128, 0.1, P7)


def test_rice_locations_scale():
    # at lam = 0 the peak location is sqrt(2 N gamma)
    v = rice_locations(-6.0, 0.0, P7, 0)
    assert math.isclose(v[0], math.sqrt(2 * 128 * 10 ** -0.6), rel_tol=1e-12)


def test_exceed_probability_vs_sampling(rng):
    """Max of independent Rice magnitudes against direct sampling."""
    v_s = 4.0
    others = np.array([1.5, 2.5, 0.0, 0.0, 0.7])
    n = 400_000

    def draw(v):
        return np.abs(v + rng.standard_normal(n) + 1j * rng.standard_normal(n))

    win = np.max(np.stack([draw(v) for v in others]), axis=0) > draw(v_s)
    k = int(win.sum())
    assert abs(k / n - _exceed_probability(v_s, others)) < 3 * binomial_half_width(k, n)


def test_max_rice_distribution_ks(rng):
    """The product-of-CDFs law for the maximum, checked with a KS test."""
    others = np.array([0.0, 1.0, 2.0, 3.0])
    n = 1_000_000
    samples = np.max(np.abs(others + rng.standard_normal((n, 4)) + 1j * rng.standard_normal((n, 4))), axis=1)
    cdf = lambda y: np.prod([rice_cdf(y, v) for v in others], axis=0)
    assert stats.kstest(samples, cdf).pvalue > 0.01


def test_error_terms_awgn_vs_quadrature():
    # with no CFO the competitors are Rayleigh: P = E[1 - (1 - e^{-Y^2/2})^m]
    snr = -8.0
    v = math.sqrt(2 * 128 * 10 ** (snr / 10))

    def exceed(m):
        f = lambda y: stats.rice.pdf(y, v) * -math.expm1(m * math.log1p(-math.exp(-y * y / 2)))
        return integrate.quad(f, 1e-12, v + 15, points=[v], epsabs=1e-15, limit=200)[0]

    p_adj, p_rest = error_terms(snr, 0.0, P7)
    assert math.isclose(p_adj, exceed(2), rel_tol=1e-7)
    assert math.isclose(p_rest, exceed(125), rel_tol=1e-7)


def test_noiseless_cfo_terms():
    assert error_terms(math.inf, 0.3, P7) == (0.0, 0.0)
    assert ber_cfo(math.inf, 0.0, P7) == 0.0


def test_ser_cfo_lambda_zero_near_exact():
    for snr in (-10.0, -8.0, -6.0):
        assert abs(ser_cfo(snr, 0.0, P7) / exact_ser_awgn(snr, 7) - 1) < 0.04


def test_ber_cfo_lambda_zero_vs_closed_form():
    """Both approximate the same BER; they agree to 25% where the rate is visible.

    The closed form drifts optimistic below BER ~1e-6 while the integral stays exact.
    """
    grid = np.arange(-16.0, -6.5, 1.0)
    ratio = ber_cfo(grid, 0.0, P7) / ber_awgn(grid, P7)
    assert np.all(np.abs(ratio - 1) < 0.25)


def test_ber_cfo_vectorizes():
    grid = np.array([-9.0, -8.0])
    np.testing.assert_array_equal(ber_cfo(grid, 0.2, P7),
                                  [ber_cfo(-9.0, 0.2, P7), ber_cfo(-8.0, 0.2, P7)])


def test_ber_cfo_vs_simulation(rng):
    snr, lam, n = -8.0, 0.2, 400_000
    _, bits = uncoded_chain(snr, lam, 7, n, rng)
    est = bits / (7 * n)
    pred = ber_cfo(snr, lam, P7)
    # symbol errors drive bit errors, so widen by the bits per error
    tol = 3 * binomial_half_width(max(bits // 3, 1), n) / 7 * 3
    assert abs(est - pred) < max(0.10 * pred, tol)


def test_shift_invariance():
    vals = [ber_cfo_given_symbol(-7.0, 0.3, P7, s) for s in (0, 1, 64, 127)]
    assert max(vals) - min(vals) < 1e-8


def test_cfo_worse_for_larger_lambda():
    grid = np.arange(-10.0, -2.0, 1.0)
    f2 = fer_cfo(grid, 0.2, P7, C8, FC)
    f4 = fer_cfo(grid, 0.4, P7, C8, FC)
    assert np.all(f4 > f2)


def test_cwer_cfo_structure():
    assert cwer_cfo(math.inf, 0.3, P7, C8) == 0.0
    b = ber_cfo(-8.0, 0.0, P7)
    assert cwer_cfo(-8.0, 0.0, P7, C8) == cwer_awgn(b, 8)


def test_fer_cfo_lambda_zero_structure():
    b = ber_cfo(-9.0, 0.0, P7)
    assert fer_cfo(-9.0, 0.0, P7, C8, FC) == fer_from_cwer(cwer_awgn(b, 8), 28)
