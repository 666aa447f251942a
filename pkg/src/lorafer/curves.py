"""Error-rate curves: Monte Carlo counts, confidence intervals and analytic series."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from .analytic import (
    FrameConfig,
    ber_awgn,
    ber_cfo,
    cwer_awgn,
    fer_awgn_approx1,
    fer_awgn_approx2,
    fer_cfo,
    ser_awgn,
)
from .coding import CodeConfig
from .modulation import LoRaParams

Z95 = 1.959963984540054


@dataclass
class FrameCounts:
    frames: int = 0
    frame_errors: int = 0
    codewords: int = 0
    codeword_errors: int = 0
    bits: int = 0
    bit_errors: int = 0
    symbols: int = 0
    symbol_errors: int = 0

    def __add__(self, other: "FrameCounts") -> "FrameCounts":
        return FrameCounts(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))


def wilson_interval(errors: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    ``(p + z^2/2n -+ z*sqrt(p(1-p)/n + z^2/4n^2)) / (1 + z^2/n)`` with
    ``p = errors / trials``. Unlike the plain Wald interval it stays
    non-degenerate when no errors were seen.
    """
    if trials <= 0:
        return 0.0, 1.0
    phat = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z / denom * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials))
    lo = 0.0 if errors == 0 else max(0.0, center - half)
    hi = 1.0 if errors == trials else min(1.0, center + half)
    return lo, hi


_METRIC_FIELDS = {
    "fer": ("frame_errors", "frames"),
    "cwer": ("codeword_errors", "codewords"),
    "ber": ("bit_errors", "bits"),
    "ser": ("symbol_errors", "symbols"),
}


@dataclass
class CurvePoint:
    snr_db: float
    rate: float
    counts: FrameCounts | None = None
    ci_low: float | None = None
    ci_high: float | None = None


@dataclass
class ErrorRateCurve:
    """A rate-vs-SNR series tagged with the estimator that produced it."""

    estimator: str
    sf: int
    metric: str = "fer"
    lam: float = 0.0
    code: str = "4/8"
    n_payload_symbols: int = 32
    points: list[CurvePoint] = field(default_factory=list)

    @property
    def snr_db(self) -> np.ndarray:
        return np.array([pt.snr_db for pt in self.points], dtype=float)

    @property
    def rate(self) -> np.ndarray:
        return np.array([pt.rate for pt in self.points], dtype=float)

    def add_counts(self, snr_db: float, counts: FrameCounts) -> CurvePoint:
        errors, trials = (getattr(counts, name) for name in _METRIC_FIELDS[self.metric])
        lo, hi = wilson_interval(errors, trials)
        pt = CurvePoint(snr_db, errors / trials if trials else float("nan"), counts, lo, hi)
        self.points.append(pt)
        return pt

    def as_metric(self, metric: str) -> "ErrorRateCurve":
        """Same Monte Carlo counts viewed through another metric."""
        out = ErrorRateCurve(self.estimator, self.sf, metric, self.lam, self.code,
                             self.n_payload_symbols)
        for pt in self.points:
            out.add_counts(pt.snr_db, pt.counts)
        return out


def analytic_curve(estimator: str, sf: int, snr_db, code: CodeConfig | None = None,
                   n_payload_symbols: int = 32, lam: float = 0.0) -> ErrorRateCurve:
    """Evaluate one closed-form estimator over an SNR grid."""
    code = code or CodeConfig()
    p = LoRaParams(sf)
    fc = FrameConfig(n_payload_symbols)
    funcs = {
        "approx1": ("fer", lambda x: fer_awgn_approx1(x, p, code, fc)),
        "approx2": ("fer", lambda x: fer_awgn_approx2(x, p, code, fc)),
        "cfo_analytic": ("fer", lambda x: fer_cfo(x, lam, p, code, fc)),
        "ser_awgn": ("ser", lambda x: ser_awgn(x, p)),
        "ber_awgn": ("ber", lambda x: ber_awgn(x, p)),
        "cwer_awgn": ("cwer", lambda x: cwer_awgn(ber_awgn(x, p), code.n)),
        "ber_cfo": ("ber", lambda x: ber_cfo(x, lam, p)),
    }
    if estimator not in funcs:
        raise ValueError(f"unknown estimator {estimator!r}")
    metric, fn = funcs[estimator]
    if estimator not in ("cfo_analytic", "ber_cfo"):
        lam = 0.0
    curve = ErrorRateCurve(estimator, sf, metric, float(lam), code.label, n_payload_symbols)
    for x in np.atleast_1d(np.asarray(snr_db, dtype=float)):
        curve.points.append(CurvePoint(float(x), float(fn(float(x)))))
    return curve
