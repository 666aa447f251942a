"""Horizontal (dB) and vertical (decade) distances between error-rate curves."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq


class CurveRangeError(ValueError):
    """The requested rate level is not crossed inside a curve's SNR range."""


def required_snr(snr_db, rate, level: float) -> float:
    """SNR at which a decreasing curve first falls to ``level``.

    Interpolates ``log10(rate)`` linearly between the two grid points that
    bracket the level. Points with zero rate carry no log-domain
    information and are skipped.
    """
    snr_db = np.asarray(snr_db, dtype=float)
    rate = np.asarray(rate, dtype=float)
    order = np.argsort(snr_db)
    snr_db, rate = snr_db[order], rate[order]
    keep = rate > 0
    snr_db, rate = snr_db[keep], rate[keep]
    if len(snr_db) < 2:
        raise CurveRangeError("need at least two nonzero points to interpolate")
    target = math.log10(level)
    logs = np.log10(rate)
    for k in range(len(snr_db) - 1):
        a, b = logs[k], logs[k + 1]
        if a >= target > b or a > target >= b:
            t = (a - target) / (a - b)
            return float(snr_db[k] + t * (snr_db[k + 1] - snr_db[k]))
    raise CurveRangeError(
        f"rate {level:g} not crossed within {snr_db[0]:g}..{snr_db[-1]:g} dB "
        f"(rates {rate.max():.3g}..{rate.min():.3g})"
    )


def solve_required_snr(rate_fn, level: float, lo: float = -40.0, hi: float = 20.0) -> float:
    """Root of ``log10(rate_fn(snr)) = log10(level)`` for a continuous analytic curve."""
    target = math.log10(level)

    def f(x):
        r = float(rate_fn(x))
        return (math.log10(r) if r > 0 else -400.0) - target

    return brentq(f, lo, hi, xtol=1e-9)


@dataclass
class GapReport:
    level: float
    snr_reference: float
    snr_candidate: float

    @property
    def gap_db(self) -> float:
        """Candidate minus reference; positive when the candidate needs more SNR."""
        return self.snr_candidate - self.snr_reference


def horizontal_gaps(reference, candidate, levels) -> list[GapReport]:
    """Distance in dB between two curves at each rate level.

    ``reference`` and ``candidate`` are ``(snr_db, rate)`` pairs.
    """
    ref_snr, ref_rate = (np.asarray(a, dtype=float) for a in reference)
    cand_snr, cand_rate = (np.asarray(a, dtype=float) for a in candidate)
    lo = max(ref_snr.min(), cand_snr.min())
    hi = min(ref_snr.max(), cand_snr.max())
    if lo > hi:
        raise CurveRangeError(
            f"SNR ranges do not overlap: {ref_snr.min():g}..{ref_snr.max():g} vs "
            f"{cand_snr.min():g}..{cand_snr.max():g} dB"
        )
    return [GapReport(level, required_snr(ref_snr, ref_rate, level),
                      required_snr(cand_snr, cand_rate, level)) for level in levels]


def max_vertical_gap(reference, candidate) -> float:
    """Largest ``|log10(rate)|`` difference over the shared SNR range.

    The candidate is interpolated log-linearly onto the reference grid; points
    where either rate is zero are ignored.
    """
    ref_snr, ref_rate = (np.asarray(a, dtype=float) for a in reference)
    cand_snr, cand_rate = (np.asarray(a, dtype=float) for a in candidate)
    order = np.argsort(cand_snr)
    cand_snr, cand_rate = cand_snr[order], cand_rate[order]
    cpos = cand_rate > 0
    if cpos.sum() < 2:
        return float("nan")
    inside = (ref_snr >= cand_snr[cpos].min()) & (ref_snr <= cand_snr[cpos].max()) & (ref_rate > 0)
    if not inside.any():
        return float("nan")
    interp = np.interp(ref_snr[inside], cand_snr[cpos], np.log10(cand_rate[cpos]))
    return float(np.max(np.abs(np.log10(ref_rate[inside]) - interp)))
