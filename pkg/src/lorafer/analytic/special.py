"""Scalar special functions used by the error-rate expressions."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import special
from scipy.stats import ncx2


def q_function(x):
    """Gaussian tail probability ``P(X > x)`` for standard normal X."""
    out = 0.5 * special.erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(out) if np.ndim(out) == 0 else out


@lru_cache(maxsize=None)
def harmonic(n: int) -> float:
    """n-th harmonic number; ``harmonic(0) == 0``."""
    if n < 0:
        raise ValueError("harmonic number needs n >= 0")
    return math.fsum(1.0 / k for k in range(1, n + 1))


def rice_pdf(y, v):
    """Rice density with location ``v`` and unit scale.

    Written with the exponentially scaled Bessel function so large ``y * v``
    does not overflow.
    """
    y = np.asarray(y, dtype=float)
    v = np.asarray(v, dtype=float)
    out = np.where(y >= 0, y * special.i0e(y * v) * np.exp(-0.5 * (y - v) ** 2), 0.0)
    return float(out) if out.ndim == 0 else out


def marcum_q1(a, b):
    """First-order Marcum Q function ``Q1(a, b) = P(Rice(a, 1) > b)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.where(b > 0, ncx2.sf(b * b, 2, a * a), 1.0)
    return float(out) if np.ndim(out) == 0 else out


def rice_cdf(y, v):
    y = np.asarray(y, dtype=float)
    v = np.asarray(v, dtype=float)
    out = np.where(y > 0, ncx2.cdf(y * y, 2, v * v), 0.0)
    return float(out) if np.ndim(out) == 0 else out


def rice_logcdf(y, v):
    """``log F_Ri(y; v, 1)``, accurate both where F is tiny and where F is close to 1."""
    y = np.asarray(y, dtype=float)
    v = np.asarray(v, dtype=float)
    y2 = y * y
    v2 = np.broadcast_to(v * v, np.broadcast_shapes(y.shape, v.shape))
    y2 = np.broadcast_to(y2, v2.shape)
    tail = ncx2.sf(y2, 2, v2)
    with np.errstate(divide="ignore"):
        out = np.where(tail < 0.5, np.log1p(-tail), np.log(ncx2.cdf(y2, 2, v2)))
    return np.where(y2 > 0, out, -np.inf)
