from .awgn import (
    FrameConfig,
    ber_awgn,
    cond_ser_awgn,
    cwer_awgn,
    fer_awgn_approx1,
    fer_awgn_approx2,
    fer_from_cwer,
    ser_awgn,
)
from .cfo import (
    CfoPattern,
    QuadratureError,
    ber_cfo,
    ber_cfo_given_symbol,
    cfo_pattern,
    cwer_cfo,
    error_terms,
    fer_cfo,
    rice_locations,
    ser_cfo,
)
from .special import harmonic, marcum_q1, q_function, rice_cdf, rice_logcdf, rice_pdf

__all__ = [
    "CfoPattern", "FrameConfig", "QuadratureError",
    "ber_awgn", "ber_cfo", "ber_cfo_given_symbol", "cfo_pattern", "cond_ser_awgn",
    "cwer_awgn", "cwer_cfo", "error_terms", "fer_awgn_approx1", "fer_awgn_approx2",
    "fer_cfo", "fer_from_cwer", "harmonic", "marcum_q1", "q_function", "rice_cdf",
    "rice_locations", "rice_logcdf", "rice_pdf", "ser_awgn", "ser_cfo",
]
