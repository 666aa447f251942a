"""Hamming (4,7)/(4,8) codec, diagonal interleaver and Gray labelling.

Bit vectors are numpy uint8 arrays with the most significant bit first.
All functions broadcast over leading axes so whole frames can be processed
at once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

K = 4

# Parity bits of the systematic (7,4) code; column j of the check matrix is
# the syndrome of an error in bit j, all seven distinct and nonzero.
_PARITY = np.array(
    [
        [1, 0, 1],
        [1, 1, 1],
        [1, 1, 0],
        [0, 1, 1],
    ],
    dtype=np.uint8,
)
_GENERATOR_7 = np.hstack([np.eye(K, dtype=np.uint8), _PARITY])
_CHECK_7 = np.hstack([_PARITY.T, np.eye(3, dtype=np.uint8)])


@dataclass(frozen=True)
class CodeConfig:
    """Code rate selection. ``coded=False`` bypasses coding and interleaving."""

    n: int = 8
    coded: bool = True
    k: int = K

    def __post_init__(self):
        if self.k != K:
            raise ValueError("data word length is fixed at 4")
        if self.coded and self.n not in (7, 8):
            raise ValueError(f"coded mode supports n in (7, 8), got {self.n}")
        if not self.coded and self.n != K:
            raise ValueError("uncoded mode is a k = n = 4 pass-through")

    @classmethod
    def uncoded(cls) -> "CodeConfig":
        return cls(n=K, coded=False)

    @property
    def label(self) -> str:
        return f"4/{self.n}" if self.coded else "uncoded"


class DecodeStatus(enum.IntEnum):
    CLEAN = 0
    CORRECTED = 1
    FAILURE = 2


@dataclass
class DecodeOutcome:
    data: np.ndarray
    status: object  # DecodeStatus for a single word, int array otherwise


def bits_to_int(bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.int64)
    weights = 1 << np.arange(bits.shape[-1] - 1, -1, -1, dtype=np.int64)
    return bits @ weights


def int_to_bits(values, width: int) -> np.ndarray:
    values = np.asarray(values, dtype=np.int64)
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((values[..., None] >> shifts) & 1).astype(np.uint8)


def hamming_distance(w1, w2) -> int:
    w1 = np.asarray(w1)
    w2 = np.asarray(w2)
    if w1.shape != w2.shape:
        raise ValueError(f"length mismatch: {w1.shape} vs {w2.shape}")
    return int(np.count_nonzero(w1 != w2))


def _check_coded(cfg: CodeConfig):
    if not cfg.coded:
        raise ValueError("Hamming codec requires a coded CodeConfig")


@lru_cache(maxsize=None)
def _codebook(n: int) -> np.ndarray:
    data = int_to_bits(np.arange(16), K)
    words = (data.astype(np.int64) @ _GENERATOR_7 % 2).astype(np.uint8)
    if n == 8:
        words = np.hstack([words, words.sum(axis=1, keepdims=True) % 2]).astype(np.uint8)
    return words


@lru_cache(maxsize=None)
def _decode_table(n: int):
    """Syndrome decoding of every possible received word, indexed by its integer value."""
    received = int_to_bits(np.arange(1 << n), n)
    head = received[:, :7].astype(np.int64)
    syndrome = bits_to_int(head @ _CHECK_7.T % 2)
    syndrome_to_pos = np.full(8, -1, dtype=np.int64)
    syndrome_to_pos[bits_to_int(_CHECK_7.T)] = np.arange(7)

    fixed = received.copy()
    status = np.full(len(received), DecodeStatus.CLEAN, dtype=np.int8)
    rows = np.arange(len(received))

    if n == 7:
        err = syndrome != 0
        pos = syndrome_to_pos[syndrome[err]]
        fixed[rows[err], pos] ^= 1
        status[err] = DecodeStatus.CORRECTED
    else:
        parity_bad = received.sum(axis=1) % 2 == 1
        # odd weight error with zero syndrome: the overall parity bit itself
        only_parity = parity_bad & (syndrome == 0)
        fixed[only_parity, 7] ^= 1
        status[only_parity] = DecodeStatus.CORRECTED
        single = parity_bad & (syndrome != 0)
        fixed[rows[single], syndrome_to_pos[syndrome[single]]] ^= 1
        status[single] = DecodeStatus.CORRECTED
        status[~parity_bad & (syndrome != 0)] = DecodeStatus.FAILURE

    return fixed[:, :K].copy(), status


def hamming_encode(data, cfg: CodeConfig) -> np.ndarray:
    """Systematic codeword(s) for 4-bit data word(s), shape ``(..., n)``."""
    _check_coded(cfg)
    data = np.asarray(data)
    if data.shape[-1:] != (K,):
        raise ValueError(f"data words must have 4 bits, got shape {data.shape}")
    return _codebook(cfg.n)[bits_to_int(data)]


def hamming_decode(word, cfg: CodeConfig) -> DecodeOutcome:
    """Decode received word(s) of n bits.

    Single errors are corrected. With n=8 any double error is flagged as
    ``FAILURE`` and the received data bits are returned unchanged; with n=7
    a double error silently decodes to another codeword.
    """
    _check_coded(cfg)
    word = np.asarray(word)
    if word.shape[-1:] != (cfg.n,):
        raise ValueError(f"expected {cfg.n}-bit words, got shape {word.shape}")
    data_table, status_table = _decode_table(cfg.n)
    idx = bits_to_int(word)
    status = status_table[idx]
    if status.ndim == 0:
        status = DecodeStatus(int(status))
    return DecodeOutcome(data=data_table[idx], status=status)


@lru_cache(maxsize=None)
def _diagonal_index(sf: int, n: int):
    i = np.arange(n)[:, None]
    j = np.arange(sf)[None, :]
    return (i + j) % sf, np.broadcast_to(i, (n, sf))


def interleave(block) -> np.ndarray:
    """Map an ``(SF, n)`` block of codewords onto ``n`` symbol labels of SF bits.

    Symbol ``i`` takes bit ``i`` from codewords ``i, i+1, ..., i+SF-1``
    (mod SF), so the bits of one symbol land in SF different codewords.
    Result has shape ``(..., n, SF)``.
    """
    block = np.asarray(block)
    if block.ndim < 2:
        raise ValueError("interleaver block must be a 2-D bit matrix")
    sf, n = block.shape[-2:]
    rows, cols = _diagonal_index(sf, n)
    return block[..., rows, cols]


def deinterleave(labels) -> np.ndarray:
    """Inverse of :func:`interleave`: ``(..., n, SF)`` -> ``(..., SF, n)``."""
    labels = np.asarray(labels)
    if labels.ndim < 2:
        raise ValueError("deinterleaver block must be a 2-D bit matrix")
    n, sf = labels.shape[-2:]
    rows, cols = _diagonal_index(sf, n)
    out = np.empty(labels.shape[:-2] + (sf, n), dtype=labels.dtype)
    out[..., rows, cols] = labels
    return out


def gray_encode(s):
    """Binary-reflected Gray code of integer(s)."""
    s = np.asarray(s, dtype=np.int64)
    return s ^ (s >> 1)


def gray_decode(g):
    g = np.asarray(g, dtype=np.int64)
    s = g.copy()
    shift = 1
    while shift < 64:
        s ^= s >> shift
        shift <<= 1
    return s


def gray_map(label) -> np.ndarray:
    """Symbol value(s) carrying the given SF-bit label(s)."""
    s = gray_decode(bits_to_int(label))
    return int(s) if s.ndim == 0 else s


def gray_demap(s, sf: int) -> np.ndarray:
    """SF-bit label(s) of symbol value(s) ``s``."""
    return int_to_bits(gray_encode(s), sf)
