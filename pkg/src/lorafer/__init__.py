"""Coded LoRa PHY link laboratory: chirp modem, coding chain, channel,
closed-form error-rate approximations and Monte Carlo validation."""

from .channel import Channel, ChannelConfig, add_awgn, apply_cfo
from .coding import CodeConfig, DecodeOutcome, DecodeStatus
from .modulation import LoRaParams, demodulate, modulate, reference_chirp

__version__ = "0.1.0"

__all__ = [
    "Channel", "ChannelConfig", "CodeConfig", "DecodeOutcome", "DecodeStatus",
    "LoRaParams", "add_awgn", "apply_cfo", "demodulate", "modulate", "reference_chirp",
]
