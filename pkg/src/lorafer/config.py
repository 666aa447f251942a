"""Run configuration: YAML files, named presets and SNR grid resolution.

A config is a flat mapping::

    preset: fig-cfo-sf7        # optional; the keys below override it
    sf: [7]
    code_rate: 8               # 7, 8 or "uncoded"
    n_payload_symbols: 32
    lams: [0.0, 0.2]           # fractional CFO values; empty means AWGN only
    estimators: [cfo_analytic]
    snr_db: {start: -11, stop: -2, step: 0.5}
    min_errors: 100
    max_frames: 100000
    seed: 1

``snr_db`` is a list, a ``{start, stop, step}`` range (stop inclusive), a
``{auto: {high, low, step}}`` request for a grid spanning the analytic
waterfall from rate ``high`` down to ``low``, or a mapping from SF to any of
these. Resolution always produces explicit per-SF lists, which is what
manifests record.
"""

from __future__ import annotations

import copy
import math
from pathlib import Path

import numpy as np
import yaml

from .analytic import FrameConfig, fer_awgn_approx1, fer_awgn_approx2, fer_cfo
from .coding import CodeConfig
from .compare import solve_required_snr
from .modulation import LoRaParams


class ConfigError(ValueError):
    pass


ESTIMATORS = {
    # name: (metric, depends on lambda)
    "approx1": ("fer", False),
    "approx2": ("fer", False),
    "cfo_analytic": ("fer", True),
    "ser_awgn": ("ser", False),
    "ber_awgn": ("ber", False),
    "cwer_awgn": ("cwer", False),
    "ber_cfo": ("ber", True),
}

DEFAULTS = {
    "sf": [7],
    "code_rate": 8,
    "n_payload_symbols": 32,
    "lams": [],
    "estimators": ["approx1", "approx2"],
    "snr_db": {"auto": {"high": 0.5, "low": 1e-3, "step": 0.25}},
    "min_errors": 100,
    "max_frames": 100_000,
    "seed": 0,
}

PRESETS = {
    "smoke": {
        "sf": [7],
        "snr_db": [-10.0, -9.0, -8.0],
        "max_frames": 10_000,
        "estimators": ["approx1", "approx2"],
    },
    "fig4-awgn": {
        "sf": [7, 8, 9, 10, 11, 12],
        "estimators": ["approx1", "approx2"],
    },
    "fig-cfo-sf7": {
        "sf": [7],
        "lams": [0.0, 0.2, 0.3, 0.4],
        "estimators": ["cfo_analytic"],
        "snr_db": {"start": -11.0, "stop": -1.0, "step": 0.5},
    },
    "fig-cfo-allsf": {
        "sf": [7, 8, 9, 10, 11, 12],
        "lams": [0.0, 0.2],
        "estimators": ["cfo_analytic"],
    },
    "uncoded-sf7": {
        "sf": [7],
        "code_rate": "uncoded",
        "lams": [0.0, 0.4],
        "estimators": ["ser_awgn", "ber_awgn", "ber_cfo"],
        "snr_db": {"start": -16.0, "stop": 0.0, "step": 2.0},
        "max_frames": 3125,
    },
}


def load_config(path=None, preset: str | None = None) -> dict:
    """Merge defaults, an optional preset and an optional YAML/JSON file.

    A run manifest is also accepted; its recorded configuration is used as is.
    """
    raw = {}
    if path is not None:
        try:
            raw = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: config must be a mapping")
        if raw.get("tool") == "lorafer" and "config" in raw:
            raw = raw["config"]
    preset = raw.pop("preset", None) if preset is None else preset
    cfg = copy.deepcopy(DEFAULTS)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
        cfg.update(copy.deepcopy(PRESETS[preset]))
    unknown = set(raw) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg.update(raw)
    return cfg


def code_config(cfg: dict) -> CodeConfig:
    rate = cfg["code_rate"]
    try:
        return CodeConfig.uncoded() if rate == "uncoded" else CodeConfig(n=int(rate))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad code_rate {rate!r}: {exc}") from exc


def _range(spec: dict) -> list[float]:
    try:
        start, stop, step = float(spec["start"]), float(spec["stop"]), float(spec["step"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"SNR range needs numeric start/stop/step: {spec}") from exc
    if step <= 0:
        raise ConfigError("SNR step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 10) for k in range(max(count, 0))]


def auto_grid(sf: int, code: CodeConfig, n_payload_symbols: int, lams, high=0.5, low=1e-3,
              step=0.25) -> list[float]:
    """SNR grid covering the analytic FER waterfall from ``high`` down to ``low``.

    The upper (pessimistic) analytic curve sets the start and the lower one
    the end, so the Monte Carlo curve sits inside the span.
    """
    if not code.coded:
        raise ConfigError("automatic grids need a coded configuration")
    p = LoRaParams(sf)
    fc = FrameConfig(n_payload_symbols)
    starts, stops = [], []
    for lam in (list(lams) or [0.0]):
        if lam == 0:
            upper = lambda x: fer_awgn_approx1(x, p, code, fc)
            lower = lambda x: fer_awgn_approx2(x, p, code, fc)
        else:
            upper = lower = lambda x, lam=lam: fer_cfo(x, lam, p, code, fc)
        starts.append(solve_required_snr(upper, high))
        stops.append(solve_required_snr(lower, low))
    start = math.floor(min(starts) / step) * step
    stop = math.ceil(max(stops) / step) * step
    return _range({"start": start, "stop": stop, "step": step})


def _grid_for(spec, sf: int, cfg: dict, code: CodeConfig) -> list[float]:
    if isinstance(spec, dict) and "auto" in spec:
        opts = {"high": 0.5, "low": 1e-3, "step": 0.25, **(spec["auto"] or {})}
        return auto_grid(sf, code, cfg["n_payload_symbols"], cfg["lams"], **opts)
    if isinstance(spec, dict):
        return _range(spec)
    if isinstance(spec, (list, tuple)):
        try:
            return [float(x) for x in spec]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"SNR grid must be numeric: {spec}") from exc
    raise ConfigError(f"cannot interpret SNR grid {spec!r}")


def resolve(cfg: dict) -> dict:
    """Validate a merged config and expand every SNR grid to explicit lists."""
    out = copy.deepcopy(cfg)
    try:
        out["sf"] = [int(LoRaParams(int(s)).sf) for s in out["sf"]]
        out["lams"] = [float(x) for x in out["lams"]]
        out["n_payload_symbols"] = int(out["n_payload_symbols"])
        out["min_errors"] = int(out["min_errors"])
        out["max_frames"] = int(out["max_frames"])
        out["seed"] = int(out["seed"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if not out["sf"]:
        raise ConfigError("sf list is empty")
    if any(abs(x) > 0.5 for x in out["lams"]):
        raise ConfigError("fractional CFO values must satisfy |lam| <= 0.5")
    bad = [e for e in out["estimators"] if e not in ESTIMATORS]
    if bad:
        raise ConfigError(f"unknown estimators {bad}; choose from {', '.join(ESTIMATORS)}")
    code = code_config(out)
    try:
        FrameConfig(out["n_payload_symbols"]).check(code)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    spec = out["snr_db"]
    per_sf = {}
    for sf in out["sf"]:
        if isinstance(spec, dict) and not {"auto", "start"} & set(spec):
            entry = spec.get(sf, spec.get(str(sf)))
            if entry is None:
                raise ConfigError(f"no SNR grid given for SF{sf}")
        else:
            entry = spec
        grid = _grid_for(entry, sf, out, code)
        if not grid:
            raise ConfigError(f"SNR grid for SF{sf} is empty")
        per_sf[str(sf)] = grid
    out["snr_db"] = per_sf
    return out


def lam_grid(cfg: dict) -> list[float]:
    return cfg["lams"] or [0.0]


def grid(cfg: dict, sf: int) -> np.ndarray:
    return np.asarray(cfg["snr_db"][str(sf)], dtype=float)
