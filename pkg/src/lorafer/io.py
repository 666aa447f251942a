"""CSV curves and run manifests."""

from __future__ import annotations

import csv
import datetime as _dt
import json
import os
import re
from pathlib import Path

from .curves import CurvePoint, ErrorRateCurve, FrameCounts

ANALYTIC_COLUMNS = ["snr_db", "rate"]
MC_COLUMNS = [
    "snr_db", "frames", "frame_errors", "fer", "ci_low", "ci_high",
    "codewords", "codeword_errors", "bits", "bit_errors", "symbols", "symbol_errors",
]
_COUNT_FIELDS = ["frames", "frame_errors", "codewords", "codeword_errors",
                 "bits", "bit_errors", "symbols", "symbol_errors"]

_NAME_RE = re.compile(
    r"^(?P<estimator>[a-z0-9_]+?)_(?P<metric>fer|cwer|ber|ser)_sf(?P<sf>\d+)_(?P<code>cr4\d|uncoded)"
    r"_npl(?P<npl>\d+)_lam(?P<lam>-?[\d.]+)\.csv$"
)


def curve_filename(curve: ErrorRateCurve) -> str:
    code = "uncoded" if curve.code == "uncoded" else "cr4" + curve.code.split("/")[1]
    return (f"{curve.estimator}_{curve.metric}_sf{curve.sf}_{code}"
            f"_npl{curve.n_payload_symbols}_lam{curve.lam:.3f}.csv")


def parse_filename(path) -> dict:
    m = _NAME_RE.match(Path(path).name)
    if not m:
        return {}
    code = m["code"]
    return {
        "estimator": m["estimator"],
        "metric": m["metric"],
        "sf": int(m["sf"]),
        "code": "uncoded" if code == "uncoded" else f"4/{code[3:]}",
        "n_payload_symbols": int(m["npl"]),
        "lam": float(m["lam"]),
    }


def _fmt(x: float) -> str:
    return repr(float(x))


def _mc_row(pt: CurvePoint) -> list:
    # ci_low/ci_high belong to the curve's own metric; fer is always frame-level
    c = pt.counts
    fer = c.frame_errors / c.frames if c.frames else float("nan")
    return [_fmt(pt.snr_db), c.frames, c.frame_errors, _fmt(fer), _fmt(pt.ci_low),
            _fmt(pt.ci_high), c.codewords, c.codeword_errors, c.bits, c.bit_errors,
            c.symbols, c.symbol_errors]


class CurveWriter:
    """Writes one curve to CSV, flushing after every point."""

    def __init__(self, path, curve: ErrorRateCurve):
        self.path = Path(path)
        self.mc = curve.estimator == "mc"
        self._fh = open(self.path, "w", newline="", encoding="utf-8")
        self._w = csv.writer(self._fh, lineterminator="\r\n")
        self._w.writerow(MC_COLUMNS if self.mc else ANALYTIC_COLUMNS)
        self._fh.flush()

    def write(self, pt: CurvePoint):
        self._w.writerow(_mc_row(pt) if self.mc else [_fmt(pt.snr_db), _fmt(pt.rate)])
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_curve(path, curve: ErrorRateCurve) -> Path:
    with CurveWriter(path, curve) as w:
        for pt in curve.points:
            w.write(pt)
    return Path(path)


def read_curve(path, **meta) -> ErrorRateCurve:
    """Load a curve CSV; metadata comes from the file name unless given."""
    info = {"estimator": "mc", "metric": "fer", "sf": 7, "code": "4/8",
            "n_payload_symbols": 32, "lam": 0.0}
    info.update(parse_filename(path))
    info.update(meta)
    curve = ErrorRateCurve(info["estimator"], info["sf"], info["metric"], info["lam"],
                           info["code"], info["n_payload_symbols"])
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        if header == MC_COLUMNS:
            for row in reader:
                counts = FrameCounts(**{k: int(row[k]) for k in _COUNT_FIELDS})
                curve.add_counts(float(row["snr_db"]), counts)
        elif header[:2] == ANALYTIC_COLUMNS:
            for row in reader:
                curve.points.append(CurvePoint(float(row["snr_db"]), float(row["rate"])))
        else:
            raise ValueError(f"{path}: unrecognised CSV header {header}")
    return curve


def write_manifest(out_dir, *, command: str, config: dict, config_path, files: list,
                   version: str, seed, workers: int | None = None, status: str = "complete") -> Path:
    manifest = {
        "tool": "lorafer",
        "version": version,
        "command": command,
        "config_path": str(config_path) if config_path else None,
        "seed": seed,
        "workers": workers,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "status": status,
        "config": config,
        "files": files,
    }
    path = Path(out_dir) / f"manifest_{command}.json"
    tmp = path.with_suffix(".json.tmp")
    tmp.write_text(json.dumps(manifest, indent=2, sort_keys=False) + "\n", encoding="utf-8")
    tmp.replace(path)
    return path
