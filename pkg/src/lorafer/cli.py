"""Command-line front end: ``lorafer analytic | simulate | compare | presets``.

Exit codes: 0 success, 1 runtime or numerical failure (including a failed
comparison threshold), 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .analytic import QuadratureError
from .compare import CurveRangeError, horizontal_gaps, max_vertical_gap
from .config import ESTIMATORS, PRESETS, ConfigError, code_config, grid, lam_grid, load_config, resolve
from .curves import analytic_curve
from .io import CurveWriter, curve_filename, read_curve, write_curve, write_manifest
from .montecarlo import SweepSpec, resolve_workers, run_sweep, uncoded_sweep

log = logging.getLogger("lorafer")

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load(args) -> dict:
    if args.config is None and args.preset is None:
        raise UsageError("give --config FILE or --preset NAME")
    cfg = load_config(args.config, args.preset)
    if getattr(args, "seed", None) is not None:
        cfg["seed"] = args.seed
    return resolve(cfg)


def _file_entry(curve, path: Path) -> dict:
    return {"path": path.name, "estimator": curve.estimator, "metric": curve.metric,
            "sf": curve.sf, "lam": curve.lam, "code": curve.code,
            "n_payload_symbols": curve.n_payload_symbols}


def cmd_analytic(args) -> int:
    cfg = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    code = code_config(cfg)
    files = []
    for sf in cfg["sf"]:
        for est in cfg["estimators"]:
            _, per_lam = ESTIMATORS[est]
            for lam in (lam_grid(cfg) if per_lam else [0.0]):
                curve = analytic_curve(est, sf, grid(cfg, sf), code, cfg["n_payload_symbols"], lam)
                path = write_curve(out / curve_filename(curve), curve)
                files.append(_file_entry(curve, path))
                log.info("wrote %s", path)
    write_manifest(out, command="analytic", config=cfg, config_path=args.config, files=files,
                   version=__version__, seed=cfg["seed"])
    print(f"{len(files)} curves written to {out}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    workers = resolve_workers(args.workers)
    code = code_config(cfg)
    files = []
    writers = {}

    def manifest(status):
        write_manifest(out, command="simulate", config=cfg, config_path=args.config, files=files,
                       version=__version__, seed=cfg["seed"], workers=workers, status=status)

    def on_point(curve, pt):
        key = id(curve)
        if key not in writers:
            path = out / curve_filename(curve)
            writers[key] = CurveWriter(path, curve)
            files.append(_file_entry(curve, path))
            manifest("running")
        writers[key].write(pt)

    manifest("running")
    try:
        for sf in cfg["sf"]:
            spec = SweepSpec(snr_db=list(grid(cfg, sf)), sf=[sf], code=code, lams=cfg["lams"],
                             n_payload_symbols=cfg["n_payload_symbols"],
                             min_errors=cfg["min_errors"], max_frames=cfg["max_frames"],
                             seed=cfg["seed"])
            sweep = run_sweep if code.coded else uncoded_sweep
            sweep(spec, workers=workers, on_point=on_point)
    except KeyboardInterrupt:
        manifest("interrupted")
        raise
    finally:
        for w in writers.values():
            w.close()
    manifest("complete")
    print(f"{len(files)} Monte Carlo curves written to {out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    mc = read_curve(args.mc_csv)
    ana = read_curve(args.analytic_csv)
    ref = (mc.snr_db, mc.rate)
    cand = (ana.snr_db, ana.rate)
    gaps = horizontal_gaps(ref, cand, args.levels)
    vertical = max_vertical_gap(ref, cand)
    ok = True
    print(f"reference: {args.mc_csv}")
    print(f"candidate: {args.analytic_csv}")
    for g in gaps:
        passed = args.threshold is None or abs(g.gap_db) <= args.threshold
        ok &= passed
        verdict = "" if args.threshold is None else (" PASS" if passed else " FAIL")
        print(f"level {g.level:.3g}: reference {g.snr_reference:.3f} dB, "
              f"candidate {g.snr_candidate:.3f} dB, gap {g.gap_db:+.3f} dB{verdict}")
    v_ok = args.max_vertical is None or vertical <= args.max_vertical
    ok &= v_ok
    verdict = "" if args.max_vertical is None else (" PASS" if v_ok else " FAIL")
    print(f"max vertical gap: {vertical:.3f} decades{verdict}")
    return EXIT_OK if ok else EXIT_RUNTIME


def cmd_presets(args) -> int:
    for name, preset in PRESETS.items():
        print(f"{name}: {preset}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lorafer", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)

    def run_opts(p):
        p.add_argument("--config", type=Path, help="YAML config file or a run manifest")
        p.add_argument("--preset", choices=sorted(PRESETS), help="named preset")
        p.add_argument("--out", type=Path, default=Path("results"), help="output directory")
        p.add_argument("--seed", type=int, help="override the configured seed")

    p = sub.add_parser("analytic", help="evaluate closed-form error-rate curves")
    run_opts(p)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", help="run Monte Carlo sweeps")
    run_opts(p)
    p.add_argument("--workers", type=int,
                   help="worker processes (default: $LORAFER_WORKERS or 1)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="distance between a Monte Carlo and an analytic curve")
    p.add_argument("mc_csv", type=Path)
    p.add_argument("analytic_csv", type=Path)
    p.add_argument("--levels", type=float, nargs="+", default=[1e-2],
                   help="rate levels for the horizontal gap")
    p.add_argument("--threshold", type=float, help="max allowed |gap| in dB")
    p.add_argument("--max-vertical", type=float, help="max allowed vertical gap in decades")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("presets", help="list named presets")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"lorafer: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, CurveRangeError, OSError, ValueError) as exc:
        print(f"lorafer: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
