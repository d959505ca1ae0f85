"""Command line entry point: ``sictomo sweep | state | validate``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys

from .experiment import SweepConfig, dump_matrix, eta_grid, parse_seeds, records_to_csv, run_named_state, run_sweep
from .linalg import InvalidStateError
from .noise import NoiseMode
from .reconstruction import ReconstructionOptions
from .validation import run_checks

MODES = [m.value for m in NoiseMode]


def _add_reconstruction_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=int, help="extra perturbed starts (default 3)")
    p.add_argument("--max-iterations", type=int, help="iteration cap per start (default 2000)")


def _options(args, base: ReconstructionOptions | None = None) -> ReconstructionOptions:
    base = base or ReconstructionOptions()
    changes = {}
    if args.restarts is not None:
        changes["restarts"] = args.restarts
    if args.max_iterations is not None:
        changes["max_iterations"] = args.max_iterations
    return dataclasses.replace(base, **changes)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sictomo", description="Three-qubit SIC-POVM tomography simulations.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="fidelity/purity sweep over Werner states")
    sweep.add_argument("--config", help="YAML/JSON file with SweepConfig fields; flags override it")
    sweep.add_argument("--eta-min", type=float)
    sweep.add_argument("--eta-max", type=float)
    sweep.add_argument("--eta-steps", type=int)
    sweep.add_argument("--ensemble", type=float, action="append", help="ensemble mean; repeatable")
    sweep.add_argument("--seeds", help="count n (seeds 0..n-1) or comma list")
    sweep.add_argument("--mode", choices=MODES)
    sweep.add_argument("--out", help="CSV path (default: stdout)")
    sweep.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_reconstruction_flags(sweep)

    state = sub.add_parser("state", help="reconstruct the GHZ or W state")
    state.add_argument("--state", choices=["ghz", "w"], required=True)
    state.add_argument("--ensemble", type=float, default=1000.0)
    state.add_argument("--seeds", default="1", help="count n (seeds 0..n-1) or comma list")
    state.add_argument("--mode", choices=MODES, default=NoiseMode.PAPER_LITERAL.value)
    state.add_argument("--dump-matrix", help="write the first seed's reconstruction as JSON")
    _add_reconstruction_flags(state)

    sub.add_parser("validate", help="run the invariant checks")
    return parser


def _sweep(args) -> int:
    cfg = SweepConfig.load(args.config) if args.config else SweepConfig()
    changes = {}
    if any(v is not None for v in (args.eta_min, args.eta_max, args.eta_steps)):
        lo = args.eta_min if args.eta_min is not None else 0.0
        hi = args.eta_max if args.eta_max is not None else 1.0
        steps = args.eta_steps if args.eta_steps is not None else 21
        changes["eta_grid"] = eta_grid(lo, hi, steps)
    if args.ensemble:
        changes["ensemble_means"] = tuple(args.ensemble)
    if args.seeds is not None:
        changes["seeds"] = parse_seeds(args.seeds)
    if args.mode is not None:
        changes["noise_mode"] = NoiseMode(args.mode)
    changes["options"] = _options(args, cfg.options)
    cfg = dataclasses.replace(cfg, **changes)

    text = records_to_csv(run_sweep(cfg, jobs=args.jobs))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _state(args) -> int:
    results, summary = run_named_state(args.state, args.ensemble, args.seeds, args.mode, _options(args))
    if args.dump_matrix:
        dump_matrix(results[0], args.dump_matrix)
    print(json.dumps(summary, indent=2))
    return 0


def _validate(args) -> int:
    checks = run_checks()
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
    return 0 if all(c.passed for c in checks) else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    handler = {"sweep": _sweep, "state": _state, "validate": _validate}[args.command]
    try:
        return handler(args)
    except (ValueError, InvalidStateError, OSError, TypeError) as exc:
        print(f"sictomo: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
