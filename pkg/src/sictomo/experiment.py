"""Seeded eta sweeps and named-state reconstructions, with CSV/JSON output."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .metrics import fidelity, purity
from .noise import NoiseMode, simulate_counts
from .reconstruction import ReconstructionOptions, ReconstructionResult, reconstruct
from .states import named_state, werner, werner_purity

log = logging.getLogger(__name__)

CSV_FIELDS = ("eta", "ensemble_mean", "seed", "fidelity", "purity_estimate", "purity_true", "chi2", "converged")
DEFAULT_ENSEMBLES = (10.0, 100.0, 1000.0)


def eta_grid(eta_min: float = 0.0, eta_max: float = 1.0, steps: int = 21) -> tuple[float, ...]:
    if steps < 1:
        raise ValueError("eta grid needs at least one point")
    if steps == 1:
        return (float(eta_min),)
    # rounding keeps 0.15 from printing as 0.15000000000000002
    return tuple(round(float(x), 12) for x in np.linspace(eta_min, eta_max, steps))


def parse_seeds(spec) -> tuple[int, ...]:
    """A comma list (``"3,7,11"``) is taken literally; a bare integer ``n`` means seeds 0..n-1."""
    if isinstance(spec, (list, tuple)):
        return tuple(int(s) for s in spec)
    if isinstance(spec, int):
        return tuple(range(spec))
    text = str(spec).strip()
    if "," in text:
        return tuple(int(s) for s in text.split(",") if s.strip())
    return tuple(range(int(text)))


@dataclass(frozen=True)
class SweepConfig:
    eta_grid: tuple = field(default_factory=eta_grid)
    ensemble_means: tuple = DEFAULT_ENSEMBLES
    seeds: tuple = (0,)
    noise_mode: NoiseMode = NoiseMode.PAPER_LITERAL
    options: ReconstructionOptions = field(default_factory=ReconstructionOptions)

    def __post_init__(self):
        grid = tuple(float(e) for e in self.eta_grid)
        if not grid:
            raise ValueError("eta_grid must not be empty")
        if any(not 0.0 <= e <= 1.0 for e in grid):
            raise ValueError("every eta must lie in [0, 1]")
        if list(grid) != sorted(grid):
            raise ValueError("eta_grid must be sorted")
        means = tuple(float(n) for n in self.ensemble_means)
        if not means or any(not n > 0 for n in means):
            raise ValueError("ensemble_means must be a non-empty list of positive numbers")
        seeds = parse_seeds(self.seeds)
        if not seeds:
            raise ValueError("seeds must not be empty")
        if any(not 0 <= s < 2**64 for s in seeds):
            raise ValueError("seeds must be 64-bit unsigned integers")
        opts = self.options
        if isinstance(opts, dict):
            opts = ReconstructionOptions.from_dict(opts)
        object.__setattr__(self, "eta_grid", grid)
        object.__setattr__(self, "ensemble_means", means)
        object.__setattr__(self, "seeds", seeds)
        object.__setattr__(self, "noise_mode", NoiseMode(self.noise_mode))
        object.__setattr__(self, "options", opts)

    @classmethod
    def from_dict(cls, d: dict) -> SweepConfig:
        known = {"eta_grid", "ensemble_means", "seeds", "noise_mode", "options"}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> SweepConfig:
        """Read a YAML (or JSON, which YAML accepts) config file."""
        with open(path) as fh:
            data = yaml.safe_load(fh) or {}
        if not isinstance(data, dict):
            raise ValueError(f"{path}: expected a mapping at top level")
        return cls.from_dict(data)


@dataclass(frozen=True)
class SweepRecord:
    eta: float
    ensemble_mean: float
    seed: int
    fidelity: float
    purity_estimate: float
    purity_true: float
    chi2: float
    converged: bool


def _sweep_item(args) -> SweepRecord:
    eta, ensemble_mean, seed, mode, options = args
    rho = werner(eta)
    counts = simulate_counts(rho, ensemble_mean, seed, mode)
    try:
        result = reconstruct(counts, options)
    except (FloatingPointError, ValueError) as exc:
        log.warning("reconstruction failed at eta=%g N=%g seed=%d: %s", eta, ensemble_mean, seed, exc)
        return SweepRecord(eta, ensemble_mean, seed, math.nan, math.nan, werner_purity(eta), math.nan, False)
    return SweepRecord(
        eta=eta,
        ensemble_mean=ensemble_mean,
        seed=seed,
        fidelity=fidelity(result.estimate, rho),
        purity_estimate=purity(result.estimate),
        purity_true=werner_purity(eta),
        chi2=result.chi2,
        converged=result.converged,
    )


def run_sweep(config: SweepConfig, jobs: int = 1) -> list[SweepRecord]:
    """One record per (ensemble mean, eta, seed), in that nesting order."""
    items = [
        (eta, n, seed, config.noise_mode, config.options)
        for n in config.ensemble_means
        for eta in config.eta_grid
        for seed in config.seeds
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_item, items))
    return [_sweep_item(item) for item in items]


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in records:
        writer.writerow([_fmt(getattr(r, name)) for name in CSV_FIELDS])
    return buf.getvalue()


def write_csv(records, path) -> None:
    Path(path).write_text(records_to_csv(records))


def read_csv(path) -> list[SweepRecord]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [
        SweepRecord(
            eta=float(row["eta"]),
            ensemble_mean=float(row["ensemble_mean"]),
            seed=int(row["seed"]),
            fidelity=float(row["fidelity"]),
            purity_estimate=float(row["purity_estimate"]),
            purity_true=float(row["purity_true"]),
            chi2=float(row["chi2"]),
            converged=row["converged"] == "true",
        )
        for row in rows
    ]


def summarize(records) -> dict:
    """Mean fidelity and purity per (ensemble mean, eta) over seeds."""
    groups: dict = {}
    for r in records:
        groups.setdefault((r.ensemble_mean, r.eta), []).append(r)
    out = {}
    for key, rows in groups.items():
        out[key] = {
            "fidelity": float(np.mean([r.fidelity for r in rows])),
            "purity_estimate": float(np.mean([r.purity_estimate for r in rows])),
            "purity_true": rows[0].purity_true,
            "n": len(rows),
        }
    return out


def run_named_state(
    state: str,
    ensemble_mean: float,
    seeds,
    mode=NoiseMode.PAPER_LITERAL,
    options: ReconstructionOptions | None = None,
) -> tuple[list[ReconstructionResult], dict]:
    """Reconstruct the GHZ or W state once per seed and summarize fidelities."""
    rho = named_state(state)
    seeds = parse_seeds(seeds)
    if not seeds:
        raise ValueError("seeds must not be empty")
    mode = NoiseMode(mode)
    results = [reconstruct(simulate_counts(rho, ensemble_mean, s, mode), options) for s in seeds]
    fids = [fidelity(r.estimate, rho) for r in results]
    summary = {
        "state": state.lower(),
        "ensemble_mean": float(ensemble_mean),
        "mode": mode.value,
        "seeds": list(seeds),
        "fidelities": fids,
        "mean_fidelity": float(np.mean(fids)),
        "min_fidelity": float(np.min(fids)),
        "max_fidelity": float(np.max(fids)),
        "purities": [purity(r.estimate) for r in results],
    }
    return results, summary


def dump_matrix(result: ReconstructionResult, path) -> None:
    """Write a reconstruction (real and imaginary parts) as JSON."""
    Path(path).write_text(json.dumps(result.to_dict(), indent=2) + "\n")
