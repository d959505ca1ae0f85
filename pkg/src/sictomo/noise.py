"""Simulated coincidence counts under Poisson ensemble-size noise.

Every outcome index draws from its own Philox stream keyed by
``SeedSequence(seed, spawn_key=(index,))``, so the counts do not depend on
the order in which outcomes are evaluated.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .linalg import validate_density
from .measurement import outcome_probabilities, three_qubit_povm

N_OUTCOMES = 64
_SMALL_MEAN = 30.0


class NoiseMode(str, enum.Enum):
    PAPER_LITERAL = "paper-literal"
    POISSON_COUNTS = "poisson-counts"
    NOISELESS = "noiseless"


def outcome_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for outcome ``index`` under master ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(ss))


def poisson_sample(lam: float, rng: np.random.Generator) -> int:
    """One Poisson(lam) variate from the uniforms of ``rng``.

    Multiplication of uniforms below a mean of 30; above it, Hormann's
    transformed rejection with squeeze (PTRS), which is exact and avoids
    underflow of exp(-lam).
    """
    lam = float(lam)
    if not lam > 0.0 or not math.isfinite(lam):
        raise ValueError(f"Poisson mean must be positive and finite, got {lam}")
    if lam < _SMALL_MEAN:
        limit = math.exp(-lam)
        k = 0
        prod = rng.random()
        while prod > limit:
            k += 1
            prod *= rng.random()
        return k

    slam = math.sqrt(lam)
    loglam = math.log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    while True:
        u = rng.random() - 0.5
        v = rng.random()
        us = 0.5 - abs(u)
        k = math.floor((2.0 * a / us + b) * u + lam + 0.43)
        if us >= 0.07 and v <= v_r:
            return k
        if k < 0 or (us < 0.013 and v > us):
            continue
        lhs = math.log(v) + math.log(inv_alpha) - math.log(a / (us * us) + b)
        if lhs <= -lam + k * loglam - math.lgamma(k + 1):
            return k


@dataclass(frozen=True, eq=False)
class CountRecord:
    counts: np.ndarray
    ensemble_mean: float
    seed: int
    mode: NoiseMode = NoiseMode.PAPER_LITERAL

    def __post_init__(self):
        counts = np.array(self.counts, dtype=float)
        if counts.shape != (N_OUTCOMES,):
            raise ValueError(f"expected {N_OUTCOMES} counts, got shape {counts.shape}")
        if not np.all(np.isfinite(counts)) or np.any(counts < 0):
            raise ValueError("counts must be finite and non-negative")
        if not self.ensemble_mean > 0:
            raise ValueError(f"ensemble mean must be positive, got {self.ensemble_mean}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "ensemble_mean", float(self.ensemble_mean))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "mode", NoiseMode(self.mode))

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "ensemble_mean": self.ensemble_mean,
            "seed": self.seed,
            "counts": [float(c) for c in self.counts],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> CountRecord:
        return cls(
            counts=d["counts"],
            ensemble_mean=d["ensemble_mean"],
            seed=d["seed"],
            mode=NoiseMode(d["mode"]),
        )

    @classmethod
    def from_json(cls, text: str) -> CountRecord:
        return cls.from_dict(json.loads(text))


def simulate_counts(rho, ensemble_mean: float, seed: int, mode=NoiseMode.PAPER_LITERAL) -> CountRecord:
    """Noisy counts for the 64 three-qubit SIC outcomes.

    ``paper-literal``: count = Nk * p with Nk ~ Poisson(ensemble_mean) per
    outcome (non-integer counts). ``poisson-counts``: count ~
    Poisson(ensemble_mean * p). ``noiseless``: count = ensemble_mean * p.
    """
    mode = NoiseMode(mode)
    rho = validate_density(rho)
    if rho.shape != (8, 8):
        raise ValueError(f"expected a three-qubit (8x8) state, got shape {rho.shape}")
    if not ensemble_mean > 0:
        raise ValueError(f"ensemble mean must be positive, got {ensemble_mean}")
    probs = outcome_probabilities(rho, three_qubit_povm())

    if mode is NoiseMode.NOISELESS:
        counts = ensemble_mean * probs
    elif mode is NoiseMode.PAPER_LITERAL:
        sizes = np.array([poisson_sample(ensemble_mean, outcome_rng(seed, k)) for k in range(N_OUTCOMES)])
        counts = sizes * probs
    else:
        counts = np.array([
            poisson_sample(ensemble_mean * p, outcome_rng(seed, k)) if p > 0 else 0
            for k, p in enumerate(probs)
        ], dtype=float)
    return CountRecord(counts, ensemble_mean, seed, mode)
