"""Chi-squared state reconstruction over the 64 Cholesky parameters."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DIM,
    N_PARAMS,
    check_params,
    density_from_params,
    params_to_triangular,
    triangular_to_params,
    validate_density,
)
from .measurement import design_matrix, three_qubit_povm
from .noise import CountRecord

log = logging.getLogger(__name__)

MAX_RESTARTS = 32
RESTART_SCALE = 0.1


@dataclass(frozen=True)
class ReconstructionOptions:
    max_iterations: int = 2000
    gradient_tolerance: float = 1e-6
    objective_tolerance: float = 1e-10
    restarts: int = 3
    denominator_floor: float = 1e-9  # multiplied by the ensemble mean

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if not self.gradient_tolerance > 0 or not self.objective_tolerance > 0:
            raise ValueError("tolerances must be positive")
        if not 0 <= self.restarts <= MAX_RESTARTS:
            raise ValueError(f"restarts must lie in [0, {MAX_RESTARTS}]")
        if not self.denominator_floor > 0:
            raise ValueError("denominator_floor must be positive")

    @classmethod
    def from_dict(cls, d: dict | None) -> ReconstructionOptions:
        return cls(**(d or {}))


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    estimate: np.ndarray
    params: np.ndarray
    chi2: float
    iterations: int
    converged: bool
    restart_index: int

    def to_dict(self) -> dict:
        return {
            "chi2": self.chi2,
            "converged": self.converged,
            "iterations": self.iterations,
            "restart_index": self.restart_index,
            "params": [float(x) for x in self.params],
            "estimate": {
                "re": np.real(self.estimate).tolist(),
                "im": np.imag(self.estimate).tolist(),
            },
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> ReconstructionResult:
        est = np.asarray(d["estimate"]["re"]) + 1j * np.asarray(d["estimate"]["im"])
        return cls(
            estimate=validate_density(est),
            params=check_params(d["params"]),
            chi2=float(d["chi2"]),
            iterations=int(d["iterations"]),
            converged=bool(d["converged"]),
            restart_index=int(d.get("restart_index", 0)),
        )


def identity_params() -> np.ndarray:
    """Parameters of the maximally mixed state (unit diagonal of T)."""
    p = np.zeros(N_PARAMS)
    p[:DIM] = 1.0
    return p


def expected_counts(params, ensemble_mean: float) -> np.ndarray:
    if not ensemble_mean > 0:
        raise ValueError(f"ensemble mean must be positive, got {ensemble_mean}")
    sigma = density_from_params(params)
    return ensemble_mean * np.real(design_matrix(three_qubit_povm()) @ sigma.reshape(-1))


class ChiSquared:
    """Objective sum_k (n_k - m_k)^2 / max(m_k, floor) and its gradient in t.

    With sigma = S / tau, S = T^H T and tau = Tr S = |t|^2, the gradient
    with respect to the packed real and imaginary parts of T is
    ``2 pack(T G) / tau - 2 Tr(G S) t / tau^2`` where
    G = sum_k (d chi2 / d m_k) N M_k.
    """

    def __init__(self, observed: CountRecord, denominator_floor: float = 1e-9):
        self.n = np.asarray(observed.counts, dtype=float)
        self.N = observed.ensemble_mean
        self.floor = denominator_floor * self.N
        self.povm = three_qubit_povm()
        self.A = design_matrix(self.povm)

    def _expected(self, sigma: np.ndarray) -> np.ndarray:
        return self.N * np.real(self.A @ sigma.reshape(-1))

    def value(self, params) -> float:
        m = self._expected(density_from_params(params))
        return float(np.sum((self.n - m) ** 2 / np.maximum(m, self.floor)))

    def value_and_grad(self, params) -> tuple[float, np.ndarray]:
        t = np.asarray(params, dtype=float)
        T = params_to_triangular(t)
        S = T.conj().T @ T
        tau = float(np.real(np.trace(S)))
        if tau <= 0.0:
            raise ValueError("parameter vector is all zero; state is undefined")
        m = self._expected(S / tau)
        resid = self.n - m
        above = m > self.floor
        denom = np.where(above, m, self.floor)
        f = float(np.sum(resid**2 / denom))
        dm = np.where(above, 1.0 - (self.n / denom) ** 2, -2.0 * resid / self.floor)
        G = np.tensordot(self.N * dm, self.povm.operators, axes=1)
        grad_T = triangular_to_params(np.tril(T @ G))
        g = 2.0 * grad_T / tau - 2.0 * float(np.real(np.trace(G @ S))) * t / tau**2
        return f, g


def chi_squared(params, observed: CountRecord, denominator_floor: float = 1e-9) -> float:
    return ChiSquared(observed, denominator_floor).value(check_params(params))


@dataclass
class _Run:
    params: np.ndarray
    chi2: float
    iterations: int
    converged: bool


def _bfgs(objective: ChiSquared, x0: np.ndarray, opts: ReconstructionOptions) -> _Run:
    """BFGS with Armijo backtracking, projecting iterates onto |t| = 1.

    The objective is invariant under t -> c t, so its gradient is orthogonal
    to t and the projection only removes the flat radial direction.
    """
    x = x0 / np.linalg.norm(x0)
    f, g = objective.value_and_grad(x)
    if not np.isfinite(f):
        return _Run(x, f, 0, False)
    H = np.eye(N_PARAMS)
    scaled = False
    c1 = 1e-4

    for it in range(1, opts.max_iterations + 1):
        if np.linalg.norm(g) <= opts.gradient_tolerance:
            return _Run(x, f, it - 1, True)
        d = -H @ g
        slope = float(g @ d)
        if slope >= 0.0:
            H = np.eye(N_PARAMS)
            d = -g
            slope = float(g @ d)
        # keep trial steps on the scale of the unit sphere
        alpha = min(1.0, 0.5 / max(np.linalg.norm(d), 1e-300))
        accepted = False
        for _ in range(60):
            trial = x + alpha * d
            trial /= np.linalg.norm(trial)
            f_new, g_new = objective.value_and_grad(trial)
            if np.isfinite(f_new) and f_new <= f + c1 * alpha * slope:
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            if not np.allclose(H, np.eye(N_PARAMS)):
                H = np.eye(N_PARAMS)
                scaled = False
                continue
            # no descent possible along -g at machine precision
            return _Run(x, f, it, np.linalg.norm(g) <= opts.gradient_tolerance or f <= opts.objective_tolerance)

        s = trial - x
        y = g_new - g
        decrease = f - f_new
        x, f, g = trial, f_new, g_new

        sy = float(s @ y)
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            if not scaled:
                H = np.eye(N_PARAMS) * (sy / float(y @ y))
                scaled = True
            rho = 1.0 / sy
            Hy = H @ y
            H = H - rho * (np.outer(s, Hy) + np.outer(Hy, s)) + (rho * rho * float(y @ Hy) + rho) * np.outer(s, s)

        if decrease <= opts.objective_tolerance * max(1.0, abs(f)):
            return _Run(x, f, it, True)

    return _Run(x, f, opts.max_iterations, np.linalg.norm(g) <= opts.gradient_tolerance)


def restart_starts(seed: int, restarts: int) -> list[np.ndarray]:
    """Start 0 is the maximally mixed state; the rest add N(0, 0.1^2) noise to it."""
    base = identity_params() / np.sqrt(DIM)
    starts = [base]
    for r in range(1, restarts + 1):
        rng = np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(2**32 + r,)))
        starts.append(base + RESTART_SCALE * rng.standard_normal(N_PARAMS))
    return starts


def reconstruct(observed: CountRecord, options: ReconstructionOptions | None = None) -> ReconstructionResult:
    """Minimize chi-squared from several starts and keep the lowest.

    Ties go to the lowest restart index. The returned estimate is always a
    validated density matrix, whether or not the optimizer converged.
    """
    opts = options or ReconstructionOptions()
    objective = ChiSquared(observed, opts.denominator_floor)
    best: _Run | None = None
    best_index = -1
    for index, x0 in enumerate(restart_starts(observed.seed, opts.restarts)):
        run = _bfgs(objective, x0, opts)
        log.debug("start %d: chi2=%.6g iterations=%d converged=%s", index, run.chi2, run.iterations, run.converged)
        if not np.isfinite(run.chi2):
            log.warning("start %d produced a non-finite objective; skipped", index)
            continue
        if best is None or run.chi2 < best.chi2:
            best, best_index = run, index
    if best is None:
        raise FloatingPointError("every start produced a non-finite chi-squared")
    estimate = validate_density(density_from_params(best.params))
    return ReconstructionResult(
        estimate=estimate,
        params=best.params,
        chi2=float(best.chi2),
        iterations=best.iterations,
        converged=bool(best.converged),
        restart_index=best_index,
    )
