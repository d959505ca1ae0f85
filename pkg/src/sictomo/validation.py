"""Fast invariant checks behind the ``validate`` subcommand."""

from __future__ import annotations

import itertools
from typing import Callable, NamedTuple

import numpy as np

from . import linalg
from .measurement import outcome_probabilities, sic_povm, sic_vectors, three_qubit_povm
from .metrics import fidelity, pure_fidelity, purity
from .noise import NoiseMode, simulate_counts
from .reconstruction import ChiSquared, reconstruct
from .states import ghz, maximally_mixed, named_state, pure_density, w, werner, werner_purity


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str


def _povm_completeness() -> Check:
    e4 = sic_povm().completeness_error()
    e64 = three_qubit_povm().completeness_error()
    return Check("povm completeness", max(e4, e64) <= 1e-12, f"err4={e4:.2e} err64={e64:.2e}")


def _sic_overlaps() -> Check:
    vecs = sic_vectors()
    dev = max(abs(abs(np.vdot(a, b)) ** 2 - 1.0 / 3.0) for a, b in itertools.combinations(vecs, 2))
    return Check("sic pairwise overlaps", dev <= 1e-12, f"max |overlap - 1/3| = {dev:.2e}")


def _closed_forms() -> Check:
    g = pure_density(ghz())
    worst = 0.0
    for eta in np.linspace(0.0, 1.0, 11):
        rho = werner(eta)
        worst = max(worst, abs(fidelity(g, rho) - (eta + (1 - eta) / 8)), abs(purity(rho) - werner_purity(eta)))
    return Check("werner fidelity/purity closed forms", worst <= 1e-10, f"max err = {worst:.2e}")


def _eig_and_sqrt() -> Check:
    rng = np.random.default_rng(12345)
    x = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = x + x.conj().T
    vals, vecs = linalg.hermitian_eig(h)
    recon = float(np.max(np.abs((vecs * vals) @ vecs.conj().T - h)))
    ortho = float(np.max(np.abs(vecs.conj().T @ vecs - np.eye(8))))
    psd = x @ x.conj().T
    root = linalg.matrix_sqrt_psd(psd)
    sq = float(np.max(np.abs(root @ root - psd)))
    ok = recon <= 1e-9 and ortho <= 1e-9 and sq <= 1e-8
    return Check("jacobi eigendecomposition and sqrt", ok, f"recon={recon:.1e} ortho={ortho:.1e} sqrt={sq:.1e}")


def _cholesky_physical() -> Check:
    rng = np.random.default_rng(2024)
    for _ in range(20):
        linalg.validate_density(linalg.density_from_params(rng.normal(size=64)), atol=1e-12)
    return Check("cholesky parametrization is physical", True, "20 random parameter vectors")


def _probability_sums() -> Check:
    errs = [abs(outcome_probabilities(rho).sum() - 1.0) for rho in (werner(0.3), named_state("w"), maximally_mixed(8))]
    return Check("outcome probabilities sum to one", max(errs) <= 1e-10, f"max err = {max(errs):.2e}")


def _pure_reduction() -> Check:
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(5):
        rho = linalg.density_from_params(rng.normal(size=64))
        worst = max(worst, abs(fidelity(pure_density(w()), rho) - pure_fidelity(w(), rho)))
    return Check("fidelity pure-state reduction", worst <= 1e-10, f"max err = {worst:.2e}")


def _gradient() -> Check:
    rng = np.random.default_rng(7)
    obj = ChiSquared(simulate_counts(werner(0.5), 1000.0, 1))
    worst = 0.0
    for _ in range(5):
        p = rng.normal(size=64)
        _, g = obj.value_and_grad(p)
        h = 1e-5
        fd = np.array([(obj.value(p + h * e) - obj.value(p - h * e)) / (2 * h) for e in np.eye(64)])
        worst = max(worst, float(np.linalg.norm(fd - g) / np.linalg.norm(fd)))
    return Check("chi-squared gradient vs finite differences", worst <= 1e-4, f"max rel err = {worst:.2e}")


def _noiseless_reconstruction() -> Check:
    parts = []
    ok = True
    for label, rho in (("werner(0.5)", werner(0.5)), ("W", named_state("w"))):
        res = reconstruct(simulate_counts(rho, 1e4, 0, NoiseMode.NOISELESS))
        f = fidelity(res.estimate, rho)
        ok &= f >= 0.999 and res.chi2 <= 1e-6
        parts.append(f"{label}: F={f:.6f} chi2={res.chi2:.1e}")
    return Check("noiseless self-consistency", ok, "; ".join(parts))


def _determinism() -> Check:
    a = simulate_counts(werner(0.7), 100.0, 42).to_json()
    b = simulate_counts(werner(0.7), 100.0, 42).to_json()
    return Check("seeded counts are reproducible", a == b, "two identical draws")


CHECKS: list[Callable[[], Check]] = [
    _povm_completeness,
    _sic_overlaps,
    _closed_forms,
    _eig_and_sqrt,
    _cholesky_physical,
    _probability_sums,
    _pure_reduction,
    _gradient,
    _noiseless_reconstruction,
    _determinism,
]


def run_checks() -> list[Check]:
    out = []
    for fn in CHECKS:
        try:
            out.append(fn())
        except Exception as exc:  # report, keep going
            out.append(Check(fn.__name__.lstrip("_").replace("_", " "), False, f"raised {exc!r}"))
    return out
