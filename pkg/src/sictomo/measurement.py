"""Qubit SIC-POVM and the 64 product measurements on three qubits."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import as_matrix, kron_all


@dataclass(frozen=True, eq=False)
class PovmSet:
    """Ordered POVM elements with their labels.

    ``labels`` are 1-based indices: ``(k,)`` for the qubit set and
    ``(i, j, k)`` for the three-qubit set, lexicographically ordered.
    """

    operators: np.ndarray  # shape (n_outcomes, dim, dim)
    labels: tuple

    @property
    def dim(self) -> int:
        return self.operators.shape[1]

    def __len__(self) -> int:
        return self.operators.shape[0]

    def completeness_error(self) -> float:
        total = self.operators.sum(axis=0)
        return float(np.max(np.abs(total - np.eye(self.dim))))


def sic_vectors() -> list[np.ndarray]:
    """The four qubit SIC kets; the last three differ by phases 0, 2pi/3, 4pi/3."""
    a, b = 1.0 / np.sqrt(3.0), np.sqrt(2.0 / 3.0)
    vecs = [np.array([1.0, 0.0], dtype=complex)]
    for phi in (0.0, 2.0 * np.pi / 3.0, 4.0 * np.pi / 3.0):
        vecs.append(np.array([a, b * np.exp(1j * phi)]))
    return vecs


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@lru_cache(maxsize=None)
def sic_povm() -> PovmSet:
    ops = np.array([0.5 * np.outer(v, v.conj()) for v in sic_vectors()])
    return PovmSet(_frozen(ops), tuple((k,) for k in range(1, 5)))


@lru_cache(maxsize=None)
def three_qubit_povm() -> PovmSet:
    single = sic_povm().operators
    labels = tuple(itertools.product(range(1, 5), repeat=3))
    ops = np.array([kron_all(single[i - 1], single[j - 1], single[k - 1]) for i, j, k in labels])
    return PovmSet(_frozen(ops), labels)


@lru_cache(maxsize=None)
def _design(povm: PovmSet) -> np.ndarray:
    # row kappa dotted with vec(rho) gives Tr(M_kappa rho)
    return _frozen(np.transpose(povm.operators, (0, 2, 1)).reshape(len(povm), -1).copy())


def design_matrix(povm: PovmSet | None = None) -> np.ndarray:
    return _design(povm if povm is not None else three_qubit_povm())


def outcome_probabilities(rho, povm: PovmSet | None = None) -> np.ndarray:
    """p_k = Re Tr(M_k rho), with round-off negatives clamped to zero."""
    povm = povm if povm is not None else three_qubit_povm()
    m = as_matrix(rho)
    if m.shape[0] != povm.dim:
        raise ValueError(f"state dimension {m.shape[0]} does not match POVM dimension {povm.dim}")
    probs = np.real(design_matrix(povm) @ m.reshape(-1))
    return np.clip(probs, 0.0, None)
