"""Figures of merit: Uhlmann fidelity and purity."""

from __future__ import annotations

import numpy as np

from .linalg import as_matrix, matrix_sqrt_psd


def fidelity(a, b) -> float:
    """(Tr sqrt(sqrt(a) b sqrt(a)))^2, clamped to [0, 1]."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    root_a = matrix_sqrt_psd(a)
    inner = root_a @ b @ root_a
    inner = 0.5 * (inner + inner.conj().T)
    f = float(np.real(np.trace(matrix_sqrt_psd(inner)))) ** 2
    return min(max(f, 0.0), 1.0)


def pure_fidelity(ket, rho) -> float:
    """<psi|rho|psi>; equals :func:`fidelity` when one argument is pure."""
    k = np.asarray(ket, dtype=complex)
    return float(np.real(np.vdot(k, as_matrix(rho) @ k)))


def purity(rho) -> float:
    m = as_matrix(rho)
    gamma = float(np.real(np.trace(m @ m)))
    return min(max(gamma, 1.0 / m.shape[0]), 1.0)
