"""Three-qubit states: GHZ, W, generalized Werner mixtures.

Basis index of |abc> is 4a + 2b + c, the same ordering ``np.kron`` produces.
"""

from __future__ import annotations

import numpy as np

from .linalg import InvalidStateError, validate_density

NORM_TOL = 1e-12


def basis_ket(index: int, dim: int = 8) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def ghz() -> np.ndarray:
    """(|000> + |111>)/sqrt(2)."""
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = 1.0 / np.sqrt(2.0)
    return v


def w() -> np.ndarray:
    """(|001> + |010> + |100>)/sqrt(3)."""
    v = np.zeros(8, dtype=complex)
    v[[1, 2, 4]] = 1.0 / np.sqrt(3.0)
    return v


def pure_density(ket) -> np.ndarray:
    k = np.asarray(ket, dtype=complex)
    if k.ndim != 1:
        raise ValueError(f"expected a state vector, got shape {k.shape}")
    norm2 = float(np.vdot(k, k).real)
    if abs(norm2 - 1.0) > NORM_TOL:
        raise InvalidStateError(f"ket is not normalized (norm^2 = {norm2:.15g})")
    return np.outer(k, k.conj())


def maximally_mixed(dim: int = 8) -> np.ndarray:
    if dim not in (2, 4, 8):
        raise ValueError(f"unsupported dimension {dim}; expected 2, 4 or 8")
    return np.eye(dim, dtype=complex) / dim


def check_eta(eta: float) -> float:
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    return eta


def werner(eta: float) -> np.ndarray:
    """eta |GHZ><GHZ| + (1 - eta)/8 I_8."""
    eta = check_eta(eta)
    rho = eta * pure_density(ghz()) + (1.0 - eta) * maximally_mixed(8)
    return validate_density(rho)


def werner_purity(eta: float) -> float:
    """Closed-form Tr(rho^2) of :func:`werner`."""
    eta = check_eta(eta)
    return eta**2 + eta * (1.0 - eta) / 4.0 + (1.0 - eta) ** 2 / 8.0


NAMED_STATES = {"ghz": ghz, "w": w}


def named_state(name: str) -> np.ndarray:
    try:
        return pure_density(NAMED_STATES[name.lower()]())
    except KeyError:
        raise ValueError(f"unknown state {name!r}; choose from {sorted(NAMED_STATES)}") from None
