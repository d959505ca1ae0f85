"""Small dense complex linear algebra and the Cholesky state parametrization.

Matrices are plain ``numpy`` arrays of complex dtype. Everything here is
aimed at dimensions 2, 4 and 8, so clarity wins over speed.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10

N_PARAMS = 64
DIM = 8

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


class InvalidStateError(ValueError):
    """Raised when a matrix or vector fails a physicality check."""


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; entry (i*db + k, j*db + l) is a[i, j] * b[k, l]."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*factors) -> np.ndarray:
    out = as_matrix(factors[0])
    for f in factors[1:]:
        out = tensor_product(out, f)
    return out


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def is_hermitian(a, atol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(a)
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def hermitian_eig(a, atol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.

    Parameters
    ----------
    a : array_like
        Hermitian matrix (checked to ``atol``).

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in ascending order.
    eigenvectors : ndarray
        Unitary matrix whose columns are the matching normalized eigenvectors.

    Notes
    -----
    Each rotation first removes the phase of the pivot ``a[p, q]`` with a
    diagonal unitary, then applies the real symmetric Jacobi rotation. Sweeps
    stop once the off-diagonal Frobenius norm falls below
    ``JACOBI_TOL * max(1, ||a||_F)`` or after ``JACOBI_MAX_SWEEPS``.
    """
    m = as_matrix(a)
    if not is_hermitian(m, atol):
        err = float(np.max(np.abs(m - m.conj().T)))
        raise InvalidStateError(f"matrix is not Hermitian (max |A - A^H| = {err:.3e})")
    n = m.shape[0]
    A = 0.5 * (m + m.conj().T)
    V = np.eye(n, dtype=complex)
    threshold = JACOBI_TOL * max(1.0, float(np.linalg.norm(A)))

    for _ in range(JACOBI_MAX_SWEEPS):
        if _offdiag_norm(A) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                app = A[p, p].real
                aqq = A[q, q].real
                zeta = (aqq - app) / (2.0 * mag)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # U = diag-phase(q) @ real rotation; columns p and q only
                up = np.array([c, -s * np.conj(phase)])
                uq = np.array([s, c * np.conj(phase)])
                # A <- A U  (columns)
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = colp * up[0] + colq * up[1]
                A[:, q] = colp * uq[0] + colq * uq[1]
                # A <- U^H A  (rows)
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = np.conj(up[0]) * rowp + np.conj(up[1]) * rowq
                A[q, :] = np.conj(uq[0]) * rowp + np.conj(uq[1]) * rowq
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = vp * up[0] + vq * up[1]
                V[:, q] = vp * uq[0] + vq * uq[1]

    evals = np.real(np.diag(A)).copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], V[:, order]


def matrix_sqrt_psd(a, atol: float = PSD_TOL) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in ``[-atol, 0)`` are treated as round-off and clamped to zero,
    as are positive ones below the eigensolver's resolution
    ``n * eps * max|lambda|``.
    """
    evals, vecs = hermitian_eig(a)
    if evals[0] < -atol:
        raise InvalidStateError(f"matrix is not PSD (smallest eigenvalue {evals[0]:.3e})")
    resolution = len(evals) * np.finfo(float).eps * float(np.max(np.abs(evals)))
    roots = np.sqrt(np.where(evals > resolution, evals, 0.0))
    return (vecs * roots) @ vecs.conj().T


def validate_density(a, atol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``a`` as a complex array after checking it is a density matrix.

    Raises :class:`InvalidStateError` on any failed check.
    """
    m = as_matrix(a)
    if m.shape[0] not in (2, 4, 8):
        raise InvalidStateError(f"unsupported dimension {m.shape[0]}; expected 2, 4 or 8")
    if not np.all(np.isfinite(m)):
        raise InvalidStateError("density matrix has non-finite entries")
    if not is_hermitian(m, atol):
        raise InvalidStateError("density matrix is not Hermitian")
    tr = np.trace(m)
    if abs(tr - 1.0) > atol:
        raise InvalidStateError(f"density matrix trace is {tr:.12g}, expected 1")
    evals, _ = hermitian_eig(m, atol)
    if evals[0] < -atol:
        raise InvalidStateError(f"density matrix is not PSD (smallest eigenvalue {evals[0]:.3e})")
    return m


def is_density(a, atol: float = HERMITIAN_TOL) -> bool:
    try:
        validate_density(a, atol)
    except (InvalidStateError, ValueError):
        return False
    return True


# --- Cholesky parametrization -------------------------------------------------

_ROWS, _COLS = np.tril_indices(DIM, -1)  # row-major strictly-lower entries


def check_params(p) -> np.ndarray:
    t = np.asarray(p, dtype=float)
    if t.shape != (N_PARAMS,):
        raise ValueError(f"expected {N_PARAMS} parameters, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise ValueError("parameters must be finite")
    return t


def params_to_triangular(p) -> np.ndarray:
    """Lower-triangular T from 64 reals.

    Slots 0-7 are the real diagonal; the remaining 56 are (re, im) pairs of
    the 28 strictly-lower entries in row-major order.
    """
    t = check_params(p)
    T = np.zeros((DIM, DIM), dtype=complex)
    T[np.arange(DIM), np.arange(DIM)] = t[:DIM]
    T[_ROWS, _COLS] = t[DIM::2] + 1j * t[DIM + 1::2]
    return T


def triangular_to_params(T) -> np.ndarray:
    """Inverse of :func:`params_to_triangular`; the diagonal must be real."""
    T = as_matrix(T)
    out = np.empty(N_PARAMS)
    out[:DIM] = np.real(np.diag(T))
    lower = T[_ROWS, _COLS]
    out[DIM::2] = lower.real
    out[DIM + 1::2] = lower.imag
    return out


def density_from_params(p) -> np.ndarray:
    """sigma = T^H T / Tr(T^H T) for the triangular T encoded by ``p``."""
    T = params_to_triangular(p)
    S = T.conj().T @ T
    norm = float(np.real(np.trace(S)))
    if norm <= 0.0:
        raise ValueError("parameter vector is all zero; state is undefined")
    sigma = S / norm
    return 0.5 * (sigma + sigma.conj().T)


def params_from_density(rho, eps: float = 1e-12) -> np.ndarray:
    """A parameter vector whose state is ``rho`` (up to ``eps`` regularization).

    Uses the upper Cholesky factor ``rho = R^H R`` with ``R = L^H``; since the
    parametrization wants ``T`` lower-triangular with ``T^H T = rho``, the
    basis order is reversed, factorized, and reversed back.
    """
    m = validate_density(rho)
    n = m.shape[0]
    J = np.eye(n)[::-1]
    flipped = J @ m @ J + eps * np.eye(n)
    L = np.linalg.cholesky(flipped)  # flipped = L L^H
    # rho ~ J L L^H J = (J L J)(J L^H J); T := (J L J)^H is lower-triangular
    T = (J @ L @ J).conj().T
    return triangular_to_params(T)
