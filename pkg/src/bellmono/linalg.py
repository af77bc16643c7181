"""Small dense complex linear algebra.

Matrices are plain 2-D numpy arrays.  Dimensions are capped at ``MAX_DIM``
(a five-qubit register); nothing here is meant for larger problems.
"""

from __future__ import annotations

import numpy as np

from .errors import CapacityError, ContractError, ShapeError

MAX_DIM = 32
HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a finite complex 2-D array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {m.shape}")
    if m.size == 0:
        raise ShapeError("matrix has no entries")
    if not np.all(np.isfinite(m)):
        raise ContractError("matrix has non-finite entries")
    return m


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product with blocks ``a[i, j] * b``."""
    a, b = as_matrix(a), as_matrix(b)
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if max(rows, cols) > MAX_DIM:
        raise CapacityError(f"kron result {rows}x{cols} exceeds {MAX_DIM}")
    return np.kron(a, b)


def kron_all(factors) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = kron(out, f)
    return out


def hermiticity_defect(h) -> float:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        return np.inf
    return float(np.max(np.abs(h - h.conj().T)))


def hermitize(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Check ``h`` is Hermitian within ``tol`` and return ``(h + h^dag) / 2``."""
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ShapeError(f"expected a square matrix, got {h.shape}")
    defect = hermiticity_defect(h)
    if defect > tol:
        raise ContractError(f"matrix is not Hermitian (max |H - H^dag| = {defect:.3g})")
    return (h + h.conj().T) / 2


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigh(h, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Each rotation first removes the phase of the pivot ``a[p, q]`` with a
    diagonal unitary, then applies a real Givens rotation that zeroes it.
    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||H||_F)``.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as columns.
    """
    a = hermitize(h).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        if _off_norm(a) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                theta = 0.5 * np.arctan2(2.0 * r, a[p, p].real - a[q, q].real)
                c, s = np.cos(theta), np.sin(theta)
                # u = diag(1, conj(phase)) @ [[c, -s], [s, c]]
                u = np.array([[c, -s], [s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u
                a[idx, :] = u.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ u
    else:
        if _off_norm(a) >= threshold:
            raise ContractError("Jacobi iteration did not converge")
    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def hermitian_eigenvalues(h) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending."""
    return jacobi_eigh(h)[0]
