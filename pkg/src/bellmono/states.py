"""Qubit-register states: kets, density operators, partial trace/transpose.

States are numpy arrays: a ket is a length-``2**n`` vector, a density
operator a ``2**n x 2**n`` matrix.  Qubits are numbered from 1, and qubit 1
is the leftmost tensor factor, so ``|01>`` has qubit 1 in ``|0>``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .errors import ArgumentError, ContractError, ShapeError
from .linalg import HERMITIAN_TOL, as_matrix, hermitian_eigenvalues, hermitize

NORM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
PAULI_BASIS = (IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z)


def _qubits_for_dim(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if n < 1 or 2**n != dim:
        raise ShapeError(f"dimension {dim} is not a power of two >= 2")
    return n


def num_qubits(state) -> int:
    """Number of qubits of a ket or density matrix."""
    return _qubits_for_dim(np.shape(state)[0])


def basis_ket(bits: str) -> np.ndarray:
    """Computational basis ket, e.g. ``basis_ket("010")``."""
    if not bits or set(bits) - {"0", "1"}:
        raise ArgumentError(f"invalid bit string {bits!r}")
    psi = np.zeros(2 ** len(bits), dtype=complex)
    psi[int(bits, 2)] = 1.0
    return psi


def as_ket(psi, tol: float = NORM_TOL) -> np.ndarray:
    v = np.asarray(psi, dtype=complex)
    if v.ndim != 1:
        raise ShapeError(f"a state vector must be 1-D, got shape {v.shape}")
    _qubits_for_dim(v.shape[0])
    norm2 = float(np.vdot(v, v).real)
    if abs(norm2 - 1.0) > tol:
        raise ContractError(f"state vector is not normalized (|psi|^2 = {norm2:.12g})")
    return v


def as_density(rho, check_psd: bool = True) -> np.ndarray:
    """Validate a density matrix and return its Hermitian part.

    Checks Hermiticity (1e-10), unit trace (1e-10) and, unless disabled,
    that no eigenvalue is below -1e-9.
    """
    m = as_matrix(rho)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"density matrix must be square, got {m.shape}")
    _qubits_for_dim(m.shape[0])
    m = hermitize(m, HERMITIAN_TOL)
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ContractError(f"density matrix trace is {tr:.12g}, expected 1")
    if check_psd:
        lowest = hermitian_eigenvalues(m)[0]
        if lowest < -PSD_TOL:
            raise ContractError(f"density matrix has negative eigenvalue {lowest:.3g}")
    return m


def density_from_vector(psi) -> np.ndarray:
    v = as_ket(psi)
    return np.outer(v, v.conj())


def mixture(weights: Sequence[float], kets: Sequence) -> np.ndarray:
    """Convex mixture of pure states; weights must sum to one."""
    if len(weights) != len(kets):
        raise ArgumentError("need one weight per ket")
    if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > TRACE_TOL:
        raise ContractError("mixture weights must be non-negative and sum to 1")
    return sum(w * density_from_vector(k) for w, k in zip(weights, kets))


def _check_qubits(indices: Iterable[int], n: int, what: str) -> list[int]:
    idx = [int(i) for i in indices]
    if not idx:
        raise ArgumentError(f"{what} must not be empty")
    if len(set(idx)) != len(idx):
        raise ArgumentError(f"{what} has repeated qubits: {idx}")
    bad = [i for i in idx if not 1 <= i <= n]
    if bad:
        raise ArgumentError(f"{what} has qubits outside 1..{n}: {bad}")
    return idx


def partial_trace(rho, keep: Sequence[int]) -> np.ndarray:
    """Reduced state on the qubits in ``keep``, ordered as given."""
    rho = as_matrix(rho)
    n = num_qubits(rho)
    keep = _check_qubits(keep, n, "keep")
    traced = [q for q in range(1, n + 1) if q not in keep]
    t = rho.reshape([2] * (2 * n))
    # bra axis of qubit q sits at n + q - 1; trace pairs from the highest index down
    for q in sorted(traced, reverse=True):
        t = np.trace(t, axis1=q - 1, axis2=t.ndim // 2 + q - 1)
    # remaining axes are the kept qubits in ascending order
    remaining = sorted(keep)
    perm = [remaining.index(q) for q in keep]
    k = len(keep)
    t = t.transpose(perm + [k + p for p in perm])
    return t.reshape(2**k, 2**k)


def partial_transpose(rho, subsystem: Iterable[int]) -> np.ndarray:
    """Transpose the qubits in ``subsystem`` (a non-empty set of indices)."""
    rho = as_matrix(rho)
    n = num_qubits(rho)
    sub = _check_qubits(subsystem, n, "subsystem")
    t = rho.reshape([2] * (2 * n))
    perm = list(range(2 * n))
    for q in sub:
        perm[q - 1], perm[n + q - 1] = perm[n + q - 1], perm[q - 1]
    return t.transpose(perm).reshape(2**n, 2**n)


def expectation(rho, observable) -> float:
    """Tr(O rho) for a Hermitian observable O."""
    rho = as_matrix(rho)
    obs = hermitize(observable)
    if obs.shape != rho.shape:
        raise ShapeError(f"observable {obs.shape} does not match state {rho.shape}")
    value = np.trace(obs @ rho)
    if abs(value.imag) > 1e-10:
        raise ContractError(f"expectation has imaginary part {value.imag:.3g}")
    return float(value.real)


def local_unitary(rho, unitaries: Sequence) -> np.ndarray:
    """Conjugate ``rho`` by the tensor product of single-qubit unitaries."""
    u = np.ones((1, 1), dtype=complex)
    for v in unitaries:
        u = np.kron(u, np.asarray(v, dtype=complex))
    return u @ as_matrix(rho) @ u.conj().T


def permute_qubits(psi, order: Sequence[int]) -> np.ndarray:
    """Ket with its qubits reordered; ``order[k]`` is the old index of new qubit k+1."""
    v = np.asarray(psi, dtype=complex)
    n = num_qubits(v)
    return v.reshape([2] * n).transpose([q - 1 for q in order]).reshape(-1)
