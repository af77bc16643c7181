"""Analytic two-qubit tests: PPT entanglement and the Horodecki CHSH criterion."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import ContractError, ShapeError
from .linalg import hermitian_eigenvalues
from .states import PAULIS, as_density, num_qubits, partial_transpose


@dataclass(frozen=True)
class CorrelationAnalysis:
    """Correlation matrix T, U = T^T T, its spectrum and the Horodecki sum."""

    t_matrix: np.ndarray
    u_matrix: np.ndarray
    u_eigenvalues: np.ndarray
    m_value: float

    @property
    def violates_chsh(self) -> bool:
        return self.m_value > 1.0

    @property
    def max_chsh(self) -> float:
        return 2.0 * sqrt(max(self.m_value, 0.0))


def ppt_min_eigenvalue(rho, cut: Iterable[int] = (2,)) -> float:
    """Smallest eigenvalue of the partial transpose across ``cut``.

    ``cut`` lists the (1-based) qubits on one side of the bipartition.
    A negative result certifies entanglement; for 2x2 and 2x3 cuts a
    non-negative one certifies separability.
    """
    rho = as_density(rho)
    return float(hermitian_eigenvalues(partial_transpose(rho, cut))[0])


def _two_qubit(rho) -> np.ndarray:
    rho = as_density(rho)
    if num_qubits(rho) != 2:
        raise ShapeError(f"expected a two-qubit state, got shape {rho.shape}")
    return rho


def correlation_matrix(rho) -> CorrelationAnalysis:
    rho = _two_qubit(rho)
    t = np.empty((3, 3))
    for i, si in enumerate(PAULIS):
        for j, sj in enumerate(PAULIS):
            value = np.trace(np.kron(si, sj) @ rho)
            if abs(value.imag) > 1e-10:
                raise ContractError("correlation matrix entry is not real")
            t[i, j] = value.real
    u = t.T @ t
    eig = hermitian_eigenvalues(u)
    return CorrelationAnalysis(t, u, eig, float(eig[1] + eig[2]))


def horodecki_m(rho) -> float:
    """Sum of the two largest eigenvalues of U; CHSH is violated iff it exceeds 1."""
    return correlation_matrix(rho).m_value


def max_chsh_value(rho) -> float:
    """Maximal CHSH expectation over projective settings, 2 sqrt(M)."""
    return correlation_matrix(rho).max_chsh
