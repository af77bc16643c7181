"""Constructors for the W, GHZ and symmetric three-qubit state families."""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite, sqrt

import numpy as np

from .errors import ArgumentError
from .states import basis_ket, density_from_vector

MAX_FULL_QUBITS = 5


def _check_register(n: int) -> int:
    if not 2 <= n <= MAX_FULL_QUBITS:
        raise ArgumentError(f"full states are supported for 2 <= n <= {MAX_FULL_QUBITS}, got {n}")
    return n


def _w_vector(n: int) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    for k in range(n):
        psi[1 << k] = 1.0
    return psi / sqrt(n)


def w_state(n: int) -> np.ndarray:
    """|W_n>: equal superposition of the n single-excitation basis states."""
    return _w_vector(_check_register(n))


def ghz_state(n: int) -> np.ndarray:
    """(|0...0> + |1...1>) / sqrt(2)."""
    _check_register(n)
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = psi[-1] = 1 / sqrt(2)
    return psi


@dataclass(frozen=True)
class SymmetricStateParams:
    """Amplitudes of a1|000> + b1|111> + c1(|001> + |010> + |100>).

    ``c1`` is fixed by normalization.
    """

    a1: float
    b1: float

    def __post_init__(self):
        if not (isfinite(self.a1) and isfinite(self.b1)):
            raise ArgumentError("a1 and b1 must be finite")
        if self.a1 < 0 or self.b1 < 0:
            raise ArgumentError("a1 and b1 must be non-negative")
        if self.a1**2 + self.b1**2 > 1 + 1e-12:
            raise ArgumentError(f"a1^2 + b1^2 = {self.a1**2 + self.b1**2:.6g} exceeds 1")

    @property
    def c1(self) -> float:
        rest = 1.0 - self.a1**2 - self.b1**2
        # round-off on the a1^2 + b1^2 = 1 boundary would otherwise leave c1 ~ 1e-8
        return sqrt(rest / 3) if rest > 1e-12 else 0.0


def symmetric_state(p: SymmetricStateParams) -> np.ndarray:
    psi = p.a1 * basis_ket("000") + p.b1 * basis_ket("111")
    psi = psi + p.c1 * (basis_ket("001") + basis_ket("010") + basis_ket("100"))
    return psi


def reduced_w(n: int, m: int) -> np.ndarray:
    """State of m qubits of |W_n>: (n-m)/n |0..0><0..0| + m/n |W_m><W_m|.

    Closed form, so ``n`` is not limited to the full-state register size.
    """
    if m < 2 or m >= n:
        raise ArgumentError(f"need 2 <= m < n, got n={n}, m={m}")
    if m > MAX_FULL_QUBITS:
        raise ArgumentError(f"m = {m} exceeds the {MAX_FULL_QUBITS}-qubit register")
    vacuum = np.zeros(2**m, dtype=complex)
    vacuum[0] = 1.0
    return (n - m) / n * density_from_vector(vacuum) + m / n * density_from_vector(_w_vector(m))


def symmetric_reduced(p: SymmetricStateParams) -> np.ndarray:
    """Two-qubit reduced state of ``symmetric_state(p)`` in closed form."""
    a, b, c = p.a1, p.b1, p.c1
    return np.array(
        [
            [a * a + c * c, a * c, a * c, b * c],
            [a * c, c * c, c * c, 0],
            [a * c, c * c, c * c, 0],
            [b * c, 0, 0, b * b],
        ],
        dtype=complex,
    )
