"""Local filtering: diagonal single-qubit filters and their CHSH thresholds."""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import ArgumentError, DegenerateFilterError
from .library import SymmetricStateParams
from .states import as_density, num_qubits

TRACE_CUTOFF = 1e-12


class FilterMode(enum.Enum):
    SUPPRESS_ZERO = "f1"  # h|0><0| + |1><1|
    SUPPRESS_ONE = "f2"  # |0><0| + h|1><1|


@dataclass(frozen=True)
class LocalFilter:
    h: float
    mode: FilterMode = FilterMode.SUPPRESS_ZERO

    def __post_init__(self):
        if not 0 < self.h <= 1:
            raise ArgumentError(f"filter strength h must lie in (0, 1], got {self.h}")

    @property
    def matrix(self) -> np.ndarray:
        if self.mode is FilterMode.SUPPRESS_ZERO:
            return np.diag([self.h, 1.0]).astype(complex)
        return np.diag([1.0, self.h]).astype(complex)


def uniform_filters(n: int, h: float, mode: FilterMode = FilterMode.SUPPRESS_ZERO) -> list[LocalFilter]:
    return [LocalFilter(h, mode)] * n


def apply_filter(rho, filters: Sequence[LocalFilter]) -> np.ndarray:
    """(F_1 x ... x F_n) rho (F_1 x ... x F_n)^dag, renormalized."""
    rho = as_density(rho, check_psd=False)
    n = num_qubits(rho)
    if len(filters) != n:
        raise ArgumentError(f"need {n} filters, got {len(filters)}")
    # every filter is diagonal, so the conjugation is an outer product of diagonals
    d = np.ones(1)
    for f in filters:
        d = np.kron(d, np.diag(f.matrix).real)
    # the output is scale invariant; rescale on the support of rho so the cutoff
    # flags a filter that annihilates the state rather than a merely small h
    support = np.diag(rho).real > TRACE_CUTOFF
    if support.any():
        d = d / np.max(d[support])
    out = d[:, None] * rho * d[None, :]
    tr = np.trace(out).real
    if tr <= TRACE_CUTOFF:
        raise DegenerateFilterError(f"filtered state has trace {tr:.3g}")
    return out / tr


def chsh_filter_threshold(n: int) -> float:
    """Filter strength below which the filtered two-qubit marginal of |W_n> violates CHSH."""
    if n < 3:
        raise ArgumentError(f"need n >= 3, got {n}")
    return sqrt(2 * (sqrt(2) - 1) / (n - 2))


def filtered_m_branches(n: int, h: float) -> tuple[float, float]:
    """The two candidate Horodecki sums of the filtered two-qubit W marginal.

    Which one is the sum of the two largest eigenvalues depends on whether
    h^2 (n - 2) is below or above 4; the maximum is always the answer.
    """
    x = h * h * (n - 2)
    s1 = 8 / (x + 2) ** 2
    s2 = ((x - 2) ** 2 + 4) / (x + 2) ** 2
    return s1, s2


def symmetric_filtered_reduced(p: SymmetricStateParams, h: float, mode: FilterMode) -> np.ndarray:
    """Closed-form filtered two-qubit marginal of the symmetric three-qubit state.

    Entries carry a common factor 3 that cancels against the normalization.
    """
    LocalFilter(h, mode)
    a, b, c = p.a1, p.b1, p.c1
    diag0 = 3 * (a * a + c * c)  # = 2 a^2 - b^2 + 1, without the cancellation near b = 1
    if mode is FilterMode.SUPPRESS_ZERO:
        m = np.array(
            [
                [h**4 * diag0, 3 * a * h**3 * c, 3 * a * h**3 * c, 3 * b * h**2 * c],
                [3 * a * h**3 * c, 3 * h**2 * c * c, 3 * h**2 * c * c, 0],
                [3 * a * h**3 * c, 3 * h**2 * c * c, 3 * h**2 * c * c, 0],
                [3 * b * h**2 * c, 0, 0, 3 * b * b],
            ]
        )
    else:
        m = np.array(
            [
                [diag0, 3 * a * h * c, 3 * a * h * c, 3 * b * h**2 * c],
                [3 * a * h * c, 3 * h**2 * c * c, 3 * h**2 * c * c, 0],
                [3 * a * h * c, 3 * h**2 * c * c, 3 * h**2 * c * c, 0],
                [3 * b * h**2 * c, 0, 0, 3 * b * b * h**4],
            ]
        )
    # the trace is a sum of non-negative terms; the expanded polynomial loses
    # everything to cancellation at small h
    norm = float(np.trace(m))
    if norm <= TRACE_CUTOFF:
        raise DegenerateFilterError(f"filtered state has trace {norm:.3g}")
    return (m / norm).astype(complex)
