"""Bell monogamy sums over subsystems and their violation verdicts."""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .bell import (
    DEFAULT_RESTARTS,
    DEFAULT_SWEEPS,
    DEFAULT_TOL,
    CoefficientTensor,
    chsh,
    optimize_bell,
    optimize_sum_of_squares,
)
from .criteria import max_chsh_value
from .errors import ArgumentError, ShapeError
from .filters import LocalFilter, apply_filter
from .states import as_density, num_qubits, partial_trace

VIOLATION_MARGIN = 1e-9
ALL_PAIRS = ((1, 2), (1, 3), (2, 3))


class MonogamyMode(enum.Enum):
    PAIRWISE_OPTIMAL = "pairwise"  # settings optimized separately for every subsystem
    SHARED_SETTINGS = "shared"  # one observable per party, entering every term


@dataclass(frozen=True)
class MonogamyTerm:
    label: str
    value: float

    @property
    def squared(self) -> float:
        return self.value * self.value


@dataclass(frozen=True)
class MonogamyReport:
    relation_name: str
    terms: list[MonogamyTerm]
    bound: float
    mode: str = MonogamyMode.PAIRWISE_OPTIMAL.value
    sum_of_squares: float = field(init=False)
    violated: bool = field(init=False)

    def __post_init__(self):
        total = float(sum(t.squared for t in self.terms))
        object.__setattr__(self, "sum_of_squares", total)
        object.__setattr__(self, "violated", total > self.bound + VIOLATION_MARGIN)

    def as_dict(self) -> dict:
        return {
            "relation": self.relation_name,
            "mode": self.mode,
            "terms": [{"label": t.label, "value": t.value, "squared": t.squared} for t in self.terms],
            "sum_of_squares": self.sum_of_squares,
            "bound": self.bound,
            "violated": self.violated,
        }


@dataclass(frozen=True)
class OptimizerParams:
    restarts: int = DEFAULT_RESTARTS
    sweeps_max: int = DEFAULT_SWEEPS
    tol: float = DEFAULT_TOL
    seed: int = 0


def cm_bound(m: int, n: int, lmax: float) -> float:
    """binomial(n, m) * lmax^2: one maximal local value per m-qubit subsystem."""
    if not 2 <= m <= n:
        raise ArgumentError(f"need 2 <= m <= n, got m={m}, n={n}")
    return comb(n, m) * lmax**2


def _label(qubits: Sequence[int]) -> str:
    return "".join(chr(ord("A") + q - 1) for q in qubits)


def chsh_monogamy(
    rho_full,
    mode: MonogamyMode = MonogamyMode.PAIRWISE_OPTIMAL,
    pairs: Sequence[tuple[int, int]] = ALL_PAIRS,
    pair_filter: LocalFilter | None = None,
    params: OptimizerParams = OptimizerParams(),
) -> MonogamyReport:
    """CHSH monogamy of a three-qubit state; the bound is 4 per pair (12 for all three).

    ``pair_filter`` applies the same local filter to both qubits of every
    reduced pair before it is evaluated; it is only meaningful in the
    pairwise mode, where each subsystem is handled on its own.
    """
    rho = as_density(rho_full)
    if num_qubits(rho) != 3:
        raise ShapeError(f"CHSH monogamy needs a three-qubit state, got {num_qubits(rho)} qubits")
    pairs = [tuple(p) for p in pairs]
    if not pairs or any(len(p) != 2 or not set(p) <= {1, 2, 3} or p[0] == p[1] for p in pairs):
        raise ArgumentError(f"invalid pair list {pairs}")
    bound = 4.0 * len(pairs)
    name = "chsh" if len(pairs) == 3 else f"chsh-{len(pairs)}pairs"
    if mode is MonogamyMode.PAIRWISE_OPTIMAL:
        terms = []
        for p in pairs:
            reduced = partial_trace(rho, p)
            if pair_filter is not None:
                reduced = apply_filter(reduced, [pair_filter, pair_filter])
            terms.append(MonogamyTerm(_label(p), max_chsh_value(reduced)))
        return MonogamyReport(name, terms, bound, mode.value)
    if pair_filter is not None:
        raise ArgumentError("per-pair filters are not defined when settings are shared")
    funcs = [chsh().embed([a - 1, b - 1], 3) for a, b in pairs]
    _, values, _ = optimize_sum_of_squares(
        rho, funcs, restarts=params.restarts, sweeps_max=params.sweeps_max, tol=params.tol, seed=params.seed
    )
    terms = [MonogamyTerm(_label(p), v) for p, v in zip(pairs, values)]
    return MonogamyReport(name, terms, bound, mode.value)


def multipartite_monogamy(
    subsystem_states: Sequence[tuple[str, np.ndarray]],
    ineq: CoefficientTensor,
    n: int,
    params: OptimizerParams = OptimizerParams(),
) -> MonogamyReport:
    """Sum of squared optimized Bell values over the m-qubit subsystems of an n-qubit state.

    Pass all binomial(n, m) subsystems, or a single state which then stands
    for every subsystem of a permutation-symmetric state.
    """
    m = ineq.parties
    expected = comb(n, m)
    if len(subsystem_states) not in (1, expected):
        raise ArgumentError(f"need 1 or {expected} subsystem states, got {len(subsystem_states)}")
    for label, rho in subsystem_states:
        if num_qubits(rho) != m:
            raise ShapeError(f"subsystem {label} has {num_qubits(rho)} qubits, {ineq.name} needs {m}")
    if len(subsystem_states) == 1:
        _, rho = subsystem_states[0]
        value = _optimize(rho, ineq, params)
        labels = [_label(c) for c in combinations(range(1, n + 1), m)]
        terms = [MonogamyTerm(lbl, value) for lbl in labels]
    else:
        terms = [MonogamyTerm(lbl, _optimize(rho, ineq, params)) for lbl, rho in subsystem_states]
        terms.sort(key=lambda t: t.label)
    return MonogamyReport(ineq.name, terms, cm_bound(m, n, ineq.lmax))


def _optimize(rho, ineq: CoefficientTensor, params: OptimizerParams) -> float:
    return optimize_bell(
        rho, ineq, restarts=params.restarts, sweeps_max=params.sweeps_max, tol=params.tol, seed=params.seed
    ).value


def subsystem_states(rho_full, m: int, local_filter: LocalFilter | None = None) -> list[tuple[str, np.ndarray]]:
    """Every m-qubit reduced state, optionally filtered qubit by qubit."""
    rho = as_density(rho_full)
    n = num_qubits(rho)
    out = []
    for qubits in combinations(range(1, n + 1), m):
        reduced = partial_trace(rho, qubits)
        if local_filter is not None:
            reduced = apply_filter(reduced, [local_filter] * m)
        out.append((_label(qubits), reduced))
    return out
