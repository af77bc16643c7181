"""Bell functions as coefficient tensors, and see-saw maximization.

A Bell function on M parties is a real polynomial in the parties'
observables.  Its coefficients are keyed by index tuples (k_1, ..., k_M)
where k_j = 0 stands for the identity on party j and k_j = s >= 1 for
party j's s-th observable.  Observables are projective, O = n . sigma,
with n a unit Bloch vector.

Parties are positional (0-based); setting indices start at 1, matching the
coefficient keys.

Maximization exploits that the Bell value is linear in every Bloch vector:
fixing all but one, the best unit vector is the normalized coefficient
vector of that slot.  Sweeping over all slots never lowers the value.
Internally the state enters only through its Pauli correlation tensor
T[mu_1, ..., mu_M] = Tr(rho sigma_mu_1 x ... x sigma_mu_M), and all
restarts are advanced together as one batch.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ArgumentError, ContractError, ShapeError
from .linalg import kron_all
from .states import IDENTITY, PAULI_BASIS, PAULIS, as_density, expectation, num_qubits

UNIT_TOL = 1e-12
ZERO_GRADIENT = 1e-12

DEFAULT_RESTARTS = 64
DEFAULT_SWEEPS = 500
DEFAULT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CoefficientTensor:
    name: str
    settings_per_party: tuple[int, ...]
    coefficients: Mapping[tuple[int, ...], float]
    local_bound: float
    lmax: float

    def __post_init__(self):
        object.__setattr__(self, "settings_per_party", tuple(int(n) for n in self.settings_per_party))
        m = len(self.settings_per_party)
        if m < 1 or any(n < 1 for n in self.settings_per_party):
            raise ArgumentError("every party needs at least one setting")
        clean = {}
        for key, c in self.coefficients.items():
            key = tuple(int(k) for k in key)
            if len(key) != m or any(not 0 <= k <= n for k, n in zip(key, self.settings_per_party)):
                raise ArgumentError(f"{self.name}: invalid index tuple {key}")
            if c != 0:
                clean[key] = float(c)
        object.__setattr__(self, "coefficients", clean)
        if self.local_bound <= 0:
            raise ArgumentError("local bound must be positive")

    @property
    def parties(self) -> int:
        return len(self.settings_per_party)

    def dense(self) -> np.ndarray:
        """Coefficients as an array of shape (n_1 + 1, ..., n_M + 1)."""
        c = np.zeros([n + 1 for n in self.settings_per_party])
        for key, value in self.coefficients.items():
            c[key] = value
        return c

    def deterministic_values(self) -> np.ndarray:
        """Value of the function for every +-1 assignment to every setting."""
        slots = [(j, s) for j, n in enumerate(self.settings_per_party) for s in range(1, n + 1)]
        signs = np.array(list(itertools.product((1.0, -1.0), repeat=len(slots))))
        column = {slot: i for i, slot in enumerate(slots)}
        values = np.zeros(len(signs))
        for key, c in self.coefficients.items():
            term = np.full(len(signs), c)
            for j, k in enumerate(key):
                if k:
                    term = term * signs[:, column[(j, k)]]
            values += term
        return values

    def deterministic_max(self) -> float:
        return float(self.deterministic_values().max())

    def embed(self, parties: Sequence[int], total: int, settings: int = 2) -> CoefficientTensor:
        """The same function acting on ``parties`` of a larger ``total``-party system."""
        if len(parties) != self.parties or len(set(parties)) != len(parties):
            raise ArgumentError("need one distinct target party per party")
        spp = [settings] * total
        for src, dst in enumerate(parties):
            if self.settings_per_party[src] > settings:
                raise ArgumentError("embedding would drop settings")
            spp[dst] = settings
        coefficients = {}
        for key, c in self.coefficients.items():
            new = [0] * total
            for src, dst in enumerate(parties):
                new[dst] = key[src]
            coefficients[tuple(new)] = c
        label = "".join(chr(ord("A") + p) for p in parties)
        return CoefficientTensor(f"{self.name}[{label}]", tuple(spp), coefficients, self.local_bound, self.lmax)


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


@dataclass(frozen=True, eq=False)
class MeasurementSettings:
    """One unit Bloch vector per (party, setting); ``vectors[j]`` has shape (n_j, 3)."""

    vectors: tuple[np.ndarray, ...] = field()

    def __post_init__(self):
        vs = []
        for v in self.vectors:
            v = np.array(v, dtype=float).reshape(-1, 3)
            norms = np.linalg.norm(v, axis=1)
            if np.any(np.abs(norms - 1.0) > UNIT_TOL):
                raise ContractError(f"setting vectors must be unit length, got norms {norms}")
            v.setflags(write=False)
            vs.append(v)
        object.__setattr__(self, "vectors", tuple(vs))

    @classmethod
    def random(cls, settings_per_party: Sequence[int], rng: np.random.Generator) -> MeasurementSettings:
        """Independent uniformly distributed unit vectors."""
        return cls(tuple(_random_unit(rng, n) for n in settings_per_party))

    @property
    def settings_per_party(self) -> tuple[int, ...]:
        return tuple(len(v) for v in self.vectors)

    def vector(self, party: int, setting: int) -> np.ndarray:
        return self.vectors[party][setting - 1]

    def observable(self, party: int, setting: int) -> np.ndarray:
        if setting == 0:
            return IDENTITY
        n = self.vector(party, setting)
        return sum(c * p for c, p in zip(n, PAULIS))

    def replace(self, party: int, setting: int, vector) -> MeasurementSettings:
        vs = [v.copy() for v in self.vectors]
        vs[party][setting - 1] = vector
        return MeasurementSettings(tuple(vs))

    def __eq__(self, other):
        if not isinstance(other, MeasurementSettings):
            return NotImplemented
        return self.settings_per_party == other.settings_per_party and all(
            np.array_equal(a, b) for a, b in zip(self.vectors, other.vectors)
        )


def _random_unit(rng: np.random.Generator, count: int) -> np.ndarray:
    v = rng.standard_normal((count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _check_settings(ineq: CoefficientTensor, settings: MeasurementSettings) -> None:
    if settings.settings_per_party != ineq.settings_per_party:
        raise ShapeError(
            f"settings {settings.settings_per_party} do not match {ineq.name} {ineq.settings_per_party}"
        )


# -- catalog -----------------------------------------------------------------

CHSH_TERMS = {(1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): -1}


def chsh() -> CoefficientTensor:
    """A1(B1 + B2) + A2(B1 - B2)."""
    return CoefficientTensor("chsh", (2, 2), CHSH_TERMS, 2.0, 2.0)


def mermin3() -> CoefficientTensor:
    terms = {(1, 1, 2): 1, (1, 2, 1): 1, (2, 1, 1): 1, (2, 2, 2): -1}
    return CoefficientTensor("mermin3", (2, 2, 2), terms, 2.0, 2.0)


def svetlichny3() -> CoefficientTensor:
    terms = {
        (1, 1, 1): 1, (1, 2, 1): 1,
        (1, 1, 2): 1, (1, 2, 2): -1,
        (2, 1, 1): 1, (2, 2, 1): -1,
        (2, 1, 2): -1, (2, 2, 2): -1,
    }  # fmt: skip
    return CoefficientTensor("svetlichny3", (2, 2, 2), terms, 4.0, 4.0)


def dda3() -> CoefficientTensor:
    """A1(B1 + B2) + A2(B1 - B2)C1, with a single setting on C."""
    terms = {(1, 1, 0): 1, (1, 2, 0): 1, (2, 1, 1): 1, (2, 2, 1): -1}
    return CoefficientTensor("dda3", (2, 2, 1), terms, 2.0, 2.0)


def dda4() -> CoefficientTensor:
    """A1 B1 C1 (D1 + D2) + A2 B2 C2 (D1 - D2)."""
    terms = {(1, 1, 1, 1): 1, (1, 1, 1, 2): 1, (2, 2, 2, 1): 1, (2, 2, 2, 2): -1}
    return CoefficientTensor("dda4", (2, 2, 2, 2), terms, 2.0, 2.0)


def facet_m(m: int) -> CoefficientTensor:
    """Minimal-scenario facet on m parties, (I_CHSH - 2) prod_k (1 + X_k) + 2 <= 2.

    Parties beyond the first two measure a single observable X_k.
    """
    if not 3 <= m <= 6:
        raise ArgumentError(f"facet inequality is provided for 3 <= m <= 6, got {m}")
    poly: dict[tuple[int, ...], float] = {k + (0,) * (m - 2): float(c) for k, c in CHSH_TERMS.items()}
    poly[(0,) * m] = -2.0
    for party in range(2, m):
        grown = dict(poly)
        for key, c in poly.items():
            hit = key[:party] + (1,) + key[party + 1 :]
            grown[hit] = grown.get(hit, 0.0) + c
        poly = grown
    poly[(0,) * m] += 2.0
    return CoefficientTensor(f"facet{m}", (2, 2) + (1,) * (m - 2), poly, 2.0, 2.0)


def catalog() -> list[CoefficientTensor]:
    """Every Bell function used in the reproduction, each with a verified local bound."""
    entries = [chsh(), mermin3(), svetlichny3(), dda3(), dda4()] + [facet_m(m) for m in range(3, 7)]
    for ineq in entries:
        if abs(ineq.deterministic_max() - ineq.local_bound) > 1e-12:
            raise ContractError(f"{ineq.name}: local bound does not match deterministic maximum")
    return entries


def get_inequality(name: str) -> CoefficientTensor:
    key = name.lower()
    for ineq in catalog():
        if ineq.name == key:
            return ineq
    raise ArgumentError(f"unknown inequality {name!r}; known: {[i.name for i in catalog()]}")


# -- operator path ---------------------------------------------------------


def bell_operator(ineq: CoefficientTensor, settings: MeasurementSettings) -> np.ndarray:
    """sum_k c(k) O_1(k_1) x ... x O_M(k_M) as a 2^M x 2^M matrix."""
    _check_settings(ineq, settings)
    dim = 2**ineq.parties
    op = np.zeros((dim, dim), dtype=complex)
    for key, c in ineq.coefficients.items():
        op += c * kron_all(settings.observable(j, k) for j, k in enumerate(key))
    return op


def bell_value(rho, ineq: CoefficientTensor, settings: MeasurementSettings) -> float:
    rho = as_density(rho, check_psd=False)
    if num_qubits(rho) != ineq.parties:
        raise ShapeError(f"{ineq.name} acts on {ineq.parties} qubits, state has {num_qubits(rho)}")
    return expectation(rho, bell_operator(ineq, settings))


# -- correlation-tensor path -----------------------------------------------


def correlation_tensor(rho) -> np.ndarray:
    """T[mu_1, ..., mu_M] = Tr(rho sigma_mu_1 x ... x sigma_mu_M) with sigma_0 = I."""
    rho = as_density(rho, check_psd=False)
    m = num_qubits(rho)
    basis = np.array(PAULI_BASIS)
    t = rho.reshape([2] * (2 * m))
    # with r parties left, axes are (kets..., bras..., finished Pauli axes...);
    # Tr(sigma rho) = sum_ij sigma[j, i] rho[i, j]
    for r in range(m, 0, -1):
        t = np.einsum("ij...,mji->...m", np.moveaxis(t, r, 1), basis)
    if np.max(np.abs(t.imag)) > 1e-10:
        raise ContractError("correlation tensor is not real")
    return np.ascontiguousarray(t.real)


def _setting_frames(vectors: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Per party, map setting index -> Pauli-basis row; shape (R, n_j + 1, 4)."""
    frames = []
    for v in vectors:
        r, n, _ = v.shape
        f = np.zeros((r, n + 1, 4))
        f[:, 0, 0] = 1.0
        f[:, 1:, 1:] = v
        frames.append(f)
    return frames


def _contract(t: np.ndarray, frames: list[np.ndarray], skip: int | None = None) -> np.ndarray:
    """Contract the Pauli axes of ``t`` with every party frame except ``skip``.

    ``t`` has a leading batch axis (possibly of length one).  Axis 1 + j of
    the result is party j's setting index, or its raw Pauli index if j is
    skipped.
    """
    out = t
    for j, f in enumerate(frames):
        if j == skip:
            continue
        moved = np.moveaxis(out, 1 + j, -1)
        shape = moved.shape
        flat = moved.reshape(shape[0], -1, 4)
        flat = flat @ np.swapaxes(f, 1, 2)
        out = np.moveaxis(flat.reshape((flat.shape[0],) + shape[1:-1] + (f.shape[1],)), -1, 1 + j)
    return out


def _values(t: np.ndarray, coeffs: np.ndarray, frames: list[np.ndarray]) -> np.ndarray:
    e = _contract(t[None], frames)
    r = max(f.shape[0] for f in frames)
    e = np.broadcast_to(e, (r,) + e.shape[1:]).reshape(r, -1)
    return e @ coeffs.ravel()


def _slot_gradients(t: np.ndarray, coeffs: np.ndarray, frames: list[np.ndarray], party: int) -> np.ndarray:
    """Coefficient vectors of every setting of ``party``; shape (R, n_party, 3).

    The Bell value equals grad[:, s - 1] . n(party, s) plus terms not
    involving that setting.
    """
    env = np.moveaxis(_contract(t[None], frames, skip=party), 1 + party, -1)
    r = max(f.shape[0] for f in frames)
    env = np.broadcast_to(env, (r,) + env.shape[1:]).reshape(r, -1, 4)
    n = coeffs.shape[party] - 1
    grads = np.empty((r, n, 3))
    for s in range(1, n + 1):
        c = np.take(coeffs, s, axis=party).ravel()
        grads[:, s - 1] = (c @ env)[:, 1:]
    return grads


def _normalize_rows(g: np.ndarray, previous: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(g, axis=-1, keepdims=True)
    safe = np.where(norm < ZERO_GRADIENT, 1.0, norm)
    return np.where(norm < ZERO_GRADIENT, previous, g / safe)


def seesaw_step(rho, ineq: CoefficientTensor, settings: MeasurementSettings, party: int, setting: int) -> np.ndarray:
    """Best unit vector for one slot with every other slot held fixed.

    If the slot's coefficient vector vanishes (below 1e-12) the current
    vector is returned unchanged.
    """
    _check_settings(ineq, settings)
    if not 0 <= party < ineq.parties or not 1 <= setting <= ineq.settings_per_party[party]:
        raise ArgumentError(f"no slot (party={party}, setting={setting}) in {ineq.name}")
    t = correlation_tensor(rho)
    frames = _setting_frames([v[None] for v in settings.vectors])
    g = _slot_gradients(t, ineq.dense(), frames, party)[0, setting - 1]
    return _normalize_rows(g, settings.vector(party, setting))


class SeesawRun(NamedTuple):
    values: np.ndarray  # (R,) final value per restart
    vectors: list[np.ndarray]  # per party, (R, n_j, 3)
    sweeps: np.ndarray  # (R,) sweeps used per restart
    history: list[np.ndarray] | None  # value after every sweep, if recorded


def _run_seesaw(
    t: np.ndarray,
    coeffs: np.ndarray,
    start: Sequence[np.ndarray],
    sweeps_max: int,
    tol: float,
    stop_above: float | None = None,
    record: bool = False,
) -> SeesawRun:
    """Advance a batch of restarts; each freezes once its sweep gain drops below ``tol``."""
    vectors = [np.array(v, dtype=float) for v in start]
    r = vectors[0].shape[0]
    frames = _setting_frames(vectors)
    current = _values(t, coeffs, frames)
    active = np.ones(r, dtype=bool)
    used = np.zeros(r, dtype=int)
    history = [current.copy()] if record else None
    for _ in range(sweeps_max):
        if not active.any():
            break
        if stop_above is not None and np.any(current > stop_above):
            break
        for j in range(len(vectors)):
            grads = _slot_gradients(t, coeffs, frames, j)
            updated = _normalize_rows(grads, vectors[j])
            vectors[j] = np.where(active[:, None, None], updated, vectors[j])
            frames[j][:, 1:, 1:] = vectors[j]
        new = _values(t, coeffs, frames)
        used += active
        gain = new - current
        current = np.where(active, new, current)
        active &= gain >= tol
        if record:
            history.append(current.copy())
    return SeesawRun(current, vectors, used, history)


def restart_rng(seed: int, restart: int) -> np.random.Generator:
    """Private random stream of one restart, derived from the run seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(restart,)))


def _start_vectors(ineq: CoefficientTensor, seed: int, restarts: Sequence[int]) -> list[np.ndarray]:
    draws = [MeasurementSettings.random(ineq.settings_per_party, restart_rng(seed, i)).vectors for i in restarts]
    return [np.stack([d[j] for d in draws]) for j in range(ineq.parties)]


class BellMaximum(NamedTuple):
    value: float
    settings: MeasurementSettings


def optimize_bell(
    rho,
    ineq: CoefficientTensor,
    restarts: int = DEFAULT_RESTARTS,
    sweeps_max: int = DEFAULT_SWEEPS,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    workers: int = 1,
    stop_above: float | None = None,
) -> BellMaximum:
    """Multi-start see-saw maximum of the Bell value over projective settings.

    Restart ``i`` starts from uniformly random unit vectors drawn from
    ``restart_rng(seed, i)``.  ``workers > 1`` splits the restarts across
    threads; the result is identical to the single-worker run.

    ``stop_above`` ends the search as soon as some restart exceeds it.  The
    returned value is then only a witness that the maximum is above the
    threshold, which is all a violation test needs.
    """
    if restarts < 1:
        raise ArgumentError("need at least one restart")
    rho = as_density(rho)
    if num_qubits(rho) != ineq.parties:
        raise ShapeError(f"{ineq.name} acts on {ineq.parties} qubits, state has {num_qubits(rho)}")
    t = correlation_tensor(rho)
    coeffs = ineq.dense()

    def run(indices):
        return _run_seesaw(t, coeffs, _start_vectors(ineq, seed, indices), sweeps_max, tol, stop_above)

    chunks = [list(c) for c in np.array_split(np.arange(restarts), max(1, min(workers, restarts)))]
    if len(chunks) == 1:
        results = [run(chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            results = list(pool.map(run, chunks))
    values = np.concatenate([res.values for res in results])
    vectors = [np.concatenate([res.vectors[j] for res in results]) for j in range(ineq.parties)]
    best = int(np.argmax(values))
    settings = MeasurementSettings(tuple(_renormalize(v[best]) for v in vectors))
    return BellMaximum(float(values[best]), settings)


def _renormalize(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def optimize_sum_of_squares(
    rho,
    ineqs: Sequence[CoefficientTensor],
    restarts: int = DEFAULT_RESTARTS,
    sweeps_max: int = DEFAULT_SWEEPS,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> tuple[float, list[float], MeasurementSettings]:
    """Maximize sum_p <B_p>^2 with one shared setting collection.

    All functions must act on the same parties with the same settings.  The
    objective is convex in each Bloch vector, so replacing a vector by the
    normalized gradient sum_p <B_p> grad_p never lowers it.

    Returns ``(sum_of_squares, per-function values, settings)``.
    """
    if not ineqs:
        raise ArgumentError("need at least one Bell function")
    spp = ineqs[0].settings_per_party
    if any(i.settings_per_party != spp for i in ineqs):
        raise ShapeError("all Bell functions must share the settings layout")
    rho = as_density(rho)
    t = correlation_tensor(rho)
    coeffs = [i.dense() for i in ineqs]
    best = None
    for restart in range(restarts):
        start = MeasurementSettings.random(spp, restart_rng(seed, restart)).vectors
        vectors = [v[None].copy() for v in start]
        frames = _setting_frames(vectors)
        values = np.array([_values(t, c, frames)[0] for c in coeffs])
        objective = float(values @ values)
        for _ in range(sweeps_max):
            for j in range(len(vectors)):
                grads = [_slot_gradients(t, c, frames, j)[0] for c in coeffs]
                for s in range(spp[j]):
                    old = vectors[j][0, s].copy()
                    direction = sum(v * g[s] for v, g in zip(values, grads))
                    new = _normalize_rows(direction, old)
                    values = values + np.array([g[s] @ (new - old) for g in grads])
                    vectors[j][0, s] = new
                frames[j][0, 1:, 1:] = vectors[j][0]
            values = np.array([_values(t, c, frames)[0] for c in coeffs])
            new_objective = float(values @ values)
            gain = new_objective - objective
            objective = new_objective
            if gain < tol:
                break
        if best is None or objective > best[0]:
            best = (objective, values.tolist(), MeasurementSettings(tuple(_renormalize(v[0]) for v in vectors)))
    return best
