import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellmono.errors import ArgumentError, ContractError, ShapeError
from bellmono.library import ghz_state, w_state
from bellmono.states import (
    IDENTITY,
    SIGMA_X,
    SIGMA_Z,
    as_density,
    as_ket,
    basis_ket,
    density_from_vector,
    expectation,
    mixture,
    partial_trace,
    partial_transpose,
    permute_qubits,
)

from conftest import random_density, random_ket

PHI_PLUS = (basis_ket("00") + basis_ket("11")) / np.sqrt(2)


def trace_out_last(rho):
    """Explicit sum over the last qubit's basis, <k| rho |k>."""
    d = rho.shape[0] // 2
    eye = np.eye(d)
    out = np.zeros((d, d), dtype=complex)
    for k in range(2):
        e = np.kron(eye, np.eye(2)[:, [k]])
        out += e.T @ rho @ e
    return out


def test_basis_projector():
    assert np.array_equal(density_from_vector(basis_ket("0")), np.diag([1, 0]))


def test_w3_projector_is_pure():
    rho = density_from_vector(w_state(3))
    assert rho.shape == (8, 8)
    assert abs(np.trace(rho) - 1) < 1e-12
    assert abs(np.trace(rho @ rho) - 1) < 1e-12


def test_bell_projector_entries():
    rho = density_from_vector(PHI_PLUS)
    assert np.count_nonzero(np.abs(rho - 0.5) < 1e-15) == 4


def test_ket_validation():
    with pytest.raises(ContractError):
        as_ket([1, 1])
    with pytest.raises(ShapeError):
        as_ket(np.ones(3) / np.sqrt(3))
    with pytest.raises(ArgumentError):
        basis_ket("012")


def test_density_validation():
    with pytest.raises(ContractError):
        as_density(np.eye(2))
    with pytest.raises(ContractError):
        as_density(np.diag([1.5, -0.5]))
    with pytest.raises(ShapeError):
        as_density(np.eye(3) / 3)


def test_mixture():
    rho = mixture([0.25, 0.75], [basis_ket("00"), PHI_PLUS])
    assert abs(rho[0, 0] - (0.25 + 0.375)) < 1e-15
    with pytest.raises(ContractError):
        mixture([0.5, 0.6], [basis_ket("00"), PHI_PLUS])


def test_partial_trace_ghz_is_classical():
    rho = partial_trace(density_from_vector(ghz_state(3)), [1, 2])
    assert np.allclose(rho, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)


def test_partial_trace_w3():
    rho = partial_trace(density_from_vector(w_state(3)), [1, 2])
    expected = np.array([[1, 0, 0, 0], [0, 1, 1, 0], [0, 1, 1, 0], [0, 0, 0, 0]]) / 3
    expected[0, 0] = 1 / 3
    assert np.allclose(rho, expected, atol=1e-15)


def test_partial_trace_product(rng):
    a, b = random_density(rng, 2), random_density(rng, 4)
    assert np.allclose(partial_trace(np.kron(a, b), [1]), a, atol=1e-14)
    assert np.allclose(partial_trace(np.kron(a, b), [2, 3]), b, atol=1e-14)


def test_partial_trace_matches_explicit_sum(rng):
    rho = random_density(rng, 8)
    assert np.allclose(partial_trace(rho, [1, 2]), trace_out_last(rho), atol=1e-14)


def test_partial_trace_keeps_requested_order(rng):
    a, b = random_density(rng, 2), random_density(rng, 2)
    assert np.allclose(partial_trace(np.kron(a, b), [2, 1]), np.kron(b, a), atol=1e-14)


def test_partial_trace_all_and_nested(rng):
    rho = random_density(rng, 8)
    assert np.allclose(partial_trace(rho, [1, 2, 3]), rho, atol=0)
    nested = partial_trace(partial_trace(rho, [1, 2]), [1])
    assert np.max(np.abs(nested - partial_trace(rho, [1]))) < 1e-12


def test_partial_trace_bad_indices():
    with pytest.raises(ArgumentError):
        partial_trace(np.eye(4) / 4, [3])
    with pytest.raises(ArgumentError):
        partial_trace(np.eye(4) / 4, [1, 1])


def test_partial_transpose_diagonal_unchanged():
    rho = np.diag([0.1, 0.2, 0.3, 0.4]).astype(complex)
    assert np.array_equal(partial_transpose(rho, [2]), rho)


def test_partial_transpose_bell_state():
    pt = partial_transpose(density_from_vector(PHI_PLUS), [2])
    assert abs(np.linalg.eigvalsh(pt)[0] + 0.5) < 1e-12


def test_partial_transpose_properties(rng):
    rho = random_density(rng, 8)
    pt = partial_transpose(rho, [2])
    assert abs(np.trace(pt) - 1) < 1e-12
    assert np.max(np.abs(pt - pt.conj().T)) < 1e-14
    assert np.array_equal(partial_transpose(pt, [2]), rho)


def test_expectation_cases():
    rho3 = partial_trace(density_from_vector(w_state(3)), [1, 2])
    assert abs(expectation(rho3, np.eye(4)) - 1) < 1e-14
    assert abs(expectation(rho3, np.kron(SIGMA_Z, SIGMA_Z)) + 1 / 3) < 1e-14
    assert abs(expectation(density_from_vector(PHI_PLUS), np.kron(SIGMA_X, SIGMA_X)) - 1) < 1e-14
    with pytest.raises(ShapeError):
        expectation(rho3, IDENTITY)


def test_permute_qubits():
    v = basis_ket("011")
    assert np.array_equal(permute_qubits(v, [3, 1, 2]), basis_ket("101"))


@settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 5), seed=st.integers(0, 2**32 - 1), data=st.data())
def test_complementary_spectra(n, seed, data):
    rng = np.random.default_rng(seed)
    rho = density_from_vector(random_ket(rng, 2**n))
    k = data.draw(st.integers(1, n - 1))
    keep = sorted(data.draw(st.permutations(range(1, n + 1)))[:k])
    rest = [q for q in range(1, n + 1) if q not in keep]
    a = np.linalg.eigvalsh(partial_trace(rho, keep))
    b = np.linalg.eigvalsh(partial_trace(rho, rest))
    a, b = a[a > 1e-9], b[b > 1e-9]
    assert len(a) == len(b)
    assert np.allclose(np.sort(a), np.sort(b), atol=1e-9)
