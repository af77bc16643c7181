import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellmono.errors import CapacityError, ContractError, ShapeError
from bellmono.linalg import hermitian_eigenvalues, hermitize, jacobi_eigh, kron, kron_all, matmul
from bellmono.states import IDENTITY, SIGMA_X, SIGMA_Z

from conftest import random_unitary


def triple_loop(a, b):
    out = np.zeros((a.shape[0], b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            for k in range(a.shape[1]):
                out[i, j] += a[i, k] * b[k, j]
    return out


def complex_normal(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_matmul_identity_and_pauli():
    assert np.array_equal(matmul(IDENTITY, IDENTITY), IDENTITY)
    assert np.allclose(matmul(SIGMA_X, SIGMA_X), IDENTITY, atol=0)


def test_matmul_matches_triple_loop(rng):
    a, b = complex_normal(rng, (4, 4)), complex_normal(rng, (4, 4))
    assert np.max(np.abs(matmul(a, b) - triple_loop(a, b))) < 1e-12


def test_matmul_rejects_mismatch():
    with pytest.raises(ShapeError):
        matmul(np.eye(2), np.eye(3))


def test_matmul_rejects_non_finite():
    with pytest.raises(ContractError):
        matmul(np.array([[np.nan, 0], [0, 1]]), np.eye(2))


def test_kron_basic_cases():
    assert np.array_equal(kron(IDENTITY, IDENTITY), np.eye(4))
    assert np.array_equal(kron(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]))


def test_kron_mixed_product(rng):
    a, b, c, d = (complex_normal(rng, (2, 2)) for _ in range(4))
    lhs = matmul(kron(a, b), kron(c, d))
    rhs = kron(matmul(a, c), matmul(b, d))
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_kron_dimension_and_trace_law(rng):
    a, b = complex_normal(rng, (2, 2)), complex_normal(rng, (4, 4))
    k = kron(a, b)
    assert k.shape == (8, 8)
    assert abs(np.trace(k) - np.trace(a) * np.trace(b)) < 1e-12


def test_kron_capacity():
    kron_all([IDENTITY] * 5)
    with pytest.raises(CapacityError):
        kron_all([IDENTITY] * 6)


def test_pauli_spectrum():
    assert np.allclose(hermitian_eigenvalues(SIGMA_Z), [-1, 1], atol=1e-14)


def test_eigenvalues_ascending_and_match_numpy(rng):
    for dim in (1, 2, 3, 4, 7, 8, 16, 32):
        a = complex_normal(rng, (dim, dim))
        h = a + a.conj().T
        w = hermitian_eigenvalues(h)
        assert np.all(np.diff(w) >= 0)
        assert np.max(np.abs(w - np.linalg.eigvalsh(h))) < 1e-10


def test_eigenvectors_diagonalize(rng):
    a = complex_normal(rng, (8, 8))
    h = a + a.conj().T
    w, v = jacobi_eigh(h)
    assert np.max(np.abs(h @ v - v * w)) < 1e-10
    assert np.max(np.abs(v.conj().T @ v - np.eye(8))) < 1e-12


def test_degenerate_spectrum():
    h = np.diag([1.0, 1.0, 2.0, 2.0]).astype(complex)
    u = random_unitary(np.random.default_rng(3), 4)
    assert np.allclose(hermitian_eigenvalues(u @ h @ u.conj().T), [1, 1, 2, 2], atol=1e-12)


def test_non_hermitian_rejected():
    with pytest.raises(ContractError):
        hermitian_eigenvalues(np.array([[0, 1], [0, 0]], dtype=complex))


def test_hermitize_absorbs_roundoff():
    h = np.array([[1, 1e-12j], [0, 1]], dtype=complex)
    out = hermitize(h)
    assert np.array_equal(out, out.conj().T)


@settings(max_examples=40, deadline=None)
@given(dim=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_trace_equals_eigenvalue_sum(dim, seed):
    rng = np.random.default_rng(seed)
    a = complex_normal(rng, (dim, dim))
    h = a + a.conj().T
    assert abs(np.sum(hermitian_eigenvalues(h)) - np.trace(h).real) < 1e-9


@settings(max_examples=30, deadline=None)
@given(dim=st.integers(2, 8), seed=st.integers(0, 2**32 - 1))
def test_spectrum_unitarily_invariant(dim, seed):
    rng = np.random.default_rng(seed)
    a = complex_normal(rng, (dim, dim))
    h = a + a.conj().T
    u = random_unitary(rng, dim)
    rotated = u @ h @ u.conj().T
    assert np.max(np.abs(hermitian_eigenvalues(h) - hermitian_eigenvalues(rotated))) < 1e-9
