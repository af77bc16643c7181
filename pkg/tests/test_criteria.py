from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellmono.criteria import correlation_matrix, horodecki_m, max_chsh_value, ppt_min_eigenvalue
from bellmono.errors import ShapeError
from bellmono.filters import apply_filter, chsh_filter_threshold, uniform_filters
from bellmono.library import reduced_w
from bellmono.states import basis_ket, density_from_vector, local_unitary

from conftest import random_density, random_unitary

RHO3 = reduced_w(3, 2)
PHI_PLUS = density_from_vector((basis_ket("00") + basis_ket("11")) / sqrt(2))


def pt_eigen_oracle(rho):
    """numpy eigenvalues of the index-swapped matrix."""
    t = rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    return np.linalg.eigvalsh(t)


def test_ppt_w_marginal():
    assert abs(ppt_min_eigenvalue(RHO3) - (1 - sqrt(5)) / 6) < 1e-12
    for n in range(3, 13):
        expected = (n - 2 - sqrt((n - 2) ** 2 + 4)) / (2 * n)
        assert abs(ppt_min_eigenvalue(reduced_w(n, 2)) - expected) < 1e-12


def test_ppt_product_and_bell():
    assert abs(ppt_min_eigenvalue(density_from_vector(basis_ket("00")))) < 1e-15
    assert abs(ppt_min_eigenvalue(PHI_PLUS) + 0.5) < 1e-12


def test_ppt_matches_numpy(rng):
    for _ in range(20):
        rho = random_density(rng, 4)
        assert abs(ppt_min_eigenvalue(rho) - pt_eigen_oracle(rho)[0]) < 1e-10


def test_ppt_cut_either_side(rng):
    rho = random_density(rng, 4)
    assert abs(ppt_min_eigenvalue(rho, (1,)) - ppt_min_eigenvalue(rho, (2,))) < 1e-10


def test_correlation_matrix_w_marginal():
    ca = correlation_matrix(RHO3)
    assert np.allclose(ca.u_matrix, np.diag([4 / 9, 4 / 9, 1 / 9]), atol=1e-14)
    assert abs(ca.t_matrix[2, 2] + 1 / 3) < 1e-14
    assert np.allclose(ca.u_eigenvalues, [1 / 9, 4 / 9, 4 / 9], atol=1e-12)
    assert abs(ca.m_value - 8 / 9) < 1e-12
    assert not ca.violates_chsh


def test_correlation_matrix_bell_state():
    ca = correlation_matrix(PHI_PLUS)
    assert np.allclose(ca.t_matrix, np.diag([1, -1, 1]), atol=1e-14)
    assert abs(ca.m_value - 2) < 1e-12
    assert abs(max_chsh_value(PHI_PLUS) - 2 * sqrt(2)) < 1e-12


def test_w_marginal_u_spectrum():
    for n in range(3, 13):
        ca = correlation_matrix(reduced_w(n, 2))
        expected = np.sort([4 / n**2, 4 / n**2, (n - 4) ** 2 / n**2])
        assert np.max(np.abs(ca.u_eigenvalues - expected)) < 1e-10
        assert ca.m_value <= 1 + 1e-12


def test_filtered_w3_closed_form():
    for h in np.linspace(0.05, 1, 20):
        rho = apply_filter(RHO3, uniform_filters(2, h))
        assert abs(horodecki_m(rho) - 8 / (2 + h * h) ** 2) < 1e-12


def test_max_chsh_at_threshold_is_two():
    h = chsh_filter_threshold(3)
    assert abs(max_chsh_value(apply_filter(RHO3, uniform_filters(2, h))) - 2) < 1e-12
    assert abs(max_chsh_value(RHO3) - 2 * sqrt(8 / 9)) < 1e-12


def test_two_qubit_only():
    with pytest.raises(ShapeError):
        correlation_matrix(reduced_w(4, 3))


def test_u_is_t_transpose_t(rng):
    for _ in range(20):
        ca = correlation_matrix(random_density(rng, 4))
        assert np.max(np.abs(ca.u_matrix - ca.t_matrix.T @ ca.t_matrix)) < 1e-12
        assert np.all(ca.u_eigenvalues >= -1e-12) and np.all(ca.u_eigenvalues <= 1 + 1e-9)
        assert 0 <= ca.m_value <= 2 + 1e-9


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_horodecki_local_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, 4)
    rotated = local_unitary(rho, [random_unitary(rng, 2), random_unitary(rng, 2)])
    assert abs(horodecki_m(rho) - horodecki_m(rotated)) < 1e-9


def test_separable_mixtures_are_ppt(rng):
    for _ in range(50):
        k = rng.integers(1, 5)
        weights = rng.dirichlet(np.ones(k))
        rho = sum(w * np.kron(random_density(rng, 2), random_density(rng, 2)) for w in weights)
        assert ppt_min_eigenvalue(rho) >= -1e-12
