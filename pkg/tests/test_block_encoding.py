import numpy as np
import pytest

from catalytic_tomography.block_encoding import (assemble_lcu, gram_schmidt_completion, prep_sqrt_f,
                                                 unitarity_error, verify_block)
from catalytic_tomography.filtered import (TimeGrid, filtered_exact, filtered_riemann,
                                           riemann_error_bound)
from catalytic_tomography.filters import Gaussian
from catalytic_tomography.linalg import hermitian_eig, operator_norm
from catalytic_tomography.models import X, Z, build_random_gapped, pauli_string


def test_prep_flat_filter_is_uniform():
    # a very wide Gaussian is flat to 1e-12 on a short grid
    prep = prep_sqrt_f(Gaussian(1e-7), TimeGrid(0.1, 4))
    np.testing.assert_allclose(prep.amplitudes, np.full(16, 0.25), atol=1e-12)


def test_prep_gaussian_symmetry():
    grid = TimeGrid(0.2, 6)
    prep = prep_sqrt_f(Gaussian(1.0), grid)
    a = prep.amplitudes
    assert np.linalg.norm(a) == pytest.approx(1.0, abs=1e-14)
    mid = -grid.start_index
    np.testing.assert_allclose(a[mid + 1:], a[mid - 1:0:-1], atol=1e-15)
    lam = filtered_riemann(np.eye(2), np.zeros((2, 2)), Gaussian(1.0), grid).lam
    assert prep.lam == pytest.approx(lam, abs=1e-12)
    u = prep.unitary
    np.testing.assert_allclose(u[:, 0], a, atol=1e-15)
    assert np.max(np.abs(u.conj().T @ u - np.eye(64))) < 1e-12


def test_gram_schmidt_completion_unitary():
    v = np.array([1, 2j, -1, 0.5])
    u = gram_schmidt_completion(v)
    assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12
    np.testing.assert_allclose(u[:, 0], v / np.linalg.norm(v))


def test_single_time_point_reduces_to_A():
    circ = assemble_lcu(X, Z, Gaussian(1.0), TimeGrid(1.0, 0))
    np.testing.assert_allclose(circ.block(), X, atol=1e-14)


def test_zero_hamiltonian_block():
    grid = TimeGrid.from_span(3.0, 5)
    circ = assemble_lcu(X, np.zeros((2, 2)), Gaussian(1.0), grid)
    np.testing.assert_allclose(circ.block(), X, atol=1e-13)
    assert operator_norm(circ.lam * circ.block() - circ.lam * X) <= 1e-12


def test_pauli_circuit_matches_riemann():
    grid = TimeGrid.from_span(6.0, 8)
    spec = Gaussian(1.0)
    circ = assemble_lcu(X, Z, spec, grid)
    F = filtered_riemann(X, Z, spec, grid)
    assert operator_norm(circ.block() - F.matrix / F.lam) <= 1e-10
    assert unitarity_error(circ) < 1e-10


@pytest.mark.parametrize("n,k", [(1, 3), (2, 5), (3, 4)])
def test_random_circuits(n, k):
    H = build_random_gapped(n, 10 * n + k, 1.0)
    A = pauli_string({0: "X", n - 1: "Z"} if n > 1 else {0: "Y"}, n)
    grid = TimeGrid.from_span(4.0, k)
    spec = Gaussian(0.8)
    circ = assemble_lcu(A, H, spec, grid)
    F = filtered_riemann(A, H, spec, grid)
    assert verify_block(circ, F) <= 1e-9
    exact = filtered_exact(A, hermitian_eig(H), spec).matrix
    assert operator_norm(circ.lam * circ.block() - exact) <= riemann_error_bound(A, H, spec, grid) + 1e-9


def test_postselect_matches_block():
    grid = TimeGrid.from_span(3.0, 3)
    circ = assemble_lcu(X, Z, Gaussian(1.0), grid)
    psi = np.array([0.6, 0.8j])
    full = circ.unitary @ np.concatenate([psi, np.zeros(2 * (grid.size - 1))])
    np.testing.assert_allclose(circ.apply_and_postselect(psi), full[:2], atol=1e-14)


def test_rejects_non_unitary_observable():
    with pytest.raises(ValueError, match="unitary Hermitian"):
        assemble_lcu(np.diag([1.0, 0.5]), Z, Gaussian(1.0), TimeGrid(0.5, 2))


def test_verify_block_rejects_mismatched_grid():
    spec = Gaussian(1.0)
    circ = assemble_lcu(X, Z, spec, TimeGrid(0.5, 3))
    with pytest.raises(ValueError):
        verify_block(circ, filtered_riemann(X, Z, spec, TimeGrid(0.25, 3)))
