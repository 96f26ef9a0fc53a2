import numpy as np
import pytest
from hypothesis import given, strategies as st

from catalytic_tomography.filtered import (TimeGrid, block_diag_leakage, bohr_decompose,
                                           diagonal_value, filtered_exact, filtered_riemann,
                                           heisenberg_evolve, lcu_weights, riemann_error_bound)
from catalytic_tomography.filters import Bump, Gaussian, StepFreq, sup_derivative, tail_mass
from catalytic_tomography.linalg import hermitian_eig, operator_norm, unitary_exp
from catalytic_tomography.models import (X, Y, Z, build_random_gapped, build_single_qubit,
                                         random_observable, spectral_data)
from catalytic_tomography.protocol import symmetrize
from conftest import random_hermitian

SQRT2PI = np.sqrt(2 * np.pi)
KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)


def test_time_grid_layout():
    g = TimeGrid(0.5, 3)
    np.testing.assert_allclose(g.points, 0.5 * np.arange(-4, 4))
    assert g.size == 8 and g.T == 2.0
    assert TimeGrid.from_span(6.0, 10).T == pytest.approx(6.0)
    np.testing.assert_array_equal(TimeGrid(1.0, 0).points, [0.0])


def test_bohr_pauli_example():
    dec = bohr_decompose(X, hermitian_eig(Z))
    comps = dict(zip(np.round(dec.frequencies, 12), dec.components))
    np.testing.assert_allclose(comps[2.0], np.outer(KET0, KET1), atol=1e-14)
    np.testing.assert_allclose(comps[-2.0], np.outer(KET1, KET0), atol=1e-14)
    assert not np.any(comps[0.0])


def test_bohr_commuting_observable():
    eig = hermitian_eig(np.diag([0.0, 1.0, 3.0]))
    A = np.diag([2.0, -1.0, 0.5])
    dec = bohr_decompose(A, eig)
    nonzero = [(nu, c) for nu, c in zip(dec.frequencies, dec.components) if np.any(np.abs(c) > 1e-14)]
    assert len(nonzero) == 1 and nonzero[0][0] == 0.0
    np.testing.assert_allclose(nonzero[0][1], A)


def test_bohr_reconstruction(rng):
    for _ in range(3):
        H = random_hermitian(16, rng)
        A = random_hermitian(16, rng)
        dec = bohr_decompose(A, hermitian_eig(H))
        assert np.max(np.abs(dec.total() - A)) < 1e-10


def test_heisenberg_examples():
    np.testing.assert_allclose(heisenberg_evolve(X, Z, 0.0), X)
    np.testing.assert_allclose(heisenberg_evolve(X, Z, np.pi / 4), -Y, atol=1e-14)
    np.testing.assert_allclose(heisenberg_evolve(Z, Z, 1.7), Z, atol=1e-14)


@given(seed=st.integers(0, 10**6), t=st.floats(-4, 4))
def test_heisenberg_matches_bohr_expansion(seed, t):
    rng = np.random.default_rng(seed)
    H, A = random_hermitian(6, rng), random_hermitian(6, rng)
    dec = bohr_decompose(A, hermitian_eig(H))
    series = sum(c * np.exp(1j * nu * t) for nu, c in zip(dec.frequencies, dec.components))
    assert np.max(np.abs(heisenberg_evolve(A, H, t) - series)) < 1e-9


def test_exact_trivial_filters(rng):
    H, A = random_hermitian(8, rng), random_hermitian(8, rng)
    eig = hermitian_eig(H)
    np.testing.assert_allclose(filtered_exact(A, eig, Gaussian(np.inf)).matrix, A, atol=1e-12)
    # A a function of H: only nu = 0 survives
    fA = eig.from_eigenbasis(np.diag(np.cos(eig.eigenvalues)))
    np.testing.assert_allclose(filtered_exact(fA, eig, Gaussian(0.3)).matrix, fA, atol=1e-12)


def test_exact_step_filter_pauli():
    F = filtered_exact(X, hermitian_eig(Z), StepFreq(1.5)).matrix
    np.testing.assert_allclose(F, np.outer(KET1, KET0), atol=1e-14)


def test_exact_against_direct_quadrature():
    # oracle: trapezoid integration of the Heisenberg trajectory, unrelated to the Bohr route
    rng = np.random.default_rng(8)
    H, A = random_hermitian(4, rng), random_hermitian(4, rng)
    spec = Gaussian(0.9)
    ts = np.linspace(-9.0, 9.0, 3601)
    w = spec.sigma * np.exp(-0.5 * (spec.sigma * ts) ** 2) / SQRT2PI
    w[[0, -1]] *= 0.5
    acc = sum(wt * heisenberg_evolve(A, H, t) for t, wt in zip(ts, w)) * (ts[1] - ts[0])
    assert np.max(np.abs(acc - filtered_exact(A, hermitian_eig(H), spec).matrix)) < 1e-6


def test_riemann_commuting_case():
    eig = hermitian_eig(np.diag([0.0, 1.0]))
    A = np.diag([1.0, -1.0])
    spec = Gaussian(1.0)
    for k in (4, 8):
        F = filtered_riemann(A, eig, spec, TimeGrid.from_span(6.0, k))
        np.testing.assert_allclose(F.matrix, F.lam * A, atol=1e-14)
    assert F.lam == pytest.approx(1.0, abs=1e-7)


def test_riemann_routes_agree(rng):
    H, A = random_hermitian(4, rng), random_hermitian(4, rng)
    grid = TimeGrid.from_span(4.0, 5)
    a = filtered_riemann(A, H, Gaussian(1.0), grid, method="eigenbasis").matrix
    b = filtered_riemann(A, H, Gaussian(1.0), grid, method="direct").matrix
    assert np.max(np.abs(a - b)) < 1e-11


@pytest.mark.parametrize("k", [10, 12])
def test_riemann_within_bound(k):
    rng = np.random.default_rng(11)
    H, A = random_hermitian(8, rng, 0.5), random_hermitian(8, rng, 0.5)
    eig = hermitian_eig(H)
    grid = TimeGrid.from_span(6.0, k)
    F = filtered_riemann(A, eig, Gaussian(1.0), grid)
    err = operator_norm(F.matrix - filtered_exact(A, eig, Gaussian(1.0)).matrix)
    assert err <= riemann_error_bound(A, eig, Gaussian(1.0), grid)


def test_riemann_first_order_convergence():
    rng = np.random.default_rng(2)
    H, A = random_hermitian(4, rng, 0.5), random_hermitian(4, rng, 0.5)
    eig = hermitian_eig(H)
    spec = Gaussian(1.0)
    T = 1.5
    exact = filtered_exact(A, eig, spec, T=T).matrix
    errs = [operator_norm(filtered_riemann(A, eig, spec, TimeGrid.from_span(T, k)).matrix - exact)
            for k in (7, 8)]
    assert 1.7 <= errs[0] / errs[1] <= 2.3


def test_bound_limits():
    rng = np.random.default_rng(3)
    H = random_hermitian(4, rng)
    disc, tail = riemann_error_bound(np.eye(4), H, Gaussian(1.0),
                                     TimeGrid.from_span(3.0, 20), parts=True)
    assert disc < 1e-4
    assert tail == pytest.approx(tail_mass(Gaussian(1.0), 3.0)[0])
    # commuting case: discretization is ||A|| sup|f'| 2T^2 / (|S| sqrt(2 pi))
    grid = TimeGrid.from_span(2.0, 6)
    d, _ = riemann_error_bound(np.eye(4), H, Gaussian(1.0), grid, parts=True)
    assert d == pytest.approx(2 * 4.0 * sup_derivative(Gaussian(1.0)) / (64 * SQRT2PI))


def test_leakage_examples():
    H = build_random_gapped(3, 4, 2.0)
    sd = spectral_data(H)
    A = random_observable(3, np.random.default_rng(0))
    leak = block_diag_leakage(filtered_exact(A, sd.eigensystem, Gaussian(1.0)), sd.ground_state)
    assert leak <= np.exp(-2.0)
    assert block_diag_leakage(filtered_exact(A, sd.eigensystem, Bump(2.0, 64)), sd.ground_state) <= 1e-8
    fA = sd.eigensystem.from_eigenbasis(np.diag(np.arange(8.0)))
    assert block_diag_leakage(fA, sd.ground_state) < 1e-12


def test_leakage_is_off_block_norm(rng):
    M = random_hermitian(5, rng)
    psi = np.zeros(5, dtype=complex)
    psi[0] = 1
    assert block_diag_leakage(M, psi) == pytest.approx(np.linalg.norm(M[1:, 0]))


def test_diagonal_value_examples():
    sd = spectral_data(build_single_qubit(np.pi / 3, 1.0))
    assert diagonal_value(np.eye(2), sd.ground_state) == pytest.approx(1.0)
    F = filtered_exact(X, sd.eigensystem, Gaussian(0.5))
    assert diagonal_value(F, sd.ground_state) == pytest.approx(0.5, abs=1e-12)
    grid = TimeGrid.from_span(8.0, 8)
    Fr = filtered_riemann(X, sd.eigensystem, Gaussian(0.5), grid)
    gap = abs(diagonal_value(Fr, sd.ground_state) - 0.5)
    assert gap <= riemann_error_bound(X, sd.eigensystem, Gaussian(0.5), grid)


def test_symmetrize():
    M = np.array([[1.0, 2.0], [2.0, -1.0]])
    sym, err = symmetrize(M)
    np.testing.assert_array_equal(sym, M)
    assert err == 0.0
    rng = np.random.default_rng(5)
    eig = hermitian_eig(random_hermitian(4, rng))
    A = random_hermitian(4, rng)
    assert symmetrize(filtered_exact(A, eig, Gaussian(1.0)))[1] <= 1e-10
    # Hermitian A with a real filter: the raw Riemann sum is Hermitian to roundoff
    errs = [symmetrize(filtered_riemann(A, eig, Gaussian(1.0), TimeGrid.from_span(6.0, k)))[1]
            for k in (10, 12)]
    assert max(errs) < 1e-12
    skew = symmetrize(np.array([[0, 1], [0, 0]], dtype=complex))[1]
    assert skew == pytest.approx(0.5)


def test_lcu_weights_sum():
    grid = TimeGrid(0.2, 6)
    w, lam = lcu_weights(Gaussian(1.0), grid)
    assert lam == pytest.approx(w.sum())
    assert lam == pytest.approx(1.0, abs=2e-2)
    with pytest.raises(ValueError):
        lcu_weights(StepFreq(1.0), grid)
