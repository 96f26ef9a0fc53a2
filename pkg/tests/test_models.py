import numpy as np
import pytest
from hypothesis import given, strategies as st

from catalytic_tomography.linalg import hermitian_eig
from catalytic_tomography.models import (I2, X, Y, Z, LatticeHamiltonian, LocalTerm, assemble_dense,
                                         build_random_gapped, build_single_qubit, build_tfim,
                                         pauli_string, spectral_data, truncate_patch)


def test_tfim_classical_limit():
    h = assemble_dense(build_tfim(2, 0.0))
    np.testing.assert_allclose(h, np.kron(Z, Z))
    np.testing.assert_allclose(hermitian_eig(h).eigenvalues, [-1, -1, 1, 1], atol=1e-14)



def test_tfim_two_sites_independent_oracle():
    # H = ZZ + X1 + X2 restricted to the symmetric sector: closed form -sqrt(5)
    h = np.kron(Z, Z) + np.kron(X, I2) + np.kron(I2, X)
    assert spectral_data(assemble_dense(build_tfim(2, 1.0))).E0 == pytest.approx(np.linalg.eigvalsh(h)[0])
    assert np.linalg.eigvalsh(h)[0] == pytest.approx(-np.sqrt(5.0))


def test_tfim_matches_hand_built_three_sites():
    g = 1.0
    ops = lambda a, b, c: np.kron(np.kron(a, b), c)
    hand = ops(Z, Z, I2) + ops(I2, Z, Z) + g * (ops(X, I2, I2) + ops(I2, X, I2) + ops(I2, I2, X))
    np.testing.assert_allclose(assemble_dense(build_tfim(3, g)), hand, atol=1e-15)


def test_tfim_periodic_adds_wrap_bond():
    assert len(build_tfim(4, 1.0, periodic=True).terms) == len(build_tfim(4, 1.0).terms) + 1


def test_tfim_paramagnet_gapped():
    sd = spectral_data(assemble_dense(build_tfim(8, 2.0)))
    assert sd.unique and sd.gap > 0.5


def test_gap_stable_across_solvers():
    h = assemble_dense(build_tfim(8, 2.0))
    a = spectral_data(h, method="lapack").gap
    b = spectral_data(h, method="subset").gap
    assert abs(a - b) < 1e-10


def test_single_qubit_examples():
    h = build_single_qubit(0.0, 1.0)
    np.testing.assert_allclose(h, -X)
    sd = spectral_data(h)
    assert sd.gap == pytest.approx(2.0)
    plus = np.array([1, 1]) / np.sqrt(2)
    assert abs(np.vdot(plus, sd.ground_state)) == pytest.approx(1.0)
    np.testing.assert_allclose(build_single_qubit(np.pi / 2, 1.0), -Y, atol=1e-15)
    psi = spectral_data(build_single_qubit(np.pi / 4, 1.0)).ground_state
    assert np.vdot(psi, X @ psi).real == pytest.approx(np.cos(np.pi / 4))


def test_single_qubit_rejects_nonpositive_gap():
    with pytest.raises(ValueError):
        build_single_qubit(0.3, 0.0)


def test_random_gapped_examples():
    h = build_random_gapped(1, 0, 1.0)
    assert spectral_data(h).gap >= 1.0 - 1e-12
    assert np.array_equal(build_random_gapped(3, 5, 1.0), build_random_gapped(3, 5, 1.0))
    assert spectral_data(build_random_gapped(4, 1, 0.7)).unique


@given(seed=st.integers(0, 10**6), n=st.integers(1, 4), gap=st.floats(0.1, 3.0))
def test_random_gapped_gap_readback(seed, n, gap):
    sd = spectral_data(build_random_gapped(n, seed, gap))
    assert sd.gap == pytest.approx(gap, rel=1e-8, abs=1e-10)


def test_assemble_edge_cases():
    empty = LatticeHamiltonian(L=3, D=1, terms=[])
    np.testing.assert_array_equal(assemble_dense(empty), np.zeros((8, 8)))
    term = np.kron(X, Z)
    full = LatticeHamiltonian(L=2, D=1, terms=[LocalTerm((0, 1), term)])
    np.testing.assert_allclose(assemble_dense(full), term)


def test_embed_respects_site_order():
    lat = LatticeHamiltonian(L=2, D=1, terms=[LocalTerm((1, 0), np.kron(X, Z))])
    np.testing.assert_allclose(assemble_dense(lat), np.kron(Z, X))


def test_spectral_data_degenerate():
    assert not spectral_data(np.kron(Z, Z)).unique
    sd = spectral_data(-X)
    assert (sd.E0, sd.E1, sd.gap) == pytest.approx((-1.0, 1.0, 2.0))


def test_pauli_string():
    np.testing.assert_allclose(pauli_string({0: "Z", 2: "X"}, 3), np.kron(np.kron(Z, I2), X))


def test_truncate_patch_examples():
    H = build_tfim(6, 1.5)
    sub = truncate_patch(H, [2], 0)
    assert [t.support for t in sub.terms] == [(2,)]
    np.testing.assert_allclose(sub.terms[0].matrix, 1.5 * X)
    assert len(truncate_patch(H, [2], 6).terms) == len(H.terms)
    counts = [len(truncate_patch(H, [2], r).terms) for r in range(7)]
    assert counts == sorted(counts)


def test_lattice_validation():
    with pytest.raises(ValueError):
        LatticeHamiltonian(L=2, D=1, terms=[LocalTerm((0, 5), np.kron(X, X))])
    with pytest.raises(ValueError):
        build_tfim(1, 1.0)
