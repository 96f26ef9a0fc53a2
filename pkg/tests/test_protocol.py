import numpy as np
import pytest

from catalytic_tomography import protocol
from catalytic_tomography.linalg import hermitian_eig
from catalytic_tomography.models import (X, Z, assemble_dense, build_single_qubit, build_tfim,
                                         pauli_string)
from catalytic_tomography.protocol import (DegenerateGroundStateError, PhaseWrapError, ProtocolParams,
                                           QPEConfig, born_distribution, catalytic_tomography,
                                           decode_phase, local_catalytic_tomography, measure,
                                           prepare, qpe_bits, qpe_measure, qpe_unitary,
                                           resource_ledger_check, run_prepared)
from conftest import random_hermitian

TAU = np.pi / 2


def test_qpe_eigenstate_is_exact_and_catalytic():
    A = np.diag([0.25, -0.5]).astype(complex)
    cfg = QPEConfig(m=5, tau=TAU)
    for idx, val in ((0, 0.25), (1, -0.5)):
        state = np.eye(2, dtype=complex)[idx]
        out = qpe_measure(A, state, cfg, np.random.default_rng(0))
        assert out.estimate == pytest.approx(val, abs=1e-12)
        assert out.probability == pytest.approx(1.0)
        assert abs(np.vdot(state, out.post_state)) == pytest.approx(1.0, abs=1e-12)


def test_qpe_zero_operator():
    out = qpe_measure(np.zeros((2, 2)), np.array([0.6, 0.8]), QPEConfig(m=6), np.random.default_rng(1))
    assert out.estimate == 0.0


def test_decode_phase_range():
    m = 4
    ests = [decode_phase(j, m, TAU) for j in range(16)]
    assert max(ests) == pytest.approx(2.0) and min(ests) == pytest.approx(-1.75)


def test_spectral_route_matches_unitary():
    rng = np.random.default_rng(4)
    A = random_hermitian(2, rng)
    A *= 0.9 / np.max(np.abs(np.linalg.eigvalsh(A)))
    psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    psi /= np.linalg.norm(psi)
    m = 10
    M = 2 ** m
    start = np.zeros(2 * M, dtype=complex)
    start[:2] = psi
    out = (qpe_unitary(A, TAU, m) @ start).reshape(M, 2)
    exact = np.sum(np.abs(out) ** 2, axis=1)
    assert np.max(np.abs(exact - born_distribution(A, psi, m, TAU))) < 1e-12
    # post-states agree outcome by outcome
    r1 = qpe_measure(A, psi, QPEConfig(m), np.random.default_rng(9), method="spectral")
    r2 = qpe_measure(A, psi, QPEConfig(m), np.random.default_rng(9), method="unitary")
    assert r1.outcome == r2.outcome
    assert abs(np.vdot(r1.post_state, r2.post_state)) == pytest.approx(1.0, abs=1e-10)
    # sampled outcomes against the exact distribution; 200 shots sit at the
    # noise floor of the Fejer tails, so 2000 are drawn
    shots = np.random.default_rng(12)
    counts = np.zeros(M)
    for _ in range(2000):
        counts[qpe_measure(A, psi, QPEConfig(m), shots).outcome] += 1
    assert 0.5 * np.sum(np.abs(counts / 2000 - exact)) <= 0.1


def test_qpe_config_validation():
    with pytest.raises(ValueError):
        QPEConfig(m=0)
    with pytest.raises(ValueError):
        QPEConfig(m=3, tau=TAU, epsilon=0.01)
    QPEConfig(m=qpe_bits(0.01, TAU), tau=TAU, epsilon=0.01)


def test_phase_wrap_detected():
    with pytest.raises(PhaseWrapError):
        qpe_measure(np.diag([2.5, 0.0]), np.array([1.0, 0.0]), QPEConfig(m=4, tau=TAU))


def test_params_validation():
    for eps, delta in ((0.0, 0.1), (0.1, 1.0), (1.2, 0.1)):
        with pytest.raises(ValueError):
            ProtocolParams(eps, delta)
    p = ProtocolParams(0.1, 0.1, delta_rule="fixed")
    assert p.delta_prime == pytest.approx(0.125 * 0.01 / np.log(10))
    assert p.repetitions == int(np.ceil(4.0 * np.log(10)))


def test_derived_gaussian_formulas():
    p = ProtocolParams(0.1, 0.1)
    d = protocol.derive(p, gap=2.0, spectral_width=5.0)
    L = np.log(1 / p.delta_prime)
    assert d.spec.sigma == pytest.approx(2.0 / np.sqrt(L))
    assert d.T == pytest.approx(L / 2.0)
    # leakage exp(-gap^2 / 2 sigma^2) equals the target amplitude
    assert np.exp(-2.0 ** 2 / (2 * d.spec.sigma ** 2)) == pytest.approx(p.leakage_target)


def test_commuting_observable_zero_leakage():
    H = np.diag([0.0, 1.0, 2.5, 3.0]).astype(complex)
    A = np.diag([0.3, -0.2, 0.9, 1.0]).astype(complex)
    for delta in (0.3, 0.01):
        res = catalytic_tomography(H, A, ProtocolParams(0.1, delta), seed=3)
        assert res.abs_error <= 0.1
        assert res.trace_dist_to_ground <= 1e-8


def test_degenerate_ground_state_rejected():
    with pytest.raises(DegenerateGroundStateError):
        catalytic_tomography(np.kron(Z, Z), np.kron(X, np.eye(2)), ProtocolParams(0.1, 0.1), seed=0)


def test_observable_norm_checked():
    with pytest.raises(ValueError, match="<= 1"):
        catalytic_tomography(Z, 2 * X, ProtocolParams(0.1, 0.1), seed=0)


def test_single_qubit_contract():
    H = build_single_qubit(np.pi / 3, 1.0)
    params = ProtocolParams(0.05, 0.05)
    prep = prepare(H, X, params)
    assert prep.truth == pytest.approx(0.5)
    runs = [run_prepared(prep, s, params) for s in range(200)]
    ok = [r.abs_error <= 0.05 and r.trace_dist_to_ground <= 0.05 for r in runs]
    assert np.mean(ok) >= 0.95


def test_single_copy_discipline(monkeypatch):
    H = build_single_qubit(np.pi / 3, 1.0)
    params = ProtocolParams(0.1, 0.1, K=5)
    prep = prepare(H, X, params)
    start = prep.ground_state.copy()
    prep.ground_state = None  # measure() must not need it
    seen = []
    real = protocol.qpe_measure

    def spy(Ahat, state, cfg, rng):
        seen.append(np.array(state))
        out = real(Ahat, state, cfg, rng)
        seen.append(out.post_state)
        return out

    monkeypatch.setattr(protocol, "qpe_measure", spy)
    measure(prep, start, seed=1)
    assert len(seen) == 10
    np.testing.assert_array_equal(seen[0], start)
    for i in range(1, 5):
        np.testing.assert_array_equal(seen[2 * i], seen[2 * i - 1])


def test_deterministic_under_seed():
    H = assemble_dense(build_tfim(4, 2.0))
    A = pauli_string({1: "Z"}, 4)
    p = ProtocolParams(0.1, 0.1)
    a, b = catalytic_tomography(H, A, p, 5), catalytic_tomography(H, A, p, 5)
    assert a.estimate == b.estimate
    np.testing.assert_array_equal(a.round_outcomes, b.round_outcomes)
    np.testing.assert_array_equal(a.final_state, b.final_state)


def test_local_full_radius_matches_global():
    lat = build_tfim(4, 2.0)
    A = pauli_string({1: "Z"}, 4)
    p = ProtocolParams(0.1, 0.1, radius=4)
    loc = local_catalytic_tomography(lat, A, (1,), p, seed=2)
    glob = catalytic_tomography(assemble_dense(lat), A, p, seed=2)
    assert loc.extras["truncation_error"] == 0.0
    np.testing.assert_array_equal(loc.round_outcomes, glob.round_outcomes)
    assert loc.estimate == glob.estimate


def test_resource_ledger():
    H = build_single_qubit(np.pi / 3, 1.0)
    results = [catalytic_tomography(H, X, ProtocolParams(e, 0.1), 0) for e in (0.2, 0.1, 0.05, 0.025)]
    table, slope = resource_ledger_check(results)
    q = [row["block_encoding_queries"] for row in table]
    assert all(1.9 <= b / a <= 2.1 for a, b in zip(q, q[1:]))
    assert 0.85 <= slope <= 1.15
    with pytest.raises(ValueError):
        resource_ledger_check(results[:1])


def test_post_state_is_density_matrix():
    res = catalytic_tomography(build_single_qubit(0.4, 1.0), X, ProtocolParams(0.1, 0.1), 0)
    rho = res.post_state
    assert np.trace(rho).real == pytest.approx(1.0)
    assert np.max(np.abs(rho - rho.conj().T)) < 1e-14
    assert -1 - 0.1 <= res.estimate <= 1 + 0.1
