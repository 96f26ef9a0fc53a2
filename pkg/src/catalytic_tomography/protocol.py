"""Catalytic ground-state tomography.

The filtered operator is built by the Riemann route, symmetrized and divided
by its LCU normalization, then measured by repeated phase estimation on the
*same* system state: each round starts from the previous round's
post-measurement state and the ground state is never re-prepared.  The
reported estimate is the median over rounds.
"""
from dataclasses import dataclass, field, replace
from math import ceil, e, log, log2, pi
from typing import NamedTuple, Optional

import numpy as np
from scipy import optimize

from .filtered import (FilteredOperator, TimeGrid, block_diag_leakage, filtered_riemann,
                       riemann_error_bound)
from .filters import Bump, Gaussian, tail_mass
from .linalg import EigenSystem, as_eigensystem, hermitian_eig, operator_norm, pure_trace_distance
from .locality import PatchEvolver, fit_lr_velocity, lr_dataset, space_truncation_error
from .models import assemble_dense, spectral_data


class DegenerateGroundStateError(ValueError):
    pass


class PhaseWrapError(ValueError):
    pass


@dataclass(frozen=True)
class ProtocolParams:
    """User-facing knobs.  ``None`` overrides are derived from (epsilon, delta, gap).

    ``c_K`` fixes the repetition count ``K = ceil(c_K ln(1/delta))``.  With
    ``delta_rule="fixed"`` the leakage parameter is
    ``delta' = c_p * delta * epsilon / ln(1/delta)``.  The default
    ``"query_budget"`` rule instead spreads ``c_p * delta`` over every
    application of the block encoding: the off-block amplitude is held at
    ``c_p * delta / (tau * K * (2**m - 1))``, since each round rotates by up to
    ``tau * (2**m - 1)`` and the disturbance grows linearly in that angle.
    """

    epsilon: float
    delta: float
    filter: str = "gaussian"
    c_p: float = 0.125
    c_K: float = 4.0
    tau: float = pi / 2
    gap: Optional[float] = None
    sigma: Optional[float] = None
    T: Optional[float] = None
    t0: Optional[float] = None
    k: Optional[int] = None
    m: Optional[int] = None
    K: Optional[int] = None
    bump_factors: int = 64
    radius: Optional[int] = None
    radius_rule: str = "calibrated"
    delta_rule: str = "query_budget"

    def __post_init__(self):
        for name in ("epsilon", "delta"):
            val = getattr(self, name)
            if not 0.0 < val < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {val}")
        if self.filter not in ("gaussian", "bump"):
            raise ValueError(f"unknown filter {self.filter!r}")
        if self.radius_rule not in ("calibrated", "lieb_robinson"):
            raise ValueError(f"unknown radius rule {self.radius_rule!r}")
        if self.delta_rule not in ("query_budget", "fixed"):
            raise ValueError(f"unknown delta rule {self.delta_rule!r}")

    @property
    def bits(self):
        return self.m if self.m is not None else qpe_bits(self.epsilon, self.tau)

    @property
    def repetitions(self):
        return self.K if self.K is not None else int(ceil(self.c_K * log(1.0 / self.delta)))

    @property
    def leakage_target(self):
        """Allowed off-block amplitude of the filtered operator."""
        if self.delta_rule == "fixed":
            dp = self.c_p * self.delta * self.epsilon / log(1.0 / self.delta)
            return np.sqrt(dp) if self.filter == "gaussian" else dp
        return self.c_p * self.delta / (self.tau * self.repetitions * (2 ** self.bits - 1))

    @property
    def delta_prime(self):
        # Gaussian leakage is exp(-Delta^2 / 2 sigma^2) = sqrt(delta') for the
        # sigma below; the bump's leakage is its tail mass, equal to delta'
        if self.delta_rule == "fixed":
            return self.c_p * self.delta * self.epsilon / log(1.0 / self.delta)
        lt = self.leakage_target
        return lt * lt if self.filter == "gaussian" else lt


@dataclass(frozen=True)
class DerivedParams:
    delta_prime: float
    spec: object
    grid: TimeGrid
    m: int
    K: int
    tau: float

    @property
    def T(self):
        return self.grid.T


@dataclass(frozen=True)
class QPEConfig:
    m: int
    tau: float = pi / 2
    K: int = 1
    seed: Optional[int] = None
    epsilon: Optional[float] = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one phase bit")
        if self.epsilon is not None and 2 * pi / 2 ** self.m > self.tau * self.epsilon * (1 + 1e-12):
            raise ValueError("phase register too small for the requested precision")


class QPEOutcome(NamedTuple):
    estimate: float
    post_state: np.ndarray
    outcome: int
    probability: float


def qpe_bits(epsilon, tau):
    """``ceil(log2(2 pi / (tau eps))) + 1`` (one guard bit)."""
    return int(ceil(log2(2 * pi / (tau * epsilon)))) + 1


def derive(params, gap, spectral_width):
    """Filter, time grid, phase bits and repetitions for a given gap."""
    if not gap > 0:
        raise ValueError("a positive gap is required")
    dp = params.delta_prime
    L = log(1.0 / dp)
    if params.filter == "gaussian":
        sigma = params.sigma if params.sigma is not None else gap / np.sqrt(L)
        spec = Gaussian(sigma)
        T = params.T if params.T is not None else L / gap
        reach = sigma * np.sqrt(2.0 * L)
    else:
        spec = Bump(gap, params.bump_factors)
        if params.T is not None:
            T = params.T
        else:
            f = lambda T: tail_mass(spec, T)[0] - dp
            T = optimize.brentq(f, 1.0 / gap, 400.0 / gap, xtol=1e-6 / gap)
        reach = gap
    if params.k is not None:
        k = params.k
        grid = TimeGrid(params.t0, k) if params.t0 is not None else TimeGrid.from_span(T, k)
    else:
        # spacing below the aliasing limit 2 pi / (largest Bohr frequency + filter reach)
        t0_max = params.t0 if params.t0 is not None else 2 * pi / (spectral_width + reach)
        k = max(1, int(ceil(log2(2.0 * T / t0_max))))
        grid = TimeGrid.from_span(T, k)
    m, K = params.bits, params.repetitions
    return DerivedParams(dp, spec, grid, m, K, params.tau)


def symmetrize(F):
    """``((F + F^H)/2, ||F - F^H|| / 2)``."""
    M = F.matrix if isinstance(F, FilteredOperator) else np.asarray(F)
    anti = 0.5 * (M - M.conj().T)
    return 0.5 * (M + M.conj().T), operator_norm(anti)


# ---------------------------------------------------------------------------
# phase estimation
# ---------------------------------------------------------------------------

def _dirichlet(theta, M):
    # (1/M) sum_{x<M} exp(2 pi i x theta), periodic in theta
    th = theta - np.round(theta)
    num = np.sin(pi * M * th)
    den = M * np.sin(pi * th)
    ratio = np.divide(num, den, out=np.ones_like(th), where=den != 0)
    return np.exp(1j * pi * (M - 1) * th) * ratio


def decode_phase(outcome, m, tau):
    M = 2 ** m
    phi = outcome / M if outcome <= M // 2 else outcome / M - 1.0
    return 2 * pi * phi / tau


def qpe_amplitudes(eigenvalues, m, tau):
    """``F[j, k]``: register amplitude of outcome ``j`` for eigenvalue ``k``."""
    M = 2 ** m
    phases = tau * np.asarray(eigenvalues) / (2 * pi)
    j = np.arange(M)
    return _dirichlet(phases[None, :] - j[:, None] / M, M)


def _check_wrap(eig, tau):
    norm = float(np.max(np.abs(eig.eigenvalues)))
    if tau * norm >= pi:
        raise PhaseWrapError(f"tau*||A|| = {tau * norm:.4f} >= pi")


def qpe_unitary(Ahat, tau, m):
    """Explicit textbook QPE unitary on (m-bit register) x system.

    ``(QFT^H x I) sum_x |x><x| x U^x (H^{x m} x I)`` with ``U = exp(i tau A)``.
    """
    eig = as_eigensystem(Ahat)
    d = eig.dim
    M = 2 ** m
    v = eig.eigenvectors
    ctrl = np.zeros((M * d, M * d), dtype=np.complex128)
    for x in range(M):
        ctrl[x * d:(x + 1) * d, x * d:(x + 1) * d] = (v * np.exp(1j * tau * x * eig.eigenvalues)) @ v.conj().T
    h1 = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)
    had = h1
    for _ in range(m - 1):
        had = np.kron(had, h1)
    jj, xx = np.meshgrid(np.arange(M), np.arange(M), indexing="ij")
    qft_inv = np.exp(-2j * pi * jj * xx / M) / np.sqrt(M)
    eye = np.eye(d)
    return np.kron(qft_inv, eye) @ ctrl @ np.kron(had, eye)


def _sample(probs, rng):
    cdf = np.cumsum(probs)
    u = rng.random() * cdf[-1]
    return int(min(np.searchsorted(cdf, u, side="right"), probs.size - 1))


def qpe_measure(Ahat, state, cfg, rng=None, method="spectral"):
    """One round of m-bit phase estimation of ``exp(i tau Ahat)`` on ``state``.

    Returns the decoded eigenvalue estimate and the normalized system state
    conditioned on the observed register value.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    eig = as_eigensystem(Ahat)
    _check_wrap(eig, cfg.tau)
    state = np.asarray(state, dtype=np.complex128)
    d = eig.dim
    if method == "spectral":
        coeffs = eig.eigenvectors.conj().T @ state
        amps = qpe_amplitudes(eig.eigenvalues, cfg.m, cfg.tau)
        probs = (np.abs(amps) ** 2) @ (np.abs(coeffs) ** 2)
        j = _sample(probs, rng)
        post = eig.eigenvectors @ (coeffs * amps[j])
    elif method == "unitary":
        M = 2 ** cfg.m
        start = np.zeros(M * d, dtype=np.complex128)
        start[:d] = state
        out = (qpe_unitary(eig, cfg.tau, cfg.m) @ start).reshape(M, d)
        probs = np.sum(np.abs(out) ** 2, axis=1)
        j = _sample(probs, rng)
        post = out[j]
    else:
        raise ValueError(f"unknown method {method!r}")
    p = float(probs[j] / probs.sum())
    post = post / np.linalg.norm(post)
    return QPEOutcome(decode_phase(j, cfg.m, cfg.tau), post, j, p)


def born_distribution(Ahat, state, m, tau):
    eig = as_eigensystem(Ahat)
    coeffs = eig.eigenvectors.conj().T @ np.asarray(state)
    amps = qpe_amplitudes(eig.eigenvalues, m, tau)
    return (np.abs(amps) ** 2) @ (np.abs(coeffs) ** 2)


# ---------------------------------------------------------------------------
# Algorithm drivers
# ---------------------------------------------------------------------------

@dataclass
class PreparedMeasurement:
    """Everything fixed before the first round; shared across seeds."""

    ahat: EigenSystem
    derived: DerivedParams
    lam: float
    truth: float
    ground_state: Optional[np.ndarray]
    gap: float
    symmetrization_error: float
    leakage: float
    riemann_bound: float
    extras: dict = field(default_factory=dict)

    @property
    def queries_per_round(self):
        return 2 ** self.derived.m - 1

    def resource_ledger(self):
        queries = self.derived.K * self.queries_per_round
        return {
            "block_encoding_queries": queries,
            "queries_per_round": self.queries_per_round,
            "rounds": self.derived.K,
            "T": self.derived.T,
            "total_heisenberg_time": queries * 2.0 * self.derived.T,
        }


@dataclass
class TomographyResult:
    estimate: float
    truth: float
    abs_error: float
    final_state: np.ndarray = field(repr=False)
    trace_dist_to_ground: float
    round_estimates: np.ndarray = field(repr=False)
    round_outcomes: np.ndarray = field(repr=False)
    resources: dict
    seed: Optional[int] = None
    epsilon: float = float("nan")
    delta: float = float("nan")
    extras: dict = field(default_factory=dict)

    @property
    def post_state(self):
        """System density matrix after the last round (register discarded)."""
        return np.outer(self.final_state, self.final_state.conj())

    @property
    def success(self):
        return self.abs_error <= self.epsilon


def _validate_inputs(H, A):
    H = np.asarray(H)
    A = np.asarray(A)
    if H.shape != A.shape:
        raise ValueError("H and A must have the same shape")
    if operator_norm(A) > 1.0 + 1e-10:
        raise ValueError("observable must satisfy ||A|| <= 1")
    return H, A


def prepare(H, A, params, evolution=None, spectral=None):
    """Build the normalized symmetrized filtered operator and its eigensystem.

    ``evolution`` (matrix or :class:`EigenSystem`) is the Hamiltonian used for
    the Heisenberg evolutions; it defaults to ``H`` and is a spatial patch
    for the local protocol.
    """
    H, A = _validate_inputs(H, A)
    sd = spectral if spectral is not None else spectral_data(H)
    if not sd.unique:
        raise DegenerateGroundStateError(f"ground state degenerate (gap {sd.gap:.3e})")
    gap = params.gap if params.gap is not None else sd.gap
    E = sd.eigensystem.eigenvalues
    dp = derive(params, gap, float(E[-1] - E[0]))
    ev_eig = sd.eigensystem if evolution is None else as_eigensystem(evolution)
    F = filtered_riemann(A, ev_eig, dp.spec, dp.grid)
    sym, sym_err = symmetrize(F)
    ahat = sym / F.lam
    psi0 = sd.ground_state
    truth = float(np.vdot(psi0, A @ psi0).real)
    bound = riemann_error_bound(A, ev_eig, dp.spec, dp.grid)
    return PreparedMeasurement(
        ahat=hermitian_eig(ahat), derived=dp, lam=F.lam, truth=truth, ground_state=psi0,
        gap=gap, symmetrization_error=sym_err, leakage=block_diag_leakage(ahat, psi0),
        riemann_bound=bound)


def measure(prepared, state, seed):
    """K chained rounds of phase estimation on one copy of ``state``.

    Only ``state`` enters; nothing here can re-prepare the ground state.
    """
    dp = prepared.derived
    rng = np.random.default_rng(seed)
    cfg = QPEConfig(dp.m, dp.tau, dp.K, seed)
    estimates = np.empty(dp.K)
    outcomes = np.empty(dp.K, dtype=np.int64)
    current = np.asarray(state, dtype=np.complex128)
    for i in range(dp.K):
        res = qpe_measure(prepared.ahat, current, cfg, rng)
        estimates[i] = res.estimate
        outcomes[i] = res.outcome
        current = res.post_state
    return float(np.median(estimates)), estimates, outcomes, current


def run_prepared(prepared, seed, params):
    if prepared.ground_state is None:
        raise ValueError("prepared measurement has no reference ground state")
    est, estimates, outcomes, final = measure(prepared, prepared.ground_state, seed)
    return TomographyResult(
        estimate=est, truth=prepared.truth, abs_error=abs(est - prepared.truth),
        final_state=final, trace_dist_to_ground=pure_trace_distance(prepared.ground_state, final),
        round_estimates=estimates, round_outcomes=outcomes,
        resources=prepared.resource_ledger(), seed=seed,
        epsilon=params.epsilon, delta=params.delta, extras=dict(prepared.extras))


def catalytic_tomography(H, A, params, seed):
    return run_prepared(prepare(H, A, params), seed, params)


# ---------------------------------------------------------------------------
# local variant
# ---------------------------------------------------------------------------

def lieb_robinson_radius(c_fit, T, support_size, delta):
    """``ceil(e c T + ln(|A| / delta))``."""
    return int(ceil(e * c_fit * T + log(support_size / delta)))


def prepare_local(H, A, support, params, evolver=None, lr_times=None, lr_radii=None):
    """Prepare the local protocol: fit ``c``, choose the patch radius, build the operator.

    ``radius_rule="lieb_robinson"`` uses the bound-derived radius directly;
    ``"calibrated"`` takes the smallest radius (never above it) whose measured
    truncation error is within the delta/4 budget.
    """
    support = tuple(support)
    h = assemble_dense(H)
    H_dense, A = _validate_inputs(h, A)
    ev = evolver or PatchEvolver(H, support)
    sd = spectral_data(H_dense)
    ev.set_full(sd.eigensystem)
    if not sd.unique:
        raise DegenerateGroundStateError(f"ground state degenerate (gap {sd.gap:.3e})")
    gap = params.gap if params.gap is not None else sd.gap
    E = sd.eigensystem.eigenvalues
    dp = derive(params, gap, float(E[-1] - E[0]))
    diam = max(H.distance_to_set(s, support) for s in range(H.n))
    radii = lr_radii or list(range(1, max(2, min(4, diam))))
    times = lr_times or [dp.T / 8, dp.T / 4, dp.T / 2, dp.T]
    points = lr_dataset(A, support, H, radii, times, ev)
    c_fit = fit_lr_velocity(points)
    r_lr = lieb_robinson_radius(c_fit, dp.T, len(support), params.delta)
    budget = params.delta / 4
    if params.radius is not None:
        r = params.radius
    elif params.radius_rule == "lieb_robinson":
        r = r_lr
    else:
        r = None
        for cand in range(0, min(r_lr, diam) + 1):
            if space_truncation_error(A, support, H, dp.spec, cand, dp.grid, evolver=ev).measured <= budget:
                r = cand
                break
        r = min(r_lr, diam) if r is None else r
    trunc = space_truncation_error(A, support, H, dp.spec, r, dp.grid, c_fit=c_fit, evolver=ev)
    fixed = replace(params, gap=gap)
    prep = prepare(H_dense, A, fixed, evolution=ev.patch(r), spectral=sd)
    prep.extras.update({
        "radius": r, "radius_lieb_robinson": r_lr, "c_fit": c_fit,
        "truncation_error": trunc.measured, "truncation_bound": trunc.bound,
        "truncation_budget": budget, "patch_terms": len(ev.patch_terms(r).terms),
        "total_terms": len(H.terms),
    })
    return prep


def local_catalytic_tomography(H, A, support, params, seed):
    return run_prepared(prepare_local(H, A, support, params), seed, params)


def resource_ledger_check(results):
    """Table of (eps, time, queries) and the log-log slope of time against 1/eps."""
    if len(results) < 3:
        raise ValueError("need at least 3 sweep points")
    eps = np.array([r.epsilon for r in results])
    times = np.array([r.resources["total_heisenberg_time"] for r in results])
    queries = np.array([r.resources["block_encoding_queries"] for r in results])
    slope = float(np.polyfit(np.log(1.0 / eps), np.log(times), 1)[0])
    table = [{"epsilon": float(a), "total_heisenberg_time": float(b), "block_encoding_queries": int(c)}
             for a, b, c in zip(eps, times, queries)]
    return table, slope
