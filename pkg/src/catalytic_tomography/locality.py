"""Lieb-Robinson and space-truncation numerics, the correlation-decay
inequality for the step filter, and TFIM correlation lengths."""
from dataclasses import dataclass, field
from math import factorial, lgamma, log

import numpy as np

from .filtered import filtered_exact, filtered_riemann, lcu_weights
from .filters import StepFreq
from .linalg import commutator, hermitian_eig, operator_norm
from .models import assemble_dense, build_tfim, spectral_data, truncate_patch


@dataclass(frozen=True)
class LRDataPoint:
    r: int
    t: float
    measured_error: float
    support_size: int
    c: float = float("nan")

    @property
    def bound_value(self):
        return lr_bound(self.support_size, self.c, self.t, self.r)


@dataclass(frozen=True)
class CorrelationRecord:
    separation: float
    correlator: float
    eta: float

    @property
    def slack(self):
        return self.eta - self.correlator


@dataclass(frozen=True)
class CorrelationLength:
    xi: float
    gap: float
    separations: np.ndarray = field(repr=False)
    correlators: np.ndarray = field(repr=False)
    residual: float = 0.0
    flagged: bool = False


def lr_bound(support_size, c, t, r):
    """``|A| (c t)^r / r!``."""
    if r == 0:
        return float(support_size)
    x = c * abs(t)
    if x == 0:
        return 0.0
    return float(support_size * np.exp(r * log(x) - lgamma(r + 1)))


class PatchEvolver:
    """Caches eigensystems of ``H`` and its truncations around a fixed support."""

    def __init__(self, H, support):
        self.H = H
        self.support = tuple(support)
        self._eigs = {}
        self._full = None

    def set_full(self, eig):
        self._full = eig

    @property
    def full(self):
        if self._full is None:
            self._full = hermitian_eig(assemble_dense(self.H))
        return self._full

    def patch_terms(self, r):
        return truncate_patch(self.H, self.support, r)

    def covers_all(self, r):
        return len(self.patch_terms(r).terms) == len(self.H.terms)

    def patch(self, r):
        if self.covers_all(r):
            return self.full
        if r not in self._eigs:
            self._eigs[r] = hermitian_eig(assemble_dense(self.patch_terms(r)))
        return self._eigs[r]


def _evolve(eig, A, t):
    v = eig.eigenvectors
    u = (v * np.exp(1j * eig.eigenvalues * t)) @ v.conj().T
    return u @ A @ u.conj().T


def lr_error(A, support, H, r, t, evolver=None):
    """``|| A_{H_r}(t) - A_H(t) ||`` for the patch of radius ``r`` around ``support``."""
    ev = evolver or PatchEvolver(H, support)
    if t == 0 or ev.covers_all(r):
        err = 0.0
    else:
        err = operator_norm(_evolve(ev.patch(r), A, t) - _evolve(ev.full, A, t))
    return LRDataPoint(int(r), float(t), float(err), len(tuple(support)))


def fit_lr_velocity(points, rtol=1e-12):
    """Smallest ``c`` with ``measured <= |A| (c t)^r / r!`` at every point (bisection)."""
    usable = [p for p in points if p.r > 0 and p.t != 0]
    nonzero = [p for p in usable if p.measured_error > 0]
    if len(usable) < 4 or not nonzero:
        raise ValueError("need at least 4 points (r > 0, t != 0) with nonzero error")

    def ok(c):
        return all(p.measured_error <= lr_bound(p.support_size, c, p.t, p.r) for p in usable)

    # per-point closed forms bracket the answer
    guess = max((p.measured_error * factorial(p.r) / p.support_size) ** (1.0 / p.r) / abs(p.t)
                for p in nonzero)
    lo, hi = 0.5 * guess, 2.0 * guess
    while not ok(hi):
        hi *= 2.0
    while ok(lo) and lo > 1e-300:
        lo *= 0.5
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def lr_dataset(A, support, H, radii, times, evolver=None):
    ev = evolver or PatchEvolver(H, support)
    return [lr_error(A, support, H, r, t, ev) for r in radii for t in times]


@dataclass(frozen=True)
class TruncationError:
    measured: float
    bound: float
    lr_comparison: float = float("nan")

    def __iter__(self):
        return iter((self.measured, self.bound))


def space_truncation_error(A, support, H, spec, r, grid, c_fit=None, evolver=None,
                           with_lr_comparison=False):
    """Riemann filtered operator under ``H_r`` versus under ``H``.

    ``bound`` is ``|A| (c_fit T)^r / r!`` (nan without ``c_fit``).  The
    optional comparison is ``lambda * max_t lr_error(r, t)`` over the grid.
    """
    ev = evolver or PatchEvolver(H, support)
    size = len(tuple(support))
    if ev.covers_all(r):
        measured = 0.0
    else:
        F_r = filtered_riemann(A, ev.patch(r), spec, grid)
        F = filtered_riemann(A, ev.full, spec, grid)
        measured = operator_norm(F_r.matrix - F.matrix)
    bound = lr_bound(size, c_fit, grid.T, r) if c_fit is not None else float("nan")
    comparison = float("nan")
    if with_lr_comparison:
        _, lam = lcu_weights(spec, grid)
        worst = max(lr_error(A, support, H, r, t, ev).measured_error for t in grid.points)
        comparison = lam * worst
    return TruncationError(float(measured), float(bound), float(comparison))


def correlation_check(H, A, B, delta, separation=float("nan")):
    """Both sides of ``|<BA> - <B><A>| <= || [B, A_f] ||`` for the step filter."""
    H = np.asarray(H)
    if operator_norm(commutator(A, B)) > 1e-10:
        raise ValueError("A and B must commute")
    sd = spectral_data(H)
    if not sd.unique:
        raise ValueError("ground state is degenerate")
    if sd.gap < delta - 1e-12:
        raise ValueError(f"gap {sd.gap:.6g} is below the filter width {delta}")
    F = filtered_exact(A, sd.eigensystem, StepFreq(delta))
    psi = sd.ground_state
    ev = lambda op: np.vdot(psi, op @ psi)
    corr = abs(ev(B @ A) - ev(B) * ev(A))
    eta = operator_norm(commutator(B, F.matrix))
    return CorrelationRecord(float(separation), float(corr), float(eta))


def _z_signs(n):
    # row b, column i: eigenvalue of Z_i on basis state b (site 0 most significant)
    b = np.arange(2 ** n)[:, None]
    bits = (b >> (n - 1 - np.arange(n))[None, :]) & 1
    return 1.0 - 2.0 * bits


def connected_zz(psi, n, pairs):
    p = np.abs(psi) ** 2
    z = _z_signs(n)
    mean = p @ z
    return np.array([p @ (z[:, i] * z[:, j]) - mean[i] * mean[j] for i, j in pairs])


def tfim_correlation_length(L, g, boundary=2, residual_tol=0.25):
    """Correlation length from a log-linear fit of ``<Z_i Z_j>_c`` and the gap.

    Pairs are centred on the chain and kept ``boundary`` sites away from
    either end; separation 0 is never used.
    """
    if L > 12:
        raise ValueError("dense limit is L <= 12")
    if g == 1:
        raise ValueError("g = 1 is the critical point")
    h = assemble_dense(build_tfim(L, g))
    sd = spectral_data(h, method="subset" if L >= 10 else "auto")
    lo, hi = boundary, L - 1 - boundary
    seps, pairs = [], []
    for r in range(1, hi - lo + 1):
        i = (L - 1 - r) // 2
        j = i + r
        if i >= lo and j <= hi:
            seps.append(r)
            pairs.append((i, j))
    corr = np.abs(connected_zz(sd.ground_state, L, pairs))
    seps = np.asarray(seps, dtype=np.float64)
    y = np.log(np.maximum(corr, 1e-300))
    slope, icpt = np.polyfit(seps, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * seps + icpt)) ** 2)))
    xi = -1.0 / slope if slope < 0 else float("inf")
    return CorrelationLength(float(xi), float(sd.gap), seps, corr, resid,
                             bool(resid > residual_tol or not np.isfinite(xi)))
