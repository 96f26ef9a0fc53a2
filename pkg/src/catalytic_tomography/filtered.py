"""Bohr-frequency decomposition and the filtered operator.

Two construction routes:

* ``filtered_exact``: reweight each Bohr component ``A_nu`` by ``fhat(-nu)``;
* ``filtered_riemann``: the raw sum ``(2 pi)^{-1/2} sum_t A(t) f(t) t0`` over
  the asymmetric grid ``{-t0 2^{k-1}, ..., t0 (2^{k-1} - 1)}``.

Both are evaluated in the energy eigenbasis of ``H`` where the Heisenberg
picture is diagonal: ``A(t)_{ij} = A_{ij} exp(i (E_i - E_j) t)``.
"""
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .filters import SQRT2PI, eval_freq, eval_time, has_time_domain, sup_abs, sup_derivative, tail_mass, truncated_response
from .linalg import EigenSystem, as_eigensystem, commutator, operator_norm, unitary_exp


@dataclass(frozen=True)
class TimeGrid:
    t0: float
    k: int

    def __post_init__(self):
        if not self.t0 > 0:
            raise ValueError("grid spacing t0 must be positive")
        if self.k < 0:
            raise ValueError("register bits k must be non-negative")

    @property
    def size(self):
        return 2 ** self.k

    @property
    def T(self):
        return self.t0 * 2 ** (self.k - 1) if self.k > 0 else 0.0

    @property
    def start_index(self):
        return -(2 ** self.k // 2)

    @property
    def points(self):
        return self.t0 * np.arange(self.start_index, self.start_index + self.size, dtype=np.float64)

    @classmethod
    def from_span(cls, T, k):
        """Grid with ``2^k`` points covering ``[-T, T)``."""
        return cls(T / 2 ** (k - 1), k)


@dataclass(frozen=True)
class BohrDecomposition:
    frequencies: np.ndarray
    components: list
    eigensystem: EigenSystem

    def total(self):
        return sum(self.components)


@dataclass(frozen=True)
class FilteredOperator:
    matrix: np.ndarray
    filter: object
    route: str  # "exact_freq" or "riemann"
    lam: float = 1.0
    grid: TimeGrid = None
    truncation: float = None


def bohr_frequencies(eig):
    E = eig.eigenvalues
    return E[:, None] - E[None, :]


def default_freq_tol(eig):
    return 1e-9 * max(1.0, float(np.max(np.abs(eig.eigenvalues))))


def cluster_values(values, tol):
    """Single-linkage clusters of a 1-D array: (representatives, labels)."""
    flat = np.asarray(values, dtype=np.float64).ravel()
    if flat.size == 0:
        return flat, np.zeros(0, dtype=np.int64)
    order = np.argsort(flat, kind="stable")
    s = flat[order]
    breaks = np.concatenate(([True], np.diff(s) > tol))
    ids_sorted = np.cumsum(breaks) - 1
    labels = np.empty_like(ids_sorted)
    labels[order] = ids_sorted
    sums = np.bincount(ids_sorted, weights=s)
    counts = np.bincount(ids_sorted)
    return sums / counts, labels.reshape(np.shape(values))


def bohr_decompose(A, eig, freq_tol=None):
    """Split ``A`` into components ``A_nu`` changing the energy by ``nu``."""
    A = np.asarray(A)
    if A.shape != (eig.dim, eig.dim):
        raise ValueError(f"A has shape {A.shape}, eigensystem has dim {eig.dim}")
    tol = default_freq_tol(eig) if freq_tol is None else freq_tol
    reps, labels = cluster_values(bohr_frequencies(eig), tol)
    a_eig = eig.to_eigenbasis(A)
    comps = []
    for c in range(reps.size):
        comps.append(eig.from_eigenbasis(np.where(labels == c, a_eig, 0.0)))
    return BohrDecomposition(reps, comps, eig)


def heisenberg_evolve(A, H, t):
    """``exp(iHt) A exp(-iHt)``."""
    u = unitary_exp(H, t)
    return u @ A @ u.conj().T


def _reweight(A, eig, weights_of_nu, freq_tol):
    # A_{ij} in the eigenbasis times w(nu_ij), with nu clustered
    reps, labels = cluster_values(bohr_frequencies(eig), freq_tol)
    w = weights_of_nu(reps)[labels]
    return eig.from_eigenbasis(eig.to_eigenbasis(A) * w)


def filtered_exact(A, eig, spec, T=None, freq_tol=None):
    """``sum_nu A_nu fhat(-nu)``; with ``T`` the time integral is truncated to [-T, T]."""
    eig = as_eigensystem(eig)
    tol = default_freq_tol(eig) if freq_tol is None else freq_tol
    if T is None:
        weights = lambda nu: eval_freq(spec, -nu)
    else:
        weights = lambda nu: truncated_response(spec, nu, T)
    mat = _reweight(np.asarray(A), eig, weights, tol)
    return FilteredOperator(mat, spec, "exact_freq", 1.0, None, T)


def lcu_weights(spec, grid):
    """Riemann weights ``f(t) t0 / sqrt(2 pi)`` on the grid and their sum ``lambda``."""
    if not has_time_domain(spec):
        raise ValueError(f"{spec!r} cannot be discretized in time")
    w = eval_time(spec, grid.points) * grid.t0 / SQRT2PI
    return w, float(np.sum(w))


def filtered_riemann(A, H, spec, grid, method="eigenbasis"):
    """Raw Riemann sum over the (asymmetric) grid; not symmetrized.

    ``method="direct"`` accumulates ``A(t)`` term by term with explicit
    matrix exponentials, the slow route used as a cross-check.
    """
    A = np.asarray(A)
    w, lam = lcu_weights(spec, grid)
    eig = as_eigensystem(H)
    if method == "eigenbasis":
        nu = bohr_frequencies(eig)
        kernel = _kernels.uniform_fourier_sum(nu, grid.points[0], grid.t0, w)
        mat = eig.from_eigenbasis(eig.to_eigenbasis(A) * kernel)
    elif method == "direct":
        mat = np.zeros(A.shape, dtype=np.complex128)
        for t, wt in zip(grid.points, w):
            mat += wt * heisenberg_evolve(A, eig, t)
    else:
        raise ValueError(f"unknown method {method!r}")
    return FilteredOperator(mat, spec, "riemann", lam, grid, grid.T)


def riemann_error_bound(A, H, spec, grid, parts=False):
    """Bound on ``|| riemann sum - untruncated filtered operator ||``.

    Left-endpoint rule on ``g(t) = A(t) f(t)``:
    ``(2T^2/|S|) (||[A,H]|| sup|f| + ||A|| sup|f'|) / sqrt(2 pi)``,
    plus the tail ``||A|| (2 pi)^{-1/2} \\int_{|t|>T} f``.
    """
    A = np.asarray(A)
    h = H.reconstruct() if isinstance(H, EigenSystem) else np.asarray(H)
    T = grid.T
    comm = operator_norm(commutator(A, h))
    a_norm = operator_norm(A)
    disc = 2.0 * T ** 2 / grid.size * (comm * sup_abs(spec) + a_norm * sup_derivative(spec)) / SQRT2PI
    tail = a_norm * tail_mass(spec, T)[0] if T > 0 else a_norm
    if parts:
        return disc, tail
    return disc + tail


def block_diag_leakage(F, psi0):
    """``max(||(1-P) F P||, ||P F (1-P)||)`` with ``P = |psi0><psi0|``."""
    M = F.matrix if isinstance(F, FilteredOperator) else np.asarray(F)
    psi0 = np.asarray(psi0)
    col = M @ psi0
    col = col - psi0 * np.vdot(psi0, col)
    row = psi0.conj() @ M
    row = row - np.vdot(psi0, row.conj()).conj() * psi0.conj()
    return float(max(np.linalg.norm(col), np.linalg.norm(row)))


def diagonal_value(F, psi0):
    M = F.matrix if isinstance(F, FilteredOperator) else np.asarray(F)
    return float(np.vdot(psi0, M @ psi0).real)
