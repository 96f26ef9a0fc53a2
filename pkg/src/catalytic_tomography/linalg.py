"""Dense complex linear algebra shared by every other module.

Operators are plain ``numpy.ndarray`` objects.  Eigendecompositions are
wrapped in :class:`EigenSystem` so that one decomposition of a Hamiltonian
can be reused across the many evolution times of a Riemann sum.
"""
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

from . import _kernels

HERMITIAN_ATOL = 1e-12
JACOBI_MAX_DIM = 64


class NotHermitianError(ValueError):
    pass


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and the unitary whose columns are eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def to_eigenbasis(self, op):
        v = self.eigenvectors
        return v.conj().T @ op @ v

    def from_eigenbasis(self, op):
        v = self.eigenvectors
        return v @ op @ v.conj().T


def max_asymmetry(m):
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def check_hermitian(m, name="matrix"):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    asym = max_asymmetry(m)
    scale = max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
    if asym > HERMITIAN_ATOL * scale:
        raise NotHermitianError(f"{name} is not Hermitian: max|M - M^H| = {asym:.3e}")
    return m


def _fix_phases(vecs, tol=1e-10):
    # make the first non-negligible component of each column real positive
    out = vecs.astype(np.complex128, copy=True)
    for j in range(out.shape[1]):
        col = out[:, j]
        idx = np.flatnonzero(np.abs(col) > tol)
        if idx.size:
            lead = col[idx[0]]
            out[:, j] = col * (abs(lead) / lead)
    return out


def hermitian_eig(m, method="auto"):
    """Full spectral decomposition of a Hermitian matrix.

    ``method`` is ``"jacobi"`` (cyclic Jacobi kernel), ``"lapack"`` or
    ``"auto"`` (Jacobi up to ``JACOBI_MAX_DIM``, LAPACK above).  Output is
    deterministic: ascending eigenvalues, each eigenvector's first nonzero
    component real positive.
    """
    m = check_hermitian(np.asarray(m), "M")
    if method == "auto":
        method = "jacobi" if m.shape[0] <= JACOBI_MAX_DIM else "lapack"
    if np.iscomplexobj(m) and not np.any(m.imag):
        m = m.real
    herm = 0.5 * (m + m.conj().T)
    if method == "jacobi":
        w, v = _kernels.jacobi_eigh(herm)
    elif method == "lapack":
        w, v = np.linalg.eigh(herm)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    order = np.argsort(w, kind="stable")
    return EigenSystem(np.ascontiguousarray(w[order]), _fix_phases(v[:, order]))


def lowest_eigenpairs(m, count=2):
    """Lowest ``count`` eigenpairs through LAPACK's subset driver (large dims)."""
    m = check_hermitian(np.asarray(m), "M")
    if np.iscomplexobj(m) and not np.any(m.imag):
        m = m.real
    w, v = scipy.linalg.eigh(0.5 * (m + m.conj().T), subset_by_index=[0, count - 1])
    return EigenSystem(w, _fix_phases(v))


def as_eigensystem(m):
    return m if isinstance(m, EigenSystem) else hermitian_eig(m)


def unitary_exp(m, t):
    """``exp(i M t)`` for Hermitian ``M`` (or a precomputed :class:`EigenSystem`)."""
    eig = as_eigensystem(m)
    v = eig.eigenvectors
    return (v * np.exp(1j * eig.eigenvalues * t)) @ v.conj().T


def operator_norm(m):
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def commutator(a, b):
    return a @ b - b @ a


def trace_distance(rho, sigma, atol=1e-8):
    """Half the trace norm of ``rho - sigma`` for unit-trace density matrices."""
    for name, x in (("rho", rho), ("sigma", sigma)):
        tr = np.trace(x)
        if abs(tr - 1.0) > atol:
            raise ValueError(f"{name} must have unit trace, got {tr:.6g}")
    diff = np.asarray(rho) - np.asarray(sigma)
    diff = 0.5 * (diff + diff.conj().T)
    val = 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))
    return min(max(val, 0.0), 1.0)


def pure_trace_distance(psi, phi):
    """Trace distance between two pure states, ``sqrt(1 - |<psi|phi>|^2)``."""
    ov = abs(np.vdot(psi, phi)) ** 2
    return float(np.sqrt(max(0.0, 1.0 - ov)))


def normalize(psi):
    psi = np.asarray(psi, dtype=np.complex128)
    nrm = np.linalg.norm(psi)
    if nrm == 0:
        raise ValueError("cannot normalize the zero vector")
    return psi / nrm


def density(psi):
    psi = np.asarray(psi)
    return np.outer(psi, psi.conj())


def kron(*ops):
    if len(ops) == 1 and isinstance(ops[0], (list, tuple)):
        ops = ops[0]
    if not ops:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, ops)


def partial_trace(rho, dims, keep):
    """Trace out every subsystem not listed in ``keep`` (indices into ``dims``)."""
    dims = list(dims)
    rho = np.asarray(rho)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise ValueError(f"rho has shape {rho.shape}, subsystem dims imply {total}")
    keep = sorted(set(keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError(f"kept indices {keep} out of range for {len(dims)} subsystems")
    n = len(dims)
    t = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # trace pairs from the highest index so earlier axis numbers stay valid
    for count, i in enumerate(sorted(traced, reverse=True)):
        cur = n - count
        t = np.trace(t, axis1=i, axis2=i + cur)
    d = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d, d)
