"""Explicit LCU block encoding of the Riemann-sum filtered operator.

Register order is (time register) x (system), the time register being the
most significant factor, so the ``<0|.|0>`` block is the top-left
``dim x dim`` corner.  Only the unitary Hermitian observable case is built
as a circuit (no extra block-encoding ancilla for ``A``).
"""
from dataclasses import dataclass

import numpy as np

from .filtered import FilteredOperator, lcu_weights
from .linalg import as_eigensystem, operator_norm


@dataclass(frozen=True)
class PrepState:
    amplitudes: np.ndarray
    unitary: np.ndarray
    lam: float


@dataclass(frozen=True)
class LCUCircuit:
    k: int
    system_dim: int
    unitary: np.ndarray
    lam: float
    filter: object = None
    grid: object = None

    def block(self):
        d = self.system_dim
        return self.unitary[:d, :d]

    def apply_and_postselect(self, psi):
        """Project the register of ``C |0>|psi>`` back onto ``|0>``."""
        d = self.system_dim
        return self.unitary[:d, :d] @ np.asarray(psi)


def gram_schmidt_completion(first):
    """Unitary with ``first`` as column 0, completed from the standard basis."""
    first = np.asarray(first, dtype=np.complex128)
    dim = first.shape[0]
    cols = [first / np.linalg.norm(first)]
    for e in range(dim):
        if len(cols) == dim:
            break
        v = np.zeros(dim, dtype=np.complex128)
        v[e] = 1.0
        for _ in range(2):
            for c in cols:
                v = v - c * np.vdot(c, v)
        nrm = np.linalg.norm(v)
        if nrm > 1e-8:
            cols.append(v / nrm)
    return np.column_stack(cols)


def prep_sqrt_f(spec, grid):
    w, lam = lcu_weights(spec, grid)
    if np.any(w < 0):
        raise ValueError("filter takes negative values on the grid")
    amps = np.sqrt(w / lam)
    return PrepState(amps, gram_schmidt_completion(amps), lam)


def _is_unitary(m, tol=1e-10):
    return np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol


def assemble_lcu(A, H, spec, grid):
    """``(Prep^H x I) Ctrl[e^{+iHt}] (I x A) Ctrl[e^{-iHt}] (Prep x I)``."""
    A = np.asarray(A, dtype=np.complex128)
    if not (_is_unitary(A) and np.max(np.abs(A - A.conj().T)) <= 1e-12):
        raise ValueError("circuit path needs a unitary Hermitian observable; "
                         "use the matrix-level filtered operator for general A")
    eig = as_eigensystem(H)
    d = A.shape[0]
    if eig.dim != d:
        raise ValueError("A and H dimensions differ")
    prep = prep_sqrt_f(spec, grid)
    v = eig.eigenvectors
    E = eig.eigenvalues
    M = grid.size
    # select part is block diagonal over the register: one d x d block per time
    select = np.empty((M, d, d), dtype=np.complex128)
    for m, t in enumerate(grid.points):
        fwd = (v * np.exp(1j * E * t)) @ v.conj().T
        bwd = (v * np.exp(-1j * E * t)) @ v.conj().T
        select[m] = fwd @ A @ bwd
    P = prep.unitary
    # (P^H x I) blockdiag(select) (P x I), contracted over the register index
    full = np.einsum("ta,tij,tb->aibj", P.conj(), select, P, optimize=True)
    unitary = full.reshape(M * d, M * d)
    return LCUCircuit(grid.k, d, unitary, prep.lam, spec, grid)


def verify_block(circuit, F):
    """``|| lambda <0|C|0> - F ||`` for a Riemann-route filtered operator ``F``."""
    if isinstance(F, FilteredOperator):
        if F.route != "riemann":
            raise ValueError("verify_block compares against the Riemann route")
        if circuit.grid is not None and F.grid is not None and circuit.grid != F.grid:
            raise ValueError("circuit and filtered operator use different grids")
        if circuit.filter is not None and F.filter != circuit.filter:
            raise ValueError("circuit and filtered operator use different filters")
        target = F.matrix
    else:
        target = np.asarray(F)
    return operator_norm(circuit.lam * circuit.block() - target)


def unitarity_error(circuit):
    u = circuit.unitary
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
