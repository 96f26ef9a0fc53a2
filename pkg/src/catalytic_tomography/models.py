"""Hamiltonians: geometrically local lattice models, the transverse-field
Ising chain, the single-qubit metrology instance and planted-gap random
Hamiltonians.  Sites are integers in row-major order over ``[L]^D``; site 0
is the most significant tensor factor.
"""
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .linalg import EigenSystem, check_hermitian, hermitian_eig, lowest_eigenpairs, operator_norm

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}

DEGENERACY_TOL = 1e-9
MAX_DENSE_QUBITS = 12


@dataclass(frozen=True)
class LocalTerm:
    support: tuple
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        sup = tuple(int(s) for s in self.support)
        if len(set(sup)) != len(sup):
            raise ValueError(f"repeated sites in support {sup}")
        object.__setattr__(self, "support", sup)
        dim = 2 ** len(sup)
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"term on {len(sup)} sites needs a {dim}x{dim} matrix")


@dataclass(frozen=True)
class LatticeHamiltonian:
    """Sum of local terms on the lattice ``[L]^D``.

    ``R`` bounds the Manhattan diameter of each support (``diam < R``) and
    ``q`` the number of sites per term.
    """

    L: int
    D: int
    terms: tuple
    R: int = 2
    q: int = 2
    periodic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        n = self.n
        for term in self.terms:
            if any(s < 0 or s >= n for s in term.support):
                raise ValueError(f"support {term.support} outside lattice of {n} sites")
            if len(term.support) > self.q:
                raise ValueError(f"term on {len(term.support)} sites exceeds q={self.q}")
            if self.diameter(term.support) >= self.R:
                raise ValueError(f"support {term.support} has diameter >= R={self.R}")

    @property
    def n(self):
        return self.L ** self.D

    @property
    def max_term_norm(self):
        return max((operator_norm(t.matrix) for t in self.terms), default=0.0)

    def coords(self, site):
        return np.unravel_index(site, (self.L,) * self.D)

    def distance(self, a, b):
        ca, cb = self.coords(a), self.coords(b)
        d = 0
        for x, y in zip(ca, cb):
            delta = abs(int(x) - int(y))
            if self.periodic:
                delta = min(delta, self.L - delta)
            d += delta
        return d

    def diameter(self, sites):
        sites = list(sites)
        return max((self.distance(a, b) for a in sites for b in sites), default=0)

    def distance_to_set(self, site, region):
        return min(self.distance(site, r) for r in region)

    def with_terms(self, terms):
        return LatticeHamiltonian(self.L, self.D, tuple(terms), self.R, self.q, self.periodic)


@dataclass(frozen=True)
class SpectralData:
    eigensystem: EigenSystem
    E0: float
    E1: float
    gap: float
    ground_state: np.ndarray
    unique: bool


def embed(op, sites, n):
    """Operator ``op`` acting on ``sites`` (in the given order), identity elsewhere."""
    sites = list(sites)
    k = len(sites)
    if op.shape != (2 ** k, 2 ** k):
        raise ValueError("operator dimension does not match number of sites")
    rest = [s for s in range(n) if s not in sites]
    full = np.kron(op, np.eye(2 ** (n - k), dtype=np.complex128))
    order = sites + rest
    perm = np.argsort(order)
    t = full.reshape((2,) * (2 * n))
    t = t.transpose(list(perm) + [n + p for p in perm])
    return t.reshape(2 ** n, 2 ** n)


def pauli_string(spec, n):
    """Dense operator for ``{site: 'X'|'Y'|'Z'}`` on ``n`` qubits."""
    ops = [PAULI[spec.get(i, "I")] for i in range(n)]
    out = ops[0]
    for o in ops[1:]:
        out = np.kron(out, o)
    return out


def build_tfim(L, g, periodic=False):
    """``H = sum Z_i Z_{i+1} + g sum X_i`` on an open (default) or periodic chain."""
    if L < 2:
        raise ValueError(f"TFIM chain needs L >= 2, got {L}")
    zz = np.kron(Z, Z)
    terms = [LocalTerm((i, i + 1), zz) for i in range(L - 1)]
    if periodic and L > 2:
        terms.append(LocalTerm((L - 1, 0), zz))
    terms += [LocalTerm((i,), g * X) for i in range(L)]
    return LatticeHamiltonian(L, 1, tuple(terms), R=2, q=2, periodic=periodic)


def build_single_qubit(theta, delta):
    """``-delta (cos(theta) X + sin(theta) Y)``; ground state (|0> + e^{i theta}|1>)/sqrt 2."""
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return -delta * (np.cos(theta) * X + np.sin(theta) * Y)


def haar_unitary(dim, rng):
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def build_random_gapped(n, seed, target_gap, spread=None):
    """Random Hermitian matrix with planted spectrum.

    Ground energy 0, first excited energy exactly ``target_gap``; the rest
    uniform on ``[target_gap, target_gap + spread]`` (default spread
    ``3 * target_gap``), in a Haar-random eigenbasis.
    """
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"n={n} exceeds the dense limit of {MAX_DENSE_QUBITS} qubits")
    rng = np.random.default_rng(seed)
    dim = 2 ** n
    spread = 3.0 * target_gap if spread is None else spread
    energies = np.zeros(dim)
    if dim > 1:
        energies[1] = target_gap
        energies[2:] = target_gap + np.sort(rng.uniform(0.0, spread, dim - 2))
    u = haar_unitary(dim, rng)
    h = (u * energies) @ u.conj().T
    return 0.5 * (h + h.conj().T)


def random_observable(n, rng, norm=1.0):
    """Random Hermitian matrix rescaled to operator norm ``norm``."""
    dim = 2 ** n
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    a = 0.5 * (g + g.conj().T)
    return a * (norm / operator_norm(a))


def assemble_dense(H):
    n = H.n
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"{n} qubits exceeds the dense limit of {MAX_DENSE_QUBITS}")
    out = np.zeros((2 ** n, 2 ** n), dtype=np.complex128)
    for term in H.terms:
        out += embed(term.matrix, term.support, n)
    return out


def spectral_data(H, method="auto"):
    """Ground energy, gap and ground state; degeneracy is reported, not raised."""
    h = check_hermitian(np.asarray(H), "H")
    if method == "subset":
        eig = lowest_eigenpairs(h, 2)
    else:
        eig = hermitian_eig(h, method=method)
    E = eig.eigenvalues
    E0 = float(E[0])
    E1 = float(E[1]) if E.size > 1 else float("inf")
    gap = E1 - E0
    return SpectralData(eig, E0, E1, gap, eig.eigenvectors[:, 0].copy(), gap > DEGENERACY_TOL)


def truncate_patch(H, a_support, r):
    """Terms of ``H`` whose support lies within Manhattan distance ``r`` of ``a_support``."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    region = list(a_support)
    kept = [t for t in H.terms
            if all(H.distance_to_set(s, region) <= r for s in t.support)]
    return H.with_terms(kept)


def complement_terms(H, a_support, r):
    region = list(a_support)
    return H.with_terms([t for t in H.terms
                         if not all(H.distance_to_set(s, region) <= r for s in t.support)])


def lattice_diameter(H):
    return max(H.distance(a, b) for a, b in product(range(H.n), repeat=2))
