"""Hot inner loops, compiled with numba when available.

Set ``CATALYTIC_DISABLE_NUMBA=1`` to force the pure-numpy path.  Both paths
perform the same arithmetic in the same order; results agree to roundoff.
"""
import os

import numpy as np

_DISABLE = os.environ.get("CATALYTIC_DISABLE_NUMBA", "0").lower() in ("1", "true", "yes")

try:
    if _DISABLE:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLE


# ---------------------------------------------------------------------------
# Cyclic Jacobi for complex Hermitian matrices
# ---------------------------------------------------------------------------

def _jacobi_numpy(a, tol, max_sweeps):
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = max(np.sqrt(np.sum(np.abs(a) ** 2)), 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2), 0.0))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                ph = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                phc = np.conj(ph)
                # columns: A <- A G
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - s * phc * colq
                a[:, q] = s * colp + c * phc * colq
                # rows: A <- G^H A
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp - s * ph * rowq
                a[q, :] = s * rowp + c * ph * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * phc * vq
                v[:, q] = s * vp + c * phc * vq
    return np.diag(a).real.copy(), v


def _jacobi_loops(a, tol, max_sweeps):
    a = a.copy()
    n = a.shape[0]
    v = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        v[i, i] = 1.0
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += a[i, j].real ** 2 + a[i, j].imag ** 2
    scale = max(np.sqrt(total), 1e-300)
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if np.sqrt(off) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                ph = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                phc = np.conj(ph)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * phc * akq
                    a[k, q] = s * akp + c * phc * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * ph * aqk
                    a[q, k] = s * apk + c * ph * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * phc * vkq
                    v[k, q] = s * vkp + c * phc * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v


# ---------------------------------------------------------------------------
# Fourier sums  out[i] = sum_m w[m] exp(1j * nu[i] * t[m])
# ---------------------------------------------------------------------------

def _uniform_fourier_numpy(nu, t_start, dt, weights):
    # uniform grid t_m = t_start + m*dt, evaluated by phase recurrence
    z = np.exp(1j * nu * t_start)
    step = np.exp(1j * nu * dt)
    acc = np.zeros(nu.shape, dtype=np.complex128)
    for m in range(weights.shape[0]):
        acc += weights[m] * z
        z *= step
    return acc


def _uniform_fourier_loops(nu, t_start, dt, weights):
    out = np.empty(nu.shape[0], dtype=np.complex128)
    nw = weights.shape[0]
    for i in range(nu.shape[0]):
        z = np.exp(1j * nu[i] * t_start)
        step = np.exp(1j * nu[i] * dt)
        acc = 0.0 + 0.0j
        for m in range(nw):
            acc += weights[m] * z
            z *= step
        out[i] = acc
    return out


def _cosine_sum_numpy(nu, nodes, weights):
    out = np.zeros(nu.shape, dtype=np.float64)
    chunk = max(1, 2_000_000 // max(nodes.shape[0], 1))
    for s in range(0, nu.shape[0], chunk):
        out[s:s + chunk] = np.cos(np.outer(nu[s:s + chunk], nodes)) @ weights
    return out


def _cosine_sum_loops(nu, nodes, weights):
    out = np.empty(nu.shape[0], dtype=np.float64)
    for i in range(nu.shape[0]):
        acc = 0.0
        for q in range(nodes.shape[0]):
            acc += weights[q] * np.cos(nu[i] * nodes[q])
        out[i] = acc
    return out


if USE_NUMBA:
    _jacobi_impl = njit(cache=True)(_jacobi_loops)
    _uniform_fourier_impl = njit(cache=True)(_uniform_fourier_loops)
    _cosine_sum_impl = njit(cache=True)(_cosine_sum_loops)
else:
    _jacobi_impl = _jacobi_numpy
    _uniform_fourier_impl = _uniform_fourier_numpy
    _cosine_sum_impl = _cosine_sum_numpy


def jacobi_eigh(a, tol=1e-12, max_sweeps=64, backend=None):
    """Eigenvalues (unsorted) and eigenvectors of a Hermitian matrix by cyclic Jacobi."""
    a = np.ascontiguousarray(a, dtype=np.complex128)
    return _pick(backend, _jacobi_impl, _jacobi_numpy)(a, float(tol), int(max_sweeps))


def uniform_fourier_sum(nu, t_start, dt, weights, backend=None):
    """``sum_m weights[m] * exp(1j*nu*(t_start + m*dt))`` for every entry of ``nu``."""
    nu = np.asarray(nu, dtype=np.float64)
    flat = np.ascontiguousarray(nu.ravel())
    w = np.ascontiguousarray(weights, dtype=np.float64)
    out = _pick(backend, _uniform_fourier_impl, _uniform_fourier_numpy)(
        flat, float(t_start), float(dt), w)
    return out.reshape(nu.shape)


def cosine_sum(nu, nodes, weights, backend=None):
    """``sum_q weights[q] * cos(nu*nodes[q])`` for every entry of ``nu``."""
    nu = np.asarray(nu, dtype=np.float64)
    flat = np.ascontiguousarray(nu.ravel())
    out = _pick(backend, _cosine_sum_impl, _cosine_sum_numpy)(
        flat, np.ascontiguousarray(nodes, dtype=np.float64),
        np.ascontiguousarray(weights, dtype=np.float64))
    return out.reshape(nu.shape)


def _pick(backend, compiled, fallback):
    if backend is None:
        return compiled
    if backend == "numpy":
        return fallback
    if backend == "numba":
        if not USE_NUMBA:
            raise RuntimeError("numba backend requested but disabled or unavailable")
        return compiled
    raise ValueError(f"unknown backend {backend!r}")
