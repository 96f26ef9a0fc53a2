"""Filter functions in the time and frequency domains.

Conventions: ``fhat(nu) = (2 pi)^{-1/2} \\int exp(-i nu t) f(t) dt`` and every
time-domain filter is normalized so that ``fhat(0) = 1``.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize, special

from . import _kernels

SQRT2PI = np.sqrt(2.0 * np.pi)
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class Gaussian:
    """``f(t) = sigma exp(-sigma^2 t^2 / 2)``, ``fhat(nu) = exp(-nu^2 / (2 sigma^2))``.

    ``sigma = inf`` is the constant filter ``fhat = 1`` (frequency domain only).
    """

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class Bump:
    """Truncated sinc-squared product with ``fhat`` supported on ``[-delta, delta]``."""

    delta: float
    n_factors: int = 64

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.n_factors < 2:
            raise ValueError("bump needs at least 2 product factors")


@dataclass(frozen=True)
class StepFreq:
    """Asymmetric frequency profile: ``fhat(mu) = 1`` for ``mu >= 0``, 0 for
    ``mu <= -delta``, linear in between.  No time-domain form."""

    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")


def has_time_domain(spec):
    if isinstance(spec, StepFreq):
        return False
    if isinstance(spec, Gaussian):
        return np.isfinite(spec.sigma)
    return True


def _require_time_domain(spec):
    if not has_time_domain(spec):
        raise ValueError(f"{spec!r} has no time-domain evaluation")


def bump_coefficients(delta, n_factors):
    """``a_1, ..., a_N`` with ``a_n = a_1/(n ln n)`` (n >= 2) and ``sum a_n = delta/2``.

    The infinite series diverges, so ``a_1`` is solved against the truncated sum.
    """
    if n_factors < 2:
        raise ValueError("need n_factors >= 2")
    n = np.arange(2, n_factors + 1, dtype=np.float64)
    ratios = 1.0 / (n * np.log(n))
    a1 = 0.5 * delta / (1.0 + ratios.sum())
    return np.concatenate(([a1], a1 * ratios))


def _sinc(x):
    return np.sinc(x / np.pi)


def _bump_shape(coeffs, t):
    t = np.asarray(t, dtype=np.float64)
    out = np.ones(t.shape)
    for a in coeffs:
        out *= _sinc(a * t) ** 2
    return out


_BUMP_SPAN = 400.0  # normalization integrates |t| <= _BUMP_SPAN / delta


@lru_cache(maxsize=64)
def bump_normalization(delta, n_factors):
    """``c_delta`` making ``(2 pi)^{-1/2} \\int f = 1``."""
    coeffs = bump_coefficients(delta, n_factors)
    shape = lambda t: float(_bump_shape(coeffs, t))
    edges = np.array([0.0, 10.0, 25.0, 50.0, 100.0, 200.0, _BUMP_SPAN]) / delta
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(shape, lo, hi, limit=500, epsabs=1e-15, epsrel=1e-13)
        total += val
    return SQRT2PI / (2.0 * total)


def eval_time(spec, t):
    _require_time_domain(spec)
    t = np.asarray(t, dtype=np.float64)
    if isinstance(spec, Gaussian):
        s = spec.sigma
        return s * np.exp(-0.5 * (s * t) ** 2)
    coeffs = bump_coefficients(spec.delta, spec.n_factors)
    return bump_normalization(spec.delta, spec.n_factors) * _bump_shape(coeffs, t)


def _step_profile(mu, delta):
    mu = np.asarray(mu, dtype=np.float64)
    return np.clip(1.0 + mu / delta, 0.0, 1.0)


@lru_cache(maxsize=64)
def _bump_transform_span(delta, n_factors, tol=1e-9):
    # smallest span with tail mass below tol, found on the tail-mass curve
    f = lambda T: tail_mass(Bump(delta, n_factors), T)[0] - tol
    lo, hi = 10.0 / delta, _BUMP_SPAN / delta
    if f(hi) > 0:
        return hi
    return optimize.brentq(f, lo, hi, xtol=1e-3 / delta)


def _gl_panels(a, b, n_panels):
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    weights = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return nodes, weights


def cosine_transform(spec, nu, T):
    """``(2 pi)^{-1/2} \\int_{-T}^{T} f(t) cos(nu t) dt`` by Gauss-Legendre panels."""
    nu = np.asarray(nu, dtype=np.float64)
    nu_max = float(np.max(np.abs(nu))) if nu.size else 0.0
    scale = spec.sigma if isinstance(spec, Gaussian) else spec.delta
    # panels resolve both the filter and the fastest cosine
    n_panels = int(np.ceil(T * (nu_max + 2.0 * scale) / np.pi)) + 8
    nodes, weights = _gl_panels(0.0, T, n_panels)
    w = 2.0 * weights * eval_time(spec, nodes) / SQRT2PI
    return _kernels.cosine_sum(nu, nodes, w)


def eval_freq(spec, nu):
    nu = np.asarray(nu, dtype=np.float64)
    if isinstance(spec, Gaussian):
        return np.exp(-0.5 * (nu / spec.sigma) ** 2)
    if isinstance(spec, StepFreq):
        return _step_profile(nu, spec.delta)
    T = _bump_transform_span(spec.delta, spec.n_factors)
    return cosine_transform(spec, nu, T)


def truncated_response(spec, nu, T):
    """``(2 pi)^{-1/2} \\int_{-T}^{T} f(t) exp(i nu t) dt`` (real: f is even)."""
    nu = np.asarray(nu, dtype=np.float64)
    if isinstance(spec, Gaussian):
        s = spec.sigma
        # erf written through the Faddeeva function so large |nu|/sigma stays finite
        z1 = (nu / s + 1j * s * T) / np.sqrt(2.0)
        z2 = (-nu / s + 1j * s * T) / np.sqrt(2.0)
        corr = np.exp(1j * nu * T) * special.wofz(z1) + np.exp(-1j * nu * T) * special.wofz(z2)
        return np.exp(-0.5 * (nu / s) ** 2) - 0.5 * np.exp(-0.5 * (s * T) ** 2) * corr.real
    _require_time_domain(spec)
    return cosine_transform(spec, nu, T)


def sup_abs(spec):
    """``sup_t |f(t)|`` (attained at t = 0)."""
    _require_time_domain(spec)
    return float(eval_time(spec, 0.0))


_SINC_DERIV_MAX = None


def _sinc_derivative_max():
    global _SINC_DERIV_MAX
    if _SINC_DERIV_MAX is None:
        # |sinc'| peaks near x = 2.08; later lobes decay like 1/x
        d = lambda x: -abs(np.cos(x) * x - np.sin(x)) / x ** 2
        res = optimize.minimize_scalar(d, bounds=(0.5, 3.5), method="bounded",
                                       options={"xatol": 1e-12})
        _SINC_DERIV_MAX = float(-res.fun)
    return _SINC_DERIV_MAX


def sup_derivative(spec):
    """Explicit upper bound on ``sup_t |f'(t)|``.

    Gaussian: exactly ``sigma^2 e^{-1/2}``.  Bump: product rule with
    ``|sinc| <= 1`` gives ``c_delta * delta * max|sinc'|``.
    """
    _require_time_domain(spec)
    if isinstance(spec, Gaussian):
        return float(spec.sigma ** 2 * np.exp(-0.5))
    c = bump_normalization(spec.delta, spec.n_factors)
    return float(c * spec.delta * _sinc_derivative_max())


def _bump_decay_envelope(delta, t):
    x = delta * t
    return 2.0 * SQRT2PI * (np.e * delta) ** 2 * t * np.exp(-(2.0 / 7.0) * x / np.log(x) ** 2)


def tail_mass(spec, T):
    """``(2 pi)^{-1/2} \\int_{|t|>T} f(t) dt`` and its analytic bound.

    Returns ``(numeric, bound)``.  The bump bound uses the decay envelope,
    valid only for ``T >= e^{1/sqrt 2}/delta``; below that it is ``inf``.
    """
    _require_time_domain(spec)
    if T <= 0:
        raise ValueError("T must be positive")
    if isinstance(spec, Gaussian):
        x = spec.sigma * T
        numeric = float(special.erfc(x / np.sqrt(2.0)))
        bound = float(2.0 / SQRT2PI * np.exp(-0.5 * x * x) / x)
        return numeric, bound
    delta = spec.delta
    coeffs = bump_coefficients(delta, spec.n_factors)
    c = bump_normalization(delta, spec.n_factors)
    shape = lambda t: float(_bump_shape(coeffs, t))
    hi = _BUMP_SPAN / delta
    if T >= hi:
        numeric = 0.0
    else:
        edges = np.unique(np.concatenate(([T], [e for e in np.array([25.0, 50.0, 100.0, 200.0]) / delta if e > T], [hi])))
        numeric = 0.0
        for lo, up in zip(edges[:-1], edges[1:]):
            val, _ = integrate.quad(shape, lo, up, limit=500, epsabs=1e-16, epsrel=1e-12)
            numeric += val
        numeric = 2.0 * c * numeric / SQRT2PI
    if T < np.exp(1.0 / np.sqrt(2.0)) / delta:
        return float(numeric), float("inf")
    env, _ = integrate.quad(lambda t: _bump_decay_envelope(delta, t), T, np.inf, limit=500)
    return float(numeric), float(2.0 * env / SQRT2PI)
