"""Time the compiled kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--quick]

Each case is checked for agreement before timing; the first numba call
(compilation, or cache load) is excluded.
"""
import argparse
import timeit

import numpy as np

from catalytic_tomography import _kernels


def _hermitian(dim, rng):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (g + g.conj().T)


def cases(quick):
    rng = np.random.default_rng(0)
    dims = (16, 32) if quick else (16, 32, 64)
    for d in dims:
        m = _hermitian(d, rng)
        yield f"jacobi_eigh d={d}", lambda b, m=m: _kernels.jacobi_eigh(m, backend=b), \
            lambda out: np.sort(out[0])
    for d, k in ((64, 8), (256, 8)) if quick else ((64, 8), (256, 8), (256, 11)):
        nu = rng.uniform(-8, 8, (d, d))
        w = rng.random(2 ** k)
        yield f"uniform_fourier_sum {d}x{d}, |S|=2^{k}", \
            lambda b, nu=nu, w=w: _kernels.uniform_fourier_sum(nu, -5.0, 0.01, w, backend=b), \
            lambda out: out
    nodes, w = rng.uniform(0, 90, 6000), rng.random(6000)
    nu = rng.uniform(-3, 3, 2000)
    yield "cosine_sum 2000 x 6000", lambda b: _kernels.cosine_sum(nu, nodes, w, backend=b), \
        lambda out: out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args(argv)
    if not _kernels.USE_NUMBA:
        print("numba is disabled or missing; only the numpy path can run")
        return 1
    print(f"{'kernel':<36}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}{'max diff':>11}")
    for name, run, key in cases(args.quick):
        diff = float(np.max(np.abs(key(run("numpy")) - key(run("numba")))))
        t = {}
        for backend in ("numpy", "numba"):
            number = 1
            while timeit.timeit(lambda: run(backend), number=number) < 0.05:
                number *= 2
            t[backend] = min(timeit.repeat(lambda: run(backend), number=number, repeat=args.repeat)) / number
        print(f"{name:<36}{1e3 * t['numpy']:>12.3f}{1e3 * t['numba']:>12.3f}"
              f"{t['numpy'] / t['numba']:>10.1f}{diff:>11.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
