"""Experiment suites: each turns an :class:`ExperimentConfig` into CSV rows and checks.

Every check is recomputed from the rows alone (:func:`evaluate`), so a CSV on
disk can be re-audited without rerunning anything.
"""
import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .block_encoding import assemble_lcu, unitarity_error, verify_block
from .config import ExperimentConfig, build_config
from .filtered import (TimeGrid, block_diag_leakage, filtered_exact, filtered_riemann,
                       riemann_error_bound)
from .filters import Bump, Gaussian, eval_freq
from .linalg import hermitian_eig, operator_norm
from .locality import (PatchEvolver, correlation_check, fit_lr_velocity, lr_bound, lr_dataset,
                       space_truncation_error, tfim_correlation_length)
from .models import (assemble_dense, build_random_gapped, build_single_qubit, build_tfim,
                     pauli_string, random_observable, spectral_data)
from .protocol import ProtocolParams, prepare, prepare_local, run_prepared

SCHEMA_VERSION = 1
XI_GAP_FLOOR = 1.0
CONVERGENCE_RANGE = (1.7, 2.3)
SLOPE_RANGE = (0.85, 1.15)
CONVERGENCE_INSTANCES = 6


def point_seed(master, index):
    """Independent 32-bit seed for sweep point ``index``."""
    ss = np.random.SeedSequence(master, spawn_key=(index,))
    return int(ss.generate_state(1, dtype=np.uint32)[0])


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    columns: list
    rows: list
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def csv_text(self, drop=()):
        return rows_to_csv(self.columns, self.rows, drop)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return ""
        return format(value, ".17g")
    return "" if value is None else str(value)


def rows_to_csv(columns, rows, drop=()):
    cols = [c for c in columns if c not in drop]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in cols])
    return buf.getvalue()


def write_csv(result, path=None, append=False):
    path = Path(path or result.config.output_path())
    path.parent.mkdir(parents=True, exist_ok=True)
    text = result.csv_text()
    if append and path.exists() and path.stat().st_size > 0:
        text = text.split("\n", 1)[1]
        with path.open("a", newline="") as fh:
            fh.write(text)
    else:
        path.write_text(text)
    return path


def read_csv(path):
    """Rows as dicts of floats (blank cells -> nan); text columns stay strings."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for row in rows:
        parsed = {}
        for key, val in row.items():
            if val == "":
                parsed[key] = float("nan")
                continue
            try:
                parsed[key] = float(val)
            except ValueError:
                parsed[key] = val
        out.append(parsed)
    return out


# ---------------------------------------------------------------------------
# shared builders
# ---------------------------------------------------------------------------

def build_hamiltonian(cfg):
    """Dense matrix and (for lattices) the LatticeHamiltonian."""
    if cfg.model == "tfim":
        lat = build_tfim(cfg.L, cfg.g, cfg.periodic)
        return assemble_dense(lat), lat
    if cfg.model == "single_qubit":
        return build_single_qubit(cfg.theta, cfg.gap), None
    if cfg.model == "random":
        return build_random_gapped(cfg.n, cfg.seed, cfg.gap), None
    raise ValueError("configuration has no Hamiltonian")


def protocol_params(cfg, **changes):
    kw = dict(epsilon=cfg.eps, delta=cfg.delta, filter=cfg.filter, c_p=cfg.c_p, c_K=cfg.c_K,
              sigma=cfg.sigma, T=cfg.T, t0=cfg.t0, k=cfg.k, m=cfg.m, K=cfg.K,
              bump_factors=cfg.N, radius=cfg.radius, radius_rule=cfg.radius_rule,
              delta_rule=cfg.delta_rule)
    kw.update(changes)
    return ProtocolParams(**kw)


def _instance(cfg, i, n):
    """Random gapped H, its eigensystem and a unit-norm observable for point ``i``."""
    seed = point_seed(cfg.seed, i)
    rng = np.random.default_rng(seed)
    gap = float(rng.uniform(0.5, 2.0))
    H = build_random_gapped(n, seed, gap)
    A = random_observable(n, rng)
    return seed, gap, hermitian_eig(H), A


def _map(cfg, fn, points):
    if cfg.workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            chunks = list(pool.map(fn, [cfg] * len(points), points))
    else:
        chunks = [fn(cfg, p) for p in points]
    return [row for chunk in chunks for row in chunk]


def _timed(fn):
    def wrapper(cfg, point):
        start = time.perf_counter()
        rows = fn(cfg, point)
        per_row = (time.perf_counter() - start) / max(len(rows), 1)
        for row in rows:
            row["wall_time"] = per_row
            row["schema"] = SCHEMA_VERSION
        return rows
    wrapper.__name__ = fn.__name__
    wrapper.__qualname__ = fn.__qualname__
    return wrapper


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

@_timed
def _blockdiag_point(cfg, i):
    n = cfg.n_list[i % len(cfg.n_list)]
    seed, gap, eig, A = _instance(cfg, i, n)
    psi0 = eig.eigenvectors[:, 0]
    rows = []
    for ratio in cfg.sigma_ratio:
        F = filtered_exact(A, eig, Gaussian(ratio * gap))
        bound = math.exp(-1.0 / (2.0 * ratio ** 2))
        leak = block_diag_leakage(F, psi0)
        rows.append(dict(instance=i, seed=seed, n=n, gap=gap, sigma_ratio=ratio, sigma=ratio * gap,
                         leakage=leak, bound=bound, passed=leak <= bound + 1e-9))
    return rows


@_timed
def _bump_point(cfg, i):
    spec = Bump(cfg.delta_filter, cfg.N)
    if i == 0:
        nu = cfg.delta_filter * np.linspace(1.05, 3.0, 400)
        val = float(np.max(np.abs(eval_freq(spec, np.concatenate([nu, -nu])))))
        return [dict(kind="support", instance=0, seed=0, n=0, gap=float("nan"), value=val,
                     threshold=1e-4, passed=val <= 1e-4)]
    n = cfg.n_list[(i - 1) % len(cfg.n_list)]
    seed = point_seed(cfg.seed, i)
    rng = np.random.default_rng(seed)
    gap = cfg.delta_filter * float(rng.uniform(1.0, 2.0))
    eig = hermitian_eig(build_random_gapped(n, seed, gap))
    A = random_observable(n, rng)
    leak = block_diag_leakage(filtered_exact(A, eig, spec), eig.eigenvectors[:, 0])
    return [dict(kind="leakage", instance=i, seed=seed, n=n, gap=gap, value=leak,
                 threshold=1e-6, passed=leak <= 1e-6)]


def _riemann_k(eig, spec, T, extra=0):
    width = float(eig.eigenvalues[-1] - eig.eigenvalues[0])
    reach = 3.0 * spec.sigma if isinstance(spec, Gaussian) else spec.delta
    return int(math.ceil(math.log2(2.0 * T * (width + reach)))) + extra


@_timed
def _riemann_point(cfg, i):
    n = cfg.n_list[i % len(cfg.n_list)]
    seed, gap, eig, A = _instance(cfg, i, n)
    rng = np.random.default_rng(seed + 1)
    if i % 2:
        spec = Bump(gap, cfg.N)
        T = float(rng.uniform(15.0, 30.0)) / gap
        width_param = gap
    else:
        spec = Gaussian(gap * float(rng.choice([0.5, 1.0])))
        T = float(rng.uniform(1.5, 4.0)) / spec.sigma
        width_param = spec.sigma
    k = _riemann_k(eig, spec, T, extra=int(rng.integers(0, 3)))
    grid = TimeGrid.from_span(T, k)
    measured = operator_norm(filtered_riemann(A, eig, spec, grid).matrix - filtered_exact(A, eig, spec).matrix)
    bound = riemann_error_bound(A, eig, spec, grid)
    rows = [dict(kind="bound", instance=i, seed=seed, n=n, filter=type(spec).__name__.lower(),
                 width=width_param, T=T, k=k, value=measured, threshold=bound, passed=measured <= bound)]
    if isinstance(spec, Gaussian) and i < 2 * CONVERGENCE_INSTANCES:
        # first-order check against the window-truncated operator
        Tc = 1.5 / spec.sigma
        kc = _riemann_k(eig, spec, Tc, extra=2)
        exact = filtered_exact(A, eig, spec, T=Tc).matrix
        errs = [operator_norm(filtered_riemann(A, eig, spec, TimeGrid.from_span(Tc, kk)).matrix - exact)
                for kk in (kc, kc + 1)]
        ratio = errs[0] / errs[1]
        lo, hi = CONVERGENCE_RANGE
        rows.append(dict(kind="convergence", instance=i, seed=seed, n=n, filter="gaussian",
                         width=spec.sigma, T=Tc, k=kc, value=ratio, threshold=float("nan"),
                         passed=lo <= ratio <= hi))
    return rows


@_timed
def _lcu_point(cfg, i):
    n = cfg.n_list[i % len(cfg.n_list)]
    k = cfg.k_list[i % len(cfg.k_list)]
    seed = point_seed(cfg.seed, i)
    rng = np.random.default_rng(seed)
    gap = float(rng.uniform(0.5, 2.0))
    eig = hermitian_eig(build_random_gapped(n, seed, gap))
    letters = rng.choice(list("XYZ"), size=n)
    A = pauli_string({s: str(c) for s, c in enumerate(letters)}, n)
    spec = Gaussian(gap / 2.0)
    grid = TimeGrid.from_span(3.0 / spec.sigma, k)
    circuit = assemble_lcu(A, eig, spec, grid)
    F = filtered_riemann(A, eig, spec, grid)
    err = verify_block(circuit, F)
    return [dict(instance=i, seed=seed, n=n, k=k, observable="".join(letters), lam=circuit.lam,
                 block_error=err, unitarity_error=unitarity_error(circuit), passed=err <= 1e-9)]


def _run_rows(cfg, prep, params, extra_keys=()):
    rows = []
    for i in range(cfg.seeds):
        seed = point_seed(cfg.seed, i)
        res = run_prepared(prep, seed, params)
        row = dict(seed_index=i, seed=seed, estimate=res.estimate, truth=res.truth,
                   abs_error=res.abs_error, success=res.success,
                   trace_dist=res.trace_dist_to_ground, leakage=prep.leakage,
                   riemann_bound=prep.riemann_bound, symmetrization_error=prep.symmetrization_error,
                   lam=prep.lam, T=prep.derived.T, k=prep.derived.grid.k, m=prep.derived.m,
                   K=prep.derived.K, delta_prime=prep.derived.delta_prime,
                   queries=res.resources["block_encoding_queries"],
                   total_time=res.resources["total_heisenberg_time"],
                   eps=cfg.eps, delta=cfg.delta)
        for key in extra_keys:
            row[key] = prep.extras[key]
        rows.append(row)
    return rows


@_timed
def _run_point(cfg, _):
    H, _lat = build_hamiltonian(cfg)
    A = pauli_string(cfg.pauli(), cfg.hamiltonian_size())
    params = protocol_params(cfg)
    return _run_rows(cfg, prepare(H, A, params), params)


_LOCAL_KEYS = ("radius", "radius_lieb_robinson", "c_fit", "truncation_error", "truncation_budget",
               "patch_terms", "total_terms")


@_timed
def _run_local_point(cfg, _):
    _, lat = build_hamiltonian(cfg)
    if lat is None:
        raise ValueError("run-local needs a lattice model")
    pauli = cfg.pauli()
    A = pauli_string(pauli, lat.n)
    params = protocol_params(cfg)
    prep = prepare_local(lat, A, tuple(sorted(pauli)), params)
    rows = _run_rows(cfg, prep, params, _LOCAL_KEYS)
    for row in rows:
        row["L"] = lat.n
    return rows


@_timed
def _lr_point(cfg, _):
    _, lat = build_hamiltonian(cfg)
    pauli = cfg.pauli()
    support = tuple(sorted(pauli))
    A = pauli_string(pauli, lat.n)
    ev = PatchEvolver(lat, support)
    points = lr_dataset(A, support, lat, cfg.r, cfg.t, ev)
    try:
        c = fit_lr_velocity(points)
    except ValueError:
        c = float("nan")
    rows = []
    for p in points:
        bound = lr_bound(p.support_size, c, p.t, p.r) if math.isfinite(c) else float("nan")
        ok = p.measured_error <= bound * (1 + 1e-9) if p.r > 0 and p.t != 0 else True
        rows.append(dict(kind="lr", r=p.r, t=p.t, measured=p.measured_error, c_fit=c,
                         bound=bound, passed=ok))
    # filtered-operator truncation versus lambda * max_t lr_error
    gap = spectral_data(assemble_dense(lat)).gap
    spec = Gaussian(cfg.sigma if cfg.sigma is not None else gap)
    T = cfg.T if cfg.T is not None else 3.0 / spec.sigma
    grid = TimeGrid.from_span(T, cfg.k if cfg.k is not None else 5)
    for r in cfg.r:
        te = space_truncation_error(A, support, lat, spec, r, grid,
                                    c_fit=c if math.isfinite(c) else None, evolver=ev,
                                    with_lr_comparison=True)
        rows.append(dict(kind="truncation", r=r, t=T, measured=te.measured, c_fit=c,
                         bound=te.lr_comparison, passed=te.measured <= te.lr_comparison * (1 + 1e-9) + 1e-13))
    return rows


@_timed
def _corr_point(cfg, i):
    rows = []
    if cfg.model == "random":
        n = cfg.n_list[i % len(cfg.n_list)]
        seed = point_seed(cfg.seed, i)
        H = build_random_gapped(n, seed, cfg.gap)
        pairs = [(0, j) for j in range(1, n)]
        label = float("nan")
    else:
        g = cfg.g_list[i]
        n = cfg.L
        seed = 0
        H = assemble_dense(build_tfim(n, g, cfg.periodic))
        pairs = [(0, j) for j in range(1, n)]
        label = g
    gap = spectral_data(H).gap
    for a, b in pairs:
        A = pauli_string({a: "Z"}, n)
        B = pauli_string({b: "Z"}, n)
        rec = correlation_check(H, A, B, gap, separation=b - a)
        rows.append(dict(instance=i, seed=seed, g=label, n=n, gap=gap, separation=b - a,
                         correlator=rec.correlator, eta=rec.eta, slack=rec.slack,
                         passed=rec.slack >= -1e-10))
    return rows


@_timed
def _xi_point(cfg, i):
    g = cfg.g_list[i]
    res = tfim_correlation_length(cfg.L, g)
    return [dict(g=g, L=cfg.L, gap=res.gap, xi=res.xi, xi_gap=res.xi * res.gap,
                 residual=res.residual, flagged=res.flagged)]


@_timed
def _heisenberg_point(cfg, i):
    eps = cfg.eps_list[i]
    H, _ = build_hamiltonian(cfg)
    A = pauli_string(cfg.pauli(), cfg.hamiltonian_size())
    params = protocol_params(cfg, epsilon=eps)
    prep = prepare(H, A, params)
    res = run_prepared(prep, point_seed(cfg.seed, i), params)
    return [dict(eps=eps, seed=res.seed, estimate=res.estimate, truth=res.truth,
                 abs_error=res.abs_error, trace_dist=res.trace_dist_to_ground,
                 T=prep.derived.T, m=prep.derived.m, K=prep.derived.K,
                 queries=res.resources["block_encoding_queries"],
                 total_time=res.resources["total_heisenberg_time"])]


# ---------------------------------------------------------------------------
# checks, computed from rows only
# ---------------------------------------------------------------------------

def _all_rows(rows, name, kind=None):
    sel = [r for r in rows if kind is None or r.get("kind") == kind]
    bad = [r for r in sel if not bool(r["passed"])]
    return Check(name, bool(sel) and not bad, f"{len(sel) - len(bad)}/{len(sel)} rows pass")


def _contract(rows, cfg):
    freq = float(np.mean([bool(r["success"]) for r in rows]))
    td = float(np.mean([float(r["trace_dist"]) for r in rows]))
    need = 1.0 - cfg.delta - 0.05
    return [Check("success frequency", freq >= need, f"{freq:.3f} (need >= {need:.3f})"),
            Check("mean trace distance", td <= cfg.delta, f"{td:.3e} (need <= {cfg.delta})")]


def _checks_run_local(rows, cfg):
    out = _contract(rows, cfg)
    r, L = int(rows[0]["radius"]), int(rows[0]["L"])
    out.append(Check("radius below L/2", 2 * r < L, f"r = {r}, L = {L}"))
    te, budget = float(rows[0]["truncation_error"]), float(rows[0]["truncation_budget"])
    out.append(Check("truncation within delta/4", te <= budget, f"{te:.3e} (budget {budget:.3e})"))
    return out


def _checks_lr(rows, cfg):
    lr = [r for r in rows if r["kind"] == "lr"]
    mono = True
    for t in sorted({float(r["t"]) for r in lr}):
        errs = [float(r["measured"]) for r in sorted(lr, key=lambda r: r["r"]) if float(r["t"]) == t]
        mono &= all(b <= a + 1e-12 for a, b in zip(errs, errs[1:]))
    return [Check("monotone in r", mono, "error non-increasing in r at every t"),
            _all_rows(rows, "single fitted velocity bounds every point", "lr"),
            _all_rows(rows, "truncation below lambda * max_t lr_error", "truncation")]


def _checks_xi(rows, cfg):
    by_gap = sorted(rows, key=lambda r: -float(r["gap"]))
    xis = [float(r["xi"]) for r in by_gap]
    inc = all(b > a for a, b in zip(xis, xis[1:]))
    floor = min(float(r["xi_gap"]) for r in rows)
    flagged = sum(bool(r["flagged"]) for r in rows)
    return [Check("xi grows as the gap closes", inc, " < ".join(f"{x:.3f}" for x in xis)),
            Check("min xi * gap above floor", floor >= XI_GAP_FLOOR,
                  f"{floor:.3f} (floor {XI_GAP_FLOOR}; {flagged} fits flagged)")]


def _checks_heisenberg(rows, cfg):
    eps = np.array([float(r["eps"]) for r in rows])
    times = np.array([float(r["total_time"]) for r in rows])
    slope = float(np.polyfit(np.log(1.0 / eps), np.log(times), 1)[0])
    lo, hi = SLOPE_RANGE
    return [Check("log-log slope of time vs 1/eps", lo <= slope <= hi, f"{slope:.4f} (need [{lo}, {hi}])")]


@dataclass(frozen=True)
class Suite:
    columns: tuple
    run_point: object
    count: object
    checks: object
    defaults: dict


_COMMON = ("schema", "wall_time")
SUITES = {
    "blockdiag-sweep": Suite(
        ("instance", "seed", "n", "gap", "sigma_ratio", "sigma", "leakage", "bound", "passed") + _COMMON,
        _blockdiag_point, lambda c: c.instances,
        lambda rows, c: [_all_rows(rows, "leakage <= exp(-gap^2 / 2 sigma^2)")],
        dict(instances=50, sigma_ratio="0.25,0.5,1", n_list="1,2,3,4,5")),
    "bump-check": Suite(
        ("kind", "instance", "seed", "n", "gap", "value", "threshold", "passed") + _COMMON,
        _bump_point, lambda c: c.instances + 1,
        lambda rows, c: [_all_rows(rows, "transform below 1e-4 outside 1.05 delta", "support"),
                         _all_rows(rows, "leakage <= 1e-6 when delta <= gap", "leakage")],
        dict(instances=10, n_list="1,2,3")),
    "riemann-sweep": Suite(
        ("kind", "instance", "seed", "n", "filter", "width", "T", "k", "value", "threshold", "passed") + _COMMON,
        _riemann_point, lambda c: c.instances,
        lambda rows, c: [_all_rows(rows, "measured error within analytic bound", "bound"),
                         _all_rows(rows, "two-grid ratio in [1.7, 2.3]", "convergence")],
        dict(instances=30, n_list="1,2,3")),
    "lcu-verify": Suite(
        ("instance", "seed", "n", "k", "observable", "lam", "block_error", "unitarity_error", "passed") + _COMMON,
        _lcu_point, lambda c: len(c.n_list),
        lambda rows, c: [_all_rows(rows, "lambda <0|C|0> matches the Riemann sum to 1e-9")],
        dict(n_list="1,1,1,2,2,3,4,4", k_list="2,5,8,4,8,6,3,6")),
    "run": Suite(
        ("seed_index", "seed", "estimate", "truth", "abs_error", "success", "trace_dist", "leakage",
         "riemann_bound", "symmetrization_error", "lam", "T", "k", "m", "K", "delta_prime",
         "queries", "total_time", "eps", "delta") + _COMMON,
        _run_point, lambda c: 1, _contract,
        dict(model="tfim", L=6, g=2.0, obs="Z3Z4")),
    "run-local": Suite(
        ("seed_index", "seed", "estimate", "truth", "abs_error", "success", "trace_dist", "leakage",
         "riemann_bound", "symmetrization_error", "lam", "T", "k", "m", "K", "delta_prime",
         "queries", "total_time", "eps", "delta", "L") + _LOCAL_KEYS + _COMMON,
        _run_local_point, lambda c: 1, _checks_run_local,
        dict(model="tfim", L=10, g=2.0, obs="Z5")),
    "lr-sweep": Suite(
        ("kind", "r", "t", "measured", "c_fit", "bound", "passed") + _COMMON,
        _lr_point, lambda c: 1, _checks_lr,
        dict(model="tfim", L=10, g=1.0, obs="Z5", t="0.5,1,2", r="1..4")),
    "corr-check": Suite(
        ("instance", "seed", "g", "n", "gap", "separation", "correlator", "eta", "slack", "passed") + _COMMON,
        _corr_point, lambda c: c.instances if c.model == "random" else len(c.g_list),
        lambda rows, c: [_all_rows(rows, "correlator <= ||[B, A_f]|| (slack >= -1e-10)")],
        dict(model="tfim", L=8, g=2.0, g_list="2.0,1.5,1.2", n_list="2,3,4")),
    "tfim-xi": Suite(
        ("g", "L", "gap", "xi", "xi_gap", "residual", "flagged") + _COMMON,
        _xi_point, lambda c: len(c.g_list), _checks_xi,
        dict(model="tfim", L=12, g=2.0, g_list="2.0,1.5,1.2,1.1")),
    "heisenberg-demo": Suite(
        ("eps", "seed", "estimate", "truth", "abs_error", "trace_dist", "T", "m", "K", "queries",
         "total_time") + _COMMON,
        _heisenberg_point, lambda c: len(c.eps_list), _checks_heisenberg,
        dict(model="single_qubit", theta=math.pi / 3, gap=1.0, obs="X1", eps_list="0.2,0.1,0.05,0.025")),
}


def suite_defaults(name):
    if name not in SUITES:
        raise ValueError(f"unknown experiment {name!r}")
    return dict(SUITES[name].defaults)


def make_config(experiment, file_values=None, **overrides):
    """Config for ``experiment`` with suite defaults, file values and flags layered in that order."""
    defaults = suite_defaults(experiment)
    file_values = dict(file_values or {})
    # a model chosen by the user replaces the suite's default Hamiltonian wholesale
    if "model" in file_values or overrides.get("model") is not None:
        for key in ("model", "L", "g", "theta", "gap", "n"):
            defaults.pop(key, None)
    return build_config(experiment, file_values, overrides, defaults)


def evaluate(experiment, rows, cfg):
    """Checks for ``rows``; works equally on fresh rows and rows read back from CSV."""
    return SUITES[experiment].checks(rows, cfg)


def run_experiment(cfg):
    suite = SUITES[cfg.experiment]
    points = list(range(suite.count(cfg)))
    rows = _map(cfg, suite.run_point, points)
    for row in rows:
        for key, val in row.items():
            if isinstance(val, (float, np.floating)) and not math.isfinite(val) and key not in _NULLABLE:
                raise ValueError(f"non-finite value in column {key!r}")
    return ExperimentResult(cfg, list(suite.columns), rows, evaluate(cfg.experiment, rows, cfg))


# columns that may legitimately be blank
_NULLABLE = {"gap", "threshold", "c_fit", "bound", "g", "xi", "xi_gap"}
