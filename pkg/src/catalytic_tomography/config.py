"""Experiment configuration: INI file under ``[experiment]`` plus flag overrides."""
import configparser
import os
import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

EXPERIMENTS = (
    "blockdiag-sweep", "bump-check", "riemann-sweep", "lcu-verify", "run", "run-local",
    "lr-sweep", "corr-check", "tfim-xi", "heisenberg-demo",
)
MODELS = ("tfim", "single_qubit", "random")
OUTPUT_ENV = "CATALYTIC_OUTPUT_DIR"
_PAULI_RE = re.compile(r"([IXYZ])(\d*)")


class ConfigError(ValueError):
    def __init__(self, field_name, message):
        super().__init__(f"field {field_name!r}: {message}")
        self.field = field_name


def parse_pauli(text, n):
    """``"Z3Z4"`` -> ``{2: "Z", 3: "Z"}``; sites are 1-indexed in the text.

    A bare letter is allowed on one qubit (``"X"`` is ``"X1"``).
    """
    text = text.replace(" ", "")
    if not text:
        raise ConfigError("obs", "empty Pauli string")
    pos, out = 0, {}
    while pos < len(text):
        m = _PAULI_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ConfigError("obs", f"cannot parse {text!r} at position {pos}")
        letter, digits = m.groups()
        if not digits:
            if n != 1 or len(text) != 1:
                raise ConfigError("obs", f"{text!r}: site index required")
            digits = "1"
        site = int(digits)
        if not 1 <= site <= n:
            raise ConfigError("obs", f"site {site} outside 1..{n}")
        if site - 1 in out:
            raise ConfigError("obs", f"site {site} repeated")
        if letter != "I":
            out[site - 1] = letter
        pos = m.end()
    return out


def parse_list(text, kind=float):
    """``"1..4"`` (inclusive integer range) or a comma-separated list."""
    if isinstance(text, (list, tuple)):
        return [kind(v) for v in text]
    text = str(text).strip()
    if ".." in text and kind is int:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [kind(v) for v in text.split(",") if v.strip()]


def _list(kind):
    return field(default=None, metadata={"list": kind})


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    # Hamiltonian
    model: Optional[str] = None
    L: Optional[int] = None
    g: Optional[float] = None
    theta: Optional[float] = None
    gap: Optional[float] = None
    n: Optional[int] = None
    periodic: bool = False
    # observable
    obs: Optional[str] = None
    # protocol
    eps: float = 0.1
    delta: float = 0.1
    filter: str = "gaussian"
    sigma: Optional[float] = None
    T: Optional[float] = None
    t0: Optional[float] = None
    k: Optional[int] = None
    m: Optional[int] = None
    K: Optional[int] = None
    c_p: float = 0.125
    c_K: float = 4.0
    radius: Optional[int] = None
    radius_rule: str = "calibrated"
    delta_rule: str = "query_budget"
    # filter-only suites
    delta_filter: float = 1.0
    N: int = 64
    # sweep axes
    sigma_ratio: Optional[list] = _list(float)
    t: Optional[list] = _list(float)
    r: Optional[list] = _list(int)
    g_list: Optional[list] = _list(float)
    eps_list: Optional[list] = _list(float)
    k_list: Optional[list] = _list(int)
    n_list: Optional[list] = _list(int)
    instances: int = 1
    seeds: int = 1
    # bookkeeping
    seed: int = 0
    workers: int = 1
    output: Optional[str] = None

    def output_path(self):
        if self.output:
            return Path(self.output)
        base = Path(os.environ.get(OUTPUT_ENV, "results"))
        return base / f"{self.experiment}.csv"

    def hamiltonian_size(self):
        if self.model == "tfim":
            return self.L
        if self.model == "single_qubit":
            return 1
        return self.n

    def pauli(self):
        return parse_pauli(self.obs, self.hamiltonian_size())


_FIELDS = {f.name: f for f in fields(ExperimentConfig)}
_HAM_KEYS = {"tfim": ("L", "g"), "single_qubit": ("theta", "gap"), "random": ("n", "gap")}


def _coerce(name, value):
    f = _FIELDS[name]
    if value is None:
        return None
    if "list" in f.metadata:
        try:
            return parse_list(value, f.metadata["list"])
        except ValueError as exc:
            raise ConfigError(name, str(exc)) from None
    kind = f.type
    try:
        if kind in ("bool", bool):
            if isinstance(value, bool):
                return value
            return str(value).strip().lower() in ("1", "true", "yes", "on")
        if "int" in str(kind):
            return int(value)
        if "float" in str(kind):
            return float(value)
    except ValueError:
        raise ConfigError(name, f"cannot parse {value!r}") from None
    return str(value)


def read_config_file(path):
    """Key-value pairs from the ``[experiment]`` section of an INI file."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    if not parser.read(path):
        raise ConfigError("config", f"cannot read {path}")
    if "experiment" not in parser:
        raise ConfigError("config", "missing [experiment] section")
    return dict(parser["experiment"])


def build_config(experiment=None, file_values=None, overrides=None, defaults=None):
    """Merge suite defaults < file < flags, coerce types and validate."""
    merged = dict(defaults or {})
    for src in (file_values or {}, overrides or {}):
        for key, val in src.items():
            if val is None:
                continue
            if key not in _FIELDS:
                raise ConfigError(key, "unknown field")
            merged[key] = val
    if experiment is not None:
        merged["experiment"] = experiment
    if "experiment" not in merged:
        raise ConfigError("experiment", "no experiment named")
    values = {k: _coerce(k, v) for k, v in merged.items()}
    return validate(ExperimentConfig(**values))


def validate(cfg):
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError("experiment", f"unknown experiment {cfg.experiment!r}")
    if cfg.model is not None:
        if cfg.model not in MODELS:
            raise ConfigError("model", f"unknown model {cfg.model!r}")
        for key in _HAM_KEYS[cfg.model]:
            if getattr(cfg, key) is None:
                raise ConfigError(key, f"required by model {cfg.model!r}")
        others = {k for m, ks in _HAM_KEYS.items() if m != cfg.model for k in ks} - set(_HAM_KEYS[cfg.model])
        for key in sorted(others):
            if getattr(cfg, key) is not None:
                raise ConfigError(key, f"not a parameter of model {cfg.model!r}")
        size = cfg.hamiltonian_size()
        if size is None or size < 1:
            raise ConfigError("L" if cfg.model == "tfim" else "n", "system size must be positive")
        if cfg.obs is not None:
            cfg.pauli()
    for name in ("eps", "delta"):
        if not 0.0 < getattr(cfg, name) < 1.0:
            raise ConfigError(name, "must lie in (0, 1)")
    for f in fields(cfg):
        if "list" in f.metadata:
            val = getattr(cfg, f.name)
            if val is not None and len(val) == 0:
                raise ConfigError(f.name, "sweep axis is empty")
    for name in ("instances", "seeds", "workers"):
        if getattr(cfg, name) < 1:
            raise ConfigError(name, "must be at least 1")
    if cfg.filter not in ("gaussian", "bump"):
        raise ConfigError("filter", f"unknown filter {cfg.filter!r}")
    return cfg


def with_updates(cfg, **changes):
    return validate(replace(cfg, **changes))
