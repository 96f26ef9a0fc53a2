"""``catalytic-tomography <experiment> [--config FILE] [--flag value ...]``."""
import argparse
import sys
from dataclasses import fields

from .config import EXPERIMENTS, ConfigError, ExperimentConfig, read_config_file
from .experiments import make_config, run_experiment, write_csv

_HELP = {
    "model": "tfim | single_qubit | random",
    "obs": 'Pauli string with 1-indexed sites, e.g. "Z3Z4"',
    "r": 'radii, "1..4" or "1,2,3"',
    "t": "comma-separated times",
    "delta_filter": "bump filter width",
    "N": "number of sinc^2 factors in the bump",
    "workers": "processes for sweep points",
    "output": "CSV path (default $CATALYTIC_OUTPUT_DIR/<experiment>.csv)",
}


def _flag(name):
    return "--" + name.replace("_", "-")


def build_parser():
    parser = argparse.ArgumentParser(prog="catalytic-tomography", description=__doc__)
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="INI file with an [experiment] section")
        p.add_argument("--append", action="store_true", help="append rows instead of overwriting")
        p.add_argument("--quiet", action="store_true")
        for f in fields(ExperimentConfig):
            if f.name == "experiment":
                continue
            p.add_argument(_flag(f.name), dest=f.name, default=None, help=_HELP.get(f.name))
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    opts = vars(args)
    experiment = opts.pop("experiment")
    config_path = opts.pop("config")
    append = opts.pop("append")
    quiet = opts.pop("quiet")
    try:
        file_values = read_config_file(config_path) if config_path else {}
        file_values.pop("experiment", None)
        cfg = make_config(experiment, file_values, **opts)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    result = run_experiment(cfg)
    path = write_csv(result, append=append)
    if not quiet:
        print(f"{experiment}: {len(result.rows)} rows -> {path}")
        for check in result.checks:
            print(f"  [{'PASS' if check.passed else 'FAIL'}] {check.name}: {check.detail}")
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())
