"""Command-line driver.

Every subcommand writes CSV (to ``--output`` or stdout).  The first line is a
``#`` comment carrying the package version and the canonical JSON of the
resolved configuration, so identical configurations produce identical bytes.

Exit codes::

    0  all checks passed
    1  an inequality / exact check failed
    2  usage error (bad or unknown flag)
    3  statistical check failed (a Wilson lower limit above a bound)
    4  unknown key in a config file
    5  config file unreadable or not valid JSON
    6  parameter outside its domain
    7  numerical routine failed to converge
"""
import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from ._io import canonical_json, render_csv, write_atomic
from ._validate import DomainError
from .constants import EIGHT_OVER_LN2, LEGACY_LOWER_CONSTANT, ConvergenceError, find_x0
from .inequalities import DEFAULT_TOLERANCE
from .lab import (TAIL_HEADER, SampleConfig, distribution_from_config, expected_missing_mass,
                  parse_distribution, run_tail_experiment)
from .occupancy import TAIL_BOUND_HEADER, tail_bound
from .oracle import (OracleSummary, exact_independent_distribution, exact_missing_mass_distribution,
                     exact_tail, summarize)
from .reports import SUMMARY_HEADER
from .verification import DEFAULT_GRID, SUITES, run_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_STATISTICAL = 3
EXIT_UNKNOWN_KEY = 4
EXIT_BAD_FILE = 5
EXIT_DOMAIN = 6
EXIT_NUMERICAL = 7

CONFIG_KEYS = {
    "verify": {"suite", "tol", "grid", "seed"},
    "constants": {"tol"},
    "bounds": {"n", "epsilons", "tol"},
    "simulate": {"distribution", "n", "trials", "seed", "epsilons"},
    "oracle": {"distribution", "n", "lambda_grid", "threshold"},
}

DEFAULTS = {
    "verify": {"suite": "all", "tol": DEFAULT_TOLERANCE, "grid": {}, "seed": 0},
    "constants": {"tol": 1e-12},
    "bounds": {"tol": 1e-12},
    "simulate": {"trials": 100000, "seed": 0},
    "oracle": {"lambda_grid": "-20:20:401", "threshold": None},
}

REQUIRED = {
    "bounds": ("n", "epsilons"),
    "simulate": ("distribution", "n", "epsilons"),
    "oracle": ("distribution", "n"),
}


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


@dataclass
class SuiteConfig:
    command: str
    params: dict
    output: str = None

    def canonical(self):
        return canonical_json({"command": self.command, **self.params})


# --- parsing ----------------------------------------------------------------

def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _grid_spec(text):
    out = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        if not sep or key not in DEFAULT_GRID:
            raise argparse.ArgumentTypeError(
                f"grid entries look like key=int with key in {sorted(DEFAULT_GRID)}, got {part!r}")
        try:
            out[key] = int(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"grid size must be an integer, got {value!r}")
    return out


def build_parser():
    parser = argparse.ArgumentParser(prog="missingmass", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with parameters; flags take precedence")
        p.add_argument("-o", "--output", help="CSV destination (default: stdout)")
        return p

    v = common(sub.add_parser("verify", help="grid checks of the MGF inequalities"))
    v.add_argument("--suite", choices=(*SUITES, "all"))
    v.add_argument("--tol", type=float)
    v.add_argument("--grid", type=_grid_spec, help="e.g. p=2001,t=1201,s=401,lambda=400,nmax=10")
    v.add_argument("--seed", type=int)

    c = common(sub.add_parser("constants", help="x0, C0 and comparison constants"))
    c.add_argument("--tol", type=float)

    b = common(sub.add_parser("bounds", help="tabulate upper/lower tail bounds"))
    b.add_argument("--n", type=int)
    b.add_argument("--eps", dest="epsilons", type=_float_list)
    b.add_argument("--tol", type=float)

    s = common(sub.add_parser("simulate", help="Monte Carlo tail frequencies of the missing mass"))
    s.add_argument("--dist", dest="distribution",
                   help="uniform:K | zipf:K,ALPHA | truncated-geometric:K,RHO | explicit:P1,P2,...")
    s.add_argument("--n", type=int)
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--eps", dest="epsilons", type=_float_list)

    o = common(sub.add_parser("oracle", help="exact laws of U_n and U_n' by enumeration"))
    o.add_argument("--dist", dest="distribution", help="as for simulate, e.g. uniform:3")
    o.add_argument("--n", type=int)
    o.add_argument("--lambda-grid", dest="lambda_grid", help="LO:HI:NUM (default -20:20:401)")
    o.add_argument("--threshold", type=float, help="also report P(U > x) under both laws")
    return parser


def _read_config_file(path, command):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config {path!r}: {exc}", EXIT_BAD_FILE)
    if not isinstance(data, dict):
        raise CliError(f"config {path!r} must hold a JSON object", EXIT_BAD_FILE)
    unknown = set(data) - CONFIG_KEYS[command]
    if unknown:
        raise CliError(f"unknown config keys for {command}: {sorted(unknown)}", EXIT_UNKNOWN_KEY)
    return data


def parse_config(argv):
    """Resolve argv (and an optional JSON file) into a SuiteConfig.

    Raises SystemExit(2) on usage errors and CliError for file/key/domain problems.
    """
    args = build_parser().parse_args(argv)
    command = args.command
    params = dict(DEFAULTS.get(command, {}))
    if args.config:
        params.update(_read_config_file(args.config, command))
    for key in CONFIG_KEYS[command]:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    missing = [k for k in REQUIRED.get(command, ()) if params.get(k) is None]
    if missing:
        raise CliError(f"{command} needs {', '.join(missing)}", EXIT_DOMAIN)
    _validate(command, params)
    return SuiteConfig(command, params, args.output)


def _validate(command, params):
    try:
        if "tol" in params and not float(params["tol"]) > 0:
            raise DomainError("tol must be positive")
        if command == "verify":
            if params["suite"] not in (*SUITES, "all"):
                raise DomainError(f"unknown suite {params['suite']!r}")
            grid = params["grid"]
            if not isinstance(grid, dict) or set(grid) - set(DEFAULT_GRID):
                raise CliError(f"unknown grid keys {sorted(set(grid) - set(DEFAULT_GRID))}", EXIT_UNKNOWN_KEY)
            if any(not isinstance(v, int) or v < 2 for k, v in grid.items() if k != "nmax"):
                raise DomainError("grid sizes must be integers >= 2")
        if command in ("simulate", "oracle"):
            d = params["distribution"]
            d = parse_distribution(d) if isinstance(d, str) else distribution_from_config(d)
            params["distribution"] = d.spec()
        for key in ("n", "trials", "seed"):
            if key in params and command in ("bounds", "simulate", "oracle"):
                if isinstance(params[key], bool) or int(params[key]) != params[key]:
                    raise DomainError(f"{key} must be an integer")
                params[key] = int(params[key])
        if command == "simulate":
            SampleConfig(params["n"], params["trials"], params["seed"], tuple(params["epsilons"]))
        if command == "bounds":
            if not isinstance(params["n"], int) or params["n"] < 1:
                raise DomainError("n must be a positive integer")
            if not params["epsilons"] or any(not e > 0 for e in params["epsilons"]):
                raise DomainError("epsilons must be positive")
        if command == "oracle":
            if not isinstance(params["n"], int) or params["n"] < 1:
                raise DomainError("n must be a positive integer")
            _lambda_grid(params["lambda_grid"])
    except (DomainError, TypeError, ValueError) as exc:
        raise CliError(str(exc), EXIT_DOMAIN)


def _lambda_grid(spec):
    try:
        lo, hi, num = spec.split(":")
        lo, hi, num = float(lo), float(hi), int(num)
    except (AttributeError, ValueError):
        raise DomainError(f"lambda grid must look like LO:HI:NUM, got {spec!r}")
    if num < 1 or not lo <= hi:
        raise DomainError(f"bad lambda grid {spec!r}")
    return np.linspace(lo, hi, num)


# --- execution --------------------------------------------------------------

def _header(config):
    return f"missingmass {__version__} {config.canonical()}"


def _verify(config):
    p = config.params
    rows = run_suite(p["suite"], p["grid"], float(p["tol"]), int(p["seed"]))
    text = render_csv(SUMMARY_HEADER, [r.row() for r in rows], _header(config))
    return (EXIT_OK if all(r.passed for r in rows) else EXIT_CHECK_FAILED), text


def _constants(config):
    res = find_x0(float(config.params["tol"]))
    row = [res.x0, res.f_at_x0, res.c0, res.c0_over_4, EIGHT_OVER_LN2]
    text = render_csv(["x0", "f_at_x0", "c0", "c0_over_4", "eight_over_ln2"], [row], _header(config))
    ok = 0 < res.x0 < 0.5 and res.c0 < EIGHT_OVER_LN2 and res.c0_over_4 > LEGACY_LOWER_CONSTANT
    return (EXIT_OK if ok else EXIT_CHECK_FAILED), text


def _bounds(config):
    p = config.params
    c0 = find_x0(float(p["tol"])).c0
    bounds = [tail_bound(p["n"], e, c0) for e in p["epsilons"]]
    text = render_csv(TAIL_BOUND_HEADER, [b.row() for b in bounds], _header(config))
    ok = all(b.lower <= b.legacy_lower for b in bounds)
    return (EXIT_OK if ok else EXIT_CHECK_FAILED), text


def _simulate(config):
    p = config.params
    dist = distribution_from_config(p["distribution"])
    sample = SampleConfig(p["n"], p["trials"], p["seed"], tuple(p["epsilons"]))
    result = run_tail_experiment(dist, sample)
    text = render_csv(TAIL_HEADER, [r.row() for r in result.rows], _header(config))
    return (EXIT_OK if result.dominated else EXIT_STATISTICAL), text


def _oracle(config):
    p = config.params
    dist = distribution_from_config(p["distribution"])
    n = p["n"]
    lambdas = _lambda_grid(p["lambda_grid"])
    dep = exact_missing_mass_distribution(dist, n)
    ind = exact_independent_distribution(dist, n)
    summary = summarize(dep, ind, expected_missing_mass(dist, n), lambdas)
    text = render_csv(["value", "probability", "provenance"], dep.rows() + ind.rows(), _header(config))
    header = list(OracleSummary.HEADER)
    row = summary.row()
    if p["threshold"] is not None:
        x = float(p["threshold"])
        header += ["threshold", "tail_above_dependent", "tail_above_independent"]
        row += [x, exact_tail(dep, "above", x), exact_tail(ind, "above", x)]
    text += "\n" + render_csv(header, [row])
    ok = (summary.mgf_slack_min >= -1e-12
          and summary.variance_dependent <= summary.variance_independent
          and abs(summary.mean_dependent - summary.mean_formula) <= 1e-12)
    return (EXIT_OK if ok else EXIT_CHECK_FAILED), text


COMMANDS = {"verify": _verify, "constants": _constants, "bounds": _bounds,
            "simulate": _simulate, "oracle": _oracle}


def execute(config):
    """Run a resolved configuration; returns ``(exit_code, csv_text)``."""
    try:
        return COMMANDS[config.command](config)
    except DomainError as exc:
        raise CliError(str(exc), EXIT_DOMAIN)
    except ConvergenceError as exc:
        raise CliError(str(exc), EXIT_NUMERICAL)


def main(argv=None):
    try:
        config = parse_config(argv)
        code, text = execute(config)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except CliError as exc:
        print(f"missingmass: {exc}", file=sys.stderr)
        return exc.code
    if config.output:
        write_atomic(config.output, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
