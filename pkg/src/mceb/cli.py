"""Command-line front end.

Three subcommands:

* ``analyze``: run the pipeline on a CSV of z-scores.
* ``simulate``: seeded Monte Carlo coverage study on a named scenario.
* ``modulus-diag``: modulus/estimator trace over a delta grid, plus the
  hardest-prior dump, for plotting.

All outputs are CSV with ``#``-prefixed metadata header lines echoing the
seed and the fully resolved configuration, so every file is reproducible
from its own header.
"""

import argparse
import csv
import json
import sys

import numpy as np

from . import __version__
from .functionals import (LinearFunctional, calibrated_delta_functional,
                          eb_target_value, functional_from_config,
                          functional_value, marginal_density_at,
                          EBTarget)
from .modulus import (EmptyLocalizedClass, build_estimator,
                      hardest_prior_table, solve_modulus)
from .pilot import BinGrid, oracle_pilot
from .pipeline import MCEBResult, mceb_analyze, mceb_linear
from .priors import prior_class_from_config
from .scenarios import scenario_prior

RATIO_TARGETS = ("posterior_mean", "lfsr")


def _write_csv(path, header_meta, columns, rows):
    with open(path, "w", newline="") as fh:
        for key, value in header_meta.items():
            fh.write(f"# {key} = {value}\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow(row)


def _read_zscores(path):
    values = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SystemExit(f"{path}: empty input file") from None
        if not header or header[0].strip() != "z":
            raise SystemExit(f"{path}:1: expected header 'z'")
        for lineno, row in enumerate(reader, start=2):
            if not row or not row[0].strip():
                continue
            try:
                values.append(float(row[0]))
            except ValueError:
                raise SystemExit(
                    f"{path}:{lineno}: not a number: {row[0]!r}") from None
    return np.asarray(values)


def _meta(config, seed):
    return {"generator": f"mceb {__version__}", "seed": seed,
            "config": json.dumps(config, sort_keys=True)}


def cmd_analyze(args):
    with open(args.config) as fh:
        config = json.load(fh)
    samples = _read_zscores(args.input)
    if len(samples) < 20:
        raise SystemExit("too few samples (need at least 20 z-scores)")
    class_config = config["class"]
    target_config = config["target"]
    alpha = config.get("alpha", 0.1)
    eta = config.get("eta", 0.01)
    criterion = config.get("criterion", "CIWidth")
    seed = config.get("seed", 0)
    bins = BinGrid(boundary=config.get("boundary", 6.0),
                   n_interior=config.get("n_interior", 120))
    reps = config.get("bootstrap_reps", 1000)
    xs = np.atleast_1d(np.asarray(target_config["x"], dtype=float)) \
        if "x" in target_config else None
    kind = target_config["target"]
    try:
        if kind in RATIO_TARGETS:
            results = mceb_analyze(samples, class_config, xs, kind,
                                   alpha=alpha, eta=eta, seed=seed,
                                   criterion=criterion, bins=bins,
                                   bootstrap_reps=reps)
        else:
            results = []
            for x in (xs if xs is not None else [None]):
                cfg = dict(target_config)
                if x is not None:
                    cfg["x"] = float(x)
                functional = functional_from_config(cfg)
                results.append(mceb_linear(
                    samples, class_config, functional, alpha=alpha,
                    seed=seed, criterion=criterion, eta=eta, bins=bins,
                    bootstrap_reps=reps))
    except EmptyLocalizedClass:
        raise SystemExit(
            "localized prior class is empty: no prior in the configured "
            "class is compatible with the pilot density (possible "
            "misspecification)")
    _write_csv(args.output, _meta(config, seed), MCEBResult.CSV_COLUMNS,
               [r.csv_row() for r in results])
    return 0


def cmd_simulate(args):
    from .simulate import DEFAULT_X, simulate_coverage

    if args.reps < 1:
        raise SystemExit("reps must be at least 1")
    xs = [float(v) for v in args.x.split(",")] if args.x \
        else list(DEFAULT_X[args.target])
    class_config = json.loads(args.class_config) if args.class_config \
        else {"type": "gauss_mix", "tau": 0.2, "support": 3.0}
    bins = BinGrid(boundary=args.boundary, n_interior=args.n_interior)
    rows = simulate_coverage(
        args.scenario, args.target, args.m, args.reps, alpha=args.alpha,
        eta=args.eta, seed=args.seed, xs=xs, class_config=class_config,
        bins=bins, bootstrap_reps=args.bootstrap_reps)
    config = {"scenario": args.scenario, "target": args.target,
              "m": args.m, "reps": args.reps, "alpha": args.alpha,
              "eta": args.eta, "class": class_config, "x": xs,
              "boundary": args.boundary, "n_interior": args.n_interior,
              "bootstrap_reps": args.bootstrap_reps}
    _write_csv(args.output, _meta(config, args.seed),
               ("x", "target", "truth", "coverage", "mean_width", "rmse"),
               [[r.x, r.target, r.truth, r.coverage, r.mean_width, r.rmse]
                for r in rows])
    return 0


def _diag_functional(config, target, x):
    """Functional for diagnostics; ratio targets use oracle pilots."""
    if target in RATIO_TARGETS:
        scenario = config.get("oracle_scenario", "bimodal")
        prior = scenario_prior(scenario)
        theta_bar = eb_target_value(prior, EBTarget(target, x))
        f_bar = functional_value(prior, marginal_density_at(x))
        return calibrated_delta_functional(x, theta_bar, f_bar, target)
    return functional_from_config({"target": target, "x": x})


def cmd_modulus_diag(args):
    with open(args.config) as fh:
        config = json.load(fh)
    class_spec = prior_class_from_config(config["class"])
    start, stop, count = args.deltas.split(":")
    deltas = np.geomspace(float(start), float(stop), int(count))
    bins = BinGrid(boundary=config.get("boundary", 6.0),
                   n_interior=config.get("n_interior", 120))
    scenario = config.get("oracle_scenario", "bimodal")
    prior = scenario_prior(scenario)
    pilot = oracle_pilot(prior, bins, c_m=config.get("c_m", 0.02),
                         m=config.get("m", 10000))
    functional = _diag_functional(config, args.target, args.x)
    rows = []
    last = None
    try:
        for delta in deltas:
            sol = solve_modulus(class_spec, pilot, functional, delta)
            est = build_estimator(sol, pilot, functional, pilot.m)
            rows.append([delta, sol.omega, sol.omega_prime, est.max_bias,
                         est.gamma])
            last = sol
    except EmptyLocalizedClass:
        raise SystemExit("localized prior class is empty")
    meta = _meta(config, config.get("seed", 0))
    _write_csv(args.output, meta,
               ("delta", "omega", "omega_prime", "max_bias",
                "variance_proxy"), rows)
    if last is not None:
        grid = np.linspace(-bins.boundary, bins.boundary, 601)
        table = hardest_prior_table(last, grid)
        hardest_path = args.output.rsplit(".", 1)[0] + "_hardest.csv"
        _write_csv(hardest_path, meta,
                   ("x", "g1", "gm1", "f_g1", "f_gm1"),
                   [list(row) for row in table])
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mceb",
        description="Bias-aware confidence intervals for empirical Bayes "
                    "estimands in the Gaussian deconvolution model")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze a CSV of z-scores")
    p.add_argument("--config", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="Monte Carlo coverage study")
    p.add_argument("--scenario", required=True,
                   choices=("bimodal", "unimodal"))
    p.add_argument("--target", default="posterior_mean",
                   choices=RATIO_TARGETS)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--eta", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--x", default=None,
                   help="comma-separated evaluation points")
    p.add_argument("--class-config", default=None,
                   help="prior-class JSON (inline)")
    p.add_argument("--bootstrap-reps", type=int, default=1000)
    p.add_argument("--boundary", type=float, default=6.0)
    p.add_argument("--n-interior", type=int, default=120)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("modulus-diag", help="modulus trace over deltas")
    p.add_argument("--config", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--deltas", required=True,
                   help="start:stop:count (geometric spacing)")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_modulus_diag)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
