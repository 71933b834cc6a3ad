"""Command-line interface: ``robustmax <command> [options]``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from ..bootstrap import run_bootstrap
from ..core import BlockScheme, DataMatrix, fit_estimates
from ..functional import calibrate_gbm
from ..inference import simultaneous_cis
from .config import ConfigError, ExperimentConfig, PowerConfig, config_dict, load_config
from .diagnostics import variance_decay_diagnostic
from .experiments import CoverageRow, run_coverage_experiment, run_ks_probe, run_power_curve
from .pairs import PairsResult, cumulative_log_returns, ingest_pairs_csv, run_pairs_screen
from .report import render_csv, write_report

log = logging.getLogger("robustmax")


def _emit(args, header, rows, meta):
    if args.out:
        side = write_report(args.out, header, rows, meta)
        print(f"wrote {args.out} and {side}", file=sys.stderr)
    else:
        sys.stdout.write(render_csv(header, rows))


def _load(args, cls):
    cfg = load_config(args.config, cls) if args.config else cls()
    for name in ("seed", "trials", "B", "p", "distribution", "correlation", "tau"):
        value = getattr(args, name, None)
        if value is not None and hasattr(cfg, name):
            setattr(cfg, name, value)
    return cfg.validate()


def read_data_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        names = [h.strip() for h in fh.readline().strip().split(",")]
    values = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if values.shape[1] != len(names):
        raise ValueError(f"{path}: {len(names)} header names but {values.shape[1]} columns")
    return names, values


def cmd_simulate(args):
    cfg = _load(args, ExperimentConfig)
    rows = run_coverage_experiment(cfg, threads=args.threads)
    _emit(args, CoverageRow.HEADER, [r.as_row() for r in rows], {"config": config_dict(cfg)})


def cmd_ci(args):
    names, values = read_data_csv(args.data)
    data = DataMatrix.split(values, args.m_n)
    est = fit_estimates(data, BlockScheme.for_holdout(args.m_n, args.ell_n), args.tau)
    seed = 0 if args.seed is None else args.seed
    boot = run_bootstrap(data, est, args.B, seed, threads=args.threads)
    band = simultaneous_cis(data, est, boot, args.alpha)
    rows = [(name, iv.lo, iv.hi, iv.width) for name, iv in zip(names, band.intervals)]
    meta = {
        "data": str(args.data),
        "alpha": args.alpha,
        "B": args.B,
        "seed": seed,
        "m_n": args.m_n,
        "ell_n": args.ell_n,
        "tau": args.tau,
        "q_minus": band.q_minus,
        "q_plus": band.q_plus,
    }
    _emit(args, ("coordinate", "lo", "hi", "width"), rows, meta)


def cmd_test_drift(args):
    cfg = _load(args, PowerConfig)
    if args.h:
        cfg.h_grid = [float(h) for h in args.h.split(",")]
        cfg.validate()
    mu_curve = varsigma0 = None
    meta = {"config": config_dict(cfg)}
    if args.calibrate:
        curves = cumulative_log_returns(args.calibrate, args.column, cfg.K)
        mu_curve, varsigma0 = calibrate_gbm(curves)
        meta.update(calibrated_from=str(args.calibrate), varsigma0=varsigma0, mu_curve=mu_curve.tolist())
    res = run_power_curve(cfg, threads=args.threads, mu_curve=mu_curve, varsigma0=varsigma0)
    _emit(args, ("h", "rejection_rate", "rejections", "failures"), res, meta)


def cmd_test_pairs(args):
    seed = 0 if args.seed is None else args.seed
    rows = []
    for i, path in enumerate(args.files):
        curves = ingest_pairs_csv(path)
        label = args.label[i] if args.label and i < len(args.label) else Path(path).stem
        res = run_pairs_screen(curves, args.p, args.alpha, args.B, seed, args.ell_n, args.tau, label)
        rows.append(res.as_row())
    meta = {
        "files": [str(f) for f in args.files],
        "p": args.p,
        "alpha": args.alpha,
        "B": args.B,
        "seed": seed,
        "ell_n": args.ell_n,
        "tau": args.tau,
    }
    _emit(args, PairsResult.HEADER, rows, meta)


def cmd_diagnose(args):
    if args.mode == "decay":
        if not args.data:
            raise SystemExit("diagnose decay needs --data")
        _, values = read_data_csv(args.data)
        data = DataMatrix.split(values, args.m_n)
        est = fit_estimates(data, BlockScheme.for_holdout(args.m_n, args.ell_n), args.tau)
        sig, beta = variance_decay_diagnostic(est)
        rows = [(j + 1, s) for j, s in enumerate(sig)]
        meta = {"data": str(args.data), "m_n": args.m_n, "ell_n": args.ell_n, "beta_hat": beta}
        print(f"beta_hat = {beta:.4f}", file=sys.stderr)
        _emit(args, ("j", "sigma_sorted"), rows, meta)
    else:
        cfg = _load(args, ExperimentConfig)
        res = run_ks_probe(cfg, args.n, args.mc_draws, args.boot_draws, threads=args.threads)
        print(f"ks = {res['ks']:.4f}", file=sys.stderr)
        rows = [("max_statistic", v) for v in np.sort(res["mc_draws"])]
        rows += [("bootstrap", v) for v in res["boot_draws"]]
        meta = {"config": config_dict(cfg), "n": args.n, "ks": res["ks"]}
        _emit(args, ("source", "value"), rows, meta)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML configuration file")
    common.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    common.add_argument("--out", type=Path, help="report CSV path (a .json sidecar is added)")
    common.add_argument("--threads", type=int, default=1, help="worker threads")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="robustmax", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="coverage study on synthetic data")
    p.add_argument("--distribution", choices=["elliptical_t6", "separable_pareto6"])
    p.add_argument("--correlation", choices=["ar", "algebraic", "identity"])
    p.add_argument("--p", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--B", type=int)
    p.set_defaults(func=cmd_simulate)

    def estimation_flags(q):
        q.add_argument("--m-n", type=int, default=50, help="hold-out rows (the last rows)")
        q.add_argument("--ell-n", type=int, default=10, help="block length")
        q.add_argument("--tau", type=float, default=0.9)

    p = sub.add_parser("ci", parents=[common], help="simultaneous intervals for a data CSV")
    p.add_argument("--data", type=Path, required=True)
    estimation_flags(p)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--B", type=int, default=500)
    p.set_defaults(func=cmd_ci)

    p = sub.add_parser("test-drift", parents=[common], help="power curve of the GBM drift test")
    p.add_argument("--h", help="comma-separated h grid")
    p.add_argument("--trials", type=int)
    p.add_argument("--B", type=int)
    p.add_argument("--calibrate", type=Path, help="price CSV to calibrate mu(t) and varsigma0")
    p.add_argument("--column", choices=["a", "b"], default="a")
    p.set_defaults(func=cmd_test_drift)

    p = sub.add_parser("test-pairs", parents=[common], help="constancy test for price-pair files")
    p.add_argument("files", nargs="+", type=Path)
    p.add_argument("--label", action="append", help="label per file (repeatable)")
    p.add_argument("--p", type=int, default=50)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--B", type=int, default=500)
    p.add_argument("--ell-n", type=int, default=10)
    p.add_argument("--tau", type=float, default=0.9)
    p.set_defaults(func=cmd_test_pairs)

    p = sub.add_parser("diagnose", parents=[common], help="variance decay or bootstrap KS probe")
    p.add_argument("mode", choices=["decay", "ks"])
    p.add_argument("--data", type=Path)
    estimation_flags(p)
    p.add_argument("--n", type=int, default=500, help="main-sample size for the KS probe")
    p.add_argument("--mc-draws", type=int, default=2000)
    p.add_argument("--boot-draws", type=int, default=2000)
    p.set_defaults(func=cmd_diagnose)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"robustmax: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
