"""Command-line interface: ``pcsda {train,predict,rank,cv,experiment,selftest}``.

Exit codes: 0 success, 2 invalid input or configuration, 3 numerical failure.
"""
import argparse
import contextlib
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from .dataset import load_csv, load_matrix, make_class_specific
from .estimator import PCSDA
from .exceptions import ConfigError, NumericalError
from .experiment import _parse_int_list, load_config, run_experiment
from .metrics import average_precision, f1_score
from .model_selection import CvGrid, cross_validate
from .serialization import load_model, save_model

log = logging.getLogger("pcsda")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _k_arg(text):
    return "all" if text == "all" else int(text)


def _ridge_arg(text):
    return "auto" if text == "auto" else float(text)


def _sigma_arg(text):
    return "auto" if text == "auto" else float(text)


def _kernel_arg(text):
    return None if text == "none" else text


def _add_data(p, label_required=True):
    p.add_argument("--data", required=True, help="CSV file, one sample per row")
    p.add_argument("--label-col", default="-1" if label_required else None,
                   help="label column name or 0-based index (default: last column)")


def _add_model_opts(p):
    p.add_argument("--k", type=_k_arg, default=1, help="number of negative subclasses, or 'all'")
    p.add_argument("--dim", type=int, default=1, help="subspace dimension d")
    p.add_argument("--ridge", type=_ridge_arg, default="auto")
    p.add_argument("--kernel", type=_kernel_arg, choices=[None, "rbf"], default=None)
    p.add_argument("--sigma", type=_sigma_arg, default="auto")
    p.add_argument("--kernel-tau", type=float, default=1e-10,
                   help="drop kernel eigenvalues below this fraction of the largest")
    p.add_argument("--kernel-max-dim", type=int, default=None, help="cap on kernel feature count")
    p.add_argument("--solver", choices=["direct", "specreg"], default="direct")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--equiprobable", action="store_true", help="equal class priors")


def _out(path):
    if path is None or path == "-":
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8", newline="")


def _problem(args):
    data = load_csv(args.data, args.label_col)
    if args.target_class is None:
        raise ConfigError("--target-class is required")
    return make_class_specific(data, args.target_class)


def cmd_train(args):
    ds = _problem(args)
    est = PCSDA(n_components=args.dim, n_subclasses=args.k, ridge=args.ridge, solver=args.solver,
                kernel=args.kernel, sigma=args.sigma, equiprobable=args.equiprobable,
                random_state=args.seed, kernel_tau=args.kernel_tau,
                kernel_max_dim=args.kernel_max_dim)
    est.fit(ds.X, ds.y)
    if args.out is None:
        raise ConfigError("--out is required for train")
    save_model(est, args.out)
    log.info("trained d=%d K=%d on %d samples; model written to %s",
             est.model_.d, est.model_.n_subclasses, ds.X.shape[0], args.out)


def _test_data(args):
    if args.label_col is None:
        return load_matrix(args.data), None
    data = load_csv(args.data, args.label_col)
    truth = data.labels == str(args.target_class) if args.target_class is not None else None
    return data.X, truth


def cmd_predict(args):
    est = load_model(args.model)
    X, truth = _test_data(args)
    g = est.decision_function(X)
    with _out(args.out) as fh:
        fh.write("index,g,label\n")
        for i, (gi, lab) in enumerate(zip(g, g >= 0)):
            fh.write(f"{i},{float(gi)!r},{int(lab)}\n")
    if truth is not None:
        log.info("f1 = %.4f", f1_score(g >= 0, truth))


def cmd_rank(args):
    est = load_model(args.model)
    X, truth = _test_data(args)
    res = est.rank(X)
    with _out(args.out) as fh:
        fh.write("rank,index,distance\n")
        for r, i in enumerate(res.order, 1):
            fh.write(f"{r},{i},{float(res.distances[i])!r}\n")
    if truth is not None and truth.any():
        log.info("AP = %.4f", average_precision(res, truth))


def cmd_cv(args):
    ds = _problem(args)
    k_values = (1,) if args.mode == "pcsda1" else ("all",) if args.mode == "csda" else args.k_values
    grid = CvGrid(args.d_values, k_values, args.folds, args.seed)
    res = cross_validate(ds.X, ds.y, grid, args.objective, args.solver, args.kernel, args.sigma,
                         args.ridge, args.equiprobable, kernel_max_dim=args.kernel_max_dim,
                         kernel_tau=args.kernel_tau)
    with _out(args.out) as fh:
        fh.write("d,K,map,f1\n")
        for d, K, ap, f1 in res.table:
            fh.write(f"{d},{K},{ap:.6f},{f1:.6f}\n")
    for obj, (d, K, score) in res.best.items():
        log.info("best for %s: d=%s K=%s score=%.4f", obj, d, K, score)


def cmd_experiment(args):
    cfg = load_config(args.config)
    report = run_experiment(cfg, progress=log.info)
    with _out(args.out) as fh:
        fh.write(report.render())
    if args.table:
        Path(args.table).write_text(report.table_csv(), encoding="utf-8")
    for phase, secs in report.timings.items():
        log.info("time %s: %.2fs", phase, secs)


def cmd_selftest(args):
    from . import selftest
    if not selftest.run():
        raise NumericalError("self-test failed")


def build_parser():
    parser = argparse.ArgumentParser(prog="pcsda", description=__doc__.splitlines()[0])
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress log messages")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a model on one class-specific problem")
    _add_data(p)
    p.add_argument("--target-class", required=True)
    _add_model_opts(p)
    p.add_argument("--out", required=True, help="model file to write")
    p.set_defaults(func=cmd_train)

    for name, func, what in (("predict", cmd_predict, "index,g,label"),
                             ("rank", cmd_rank, "rank,index,distance")):
        p = sub.add_parser(name, help=f"apply a saved model; CSV output {what}")
        p.add_argument("--model", required=True)
        _add_data(p, label_required=False)
        p.add_argument("--target-class", help="report a metric against this class")
        p.add_argument("--out", help="output CSV (default stdout)")
        p.set_defaults(func=func)

    p = sub.add_parser("cv", help="cross-validate d and K for one class-specific problem")
    _add_data(p)
    p.add_argument("--target-class", required=True)
    _add_model_opts(p)
    p.add_argument("--mode", choices=["pcsda1", "pcsdaK", "csda"], default="pcsdaK")
    p.add_argument("--d-values", type=_parse_int_list, default=tuple(range(1, 26)))
    p.add_argument("--k-values", type=_parse_int_list, default=(5, 10, 15, 20))
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--objective", choices=["map", "f1", "both"], default="both")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("experiment", help="run the one-vs-rest protocol from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="report file (default stdout)")
    p.add_argument("--table", help="optional per-class CSV")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("selftest", help="run quick numerical checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(message)s", stream=sys.stderr, force=True)
    logging.captureWarnings(True)
    try:
        args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        log.error("error: %s", exc)
        return EXIT_CONFIG
    except (NumericalError, np.linalg.LinAlgError, ArithmeticError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
