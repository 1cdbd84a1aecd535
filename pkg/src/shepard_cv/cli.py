"""Command-line interface.

Exit codes: 0 success, 1 validation error, 2 numeric instability; errors
are reported as one-line JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import bounds as bounds_mod
from .cross_validation import loo_cv_fast, loo_cv_naive
from .errors import NumericInstabilityError
from .experiment import (
    ExperimentConfig,
    estimate_event_probability,
    run_experiment,
)
from .io_csv import format_value, write_aggregates_csv, write_records_csv
from .kernels import hat_kernel
from .shepard import SampleSet, ShepardModel, test_function_preset
from .torus import NodeSet


class CliValidationError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliValidationError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="shepard-cv")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common_sample(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gamma")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--method", choices=["sum", "gumbel", "mc"], default="sum")
    p.add_argument("--trials", type=int, default=1000, help="mc method only")
    p.add_argument("--seed", type=int, default=0, help="mc method only")

    p = sub.add_parser("meshnorm")
    common_sample(p)
    p.add_argument("--h", type=float)

    for name in ("cv", "risk"):
        p = sub.add_parser(name)
        common_sample(p)
        p.add_argument("--h", type=float, required=True)
        p.add_argument("--function", default="sine")
        p.add_argument("--policy", choices=["error", "nearest_node"], default="error")
        if name == "cv":
            p.add_argument("--method", choices=["fast", "naive"], default="fast")
        else:
            p.add_argument("--grid-size", type=int, default=None)

    p = sub.add_parser("bound")
    p.add_argument("--mode", choices=["tail", "epsilon", "quantile"], default="tail")
    p.add_argument("--kind", choices=["risk", "cv", "diff"], default="diff")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--lipschitz", type=float, required=True)
    p.add_argument("--sup-norm", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--eps", type=float, help="tail mode")
    p.add_argument("--two-constants", action="store_true")
    p.add_argument("--c1", type=float, default=None)
    p.add_argument("--c2", type=float, default=None)
    p.add_argument("--m-bound", type=float, default=None)
    p.add_argument("--alpha", type=float, help="epsilon mode")
    p.add_argument("--p-fail", type=float, default=0.1)
    p.add_argument("--delta", type=float, help="quantile mode")

    for name in ("experiment", "figure"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=".")
        if name == "figure":
            p.add_argument("--which", choices=["3", "4"], required=True)
        _add_config_overrides(p)
    return parser


_OVERRIDE_FLAGS = [
    ("--n", int, "n"),
    ("--trials", int, "trials"),
    ("--seed", int, "seed"),
    ("--grid-size", int, "grid_size"),
    ("--function", str, "test_function"),
    ("--gamma-source", str, "gamma_source"),
    ("--p-fail", float, "p_fail"),
    ("--policy", str, "policy"),
]


def _add_config_overrides(p):
    for flag, typ, _ in _OVERRIDE_FLAGS:
        p.add_argument(flag, type=typ, default=None)
    p.add_argument("--h-min", type=float, default=None)
    p.add_argument("--h-max", type=float, default=None)
    p.add_argument("--h-count", type=int, default=None)


_GAMMA_SOURCE_ALIASES = {"sum": "exact_sum", "mc": "monte_carlo"}


def _load_config(args) -> ExperimentConfig:
    with open(args.config, encoding="utf-8") as fh:
        data = json.load(fh)
    for _, __, key in _OVERRIDE_FLAGS:
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    if data.get("gamma_source") in _GAMMA_SOURCE_ALIASES:
        data["gamma_source"] = _GAMMA_SOURCE_ALIASES[data["gamma_source"]]
    if args.h_min is not None or args.h_max is not None or args.h_count is not None:
        if None in (args.h_min, args.h_max, args.h_count):
            raise CliValidationError("--h-min/--h-max/--h-count must be given together")
        data["h_grid"] = [float(v) for v in np.geomspace(args.h_min, args.h_max, args.h_count)]
    return ExperimentConfig.from_dict(data)


def _sampled_set(args):
    nodes = NodeSet.sample_uniform(args.seed, args.n)
    f = test_function_preset(args.function)
    return SampleSet.from_function(nodes, f), f


def _cmd_gamma(args) -> None:
    if args.method == "sum":
        value = bounds_mod.gamma_upper(args.n, args.h).value
    elif args.method == "gumbel":
        value = bounds_mod.gamma_gumbel(args.n, args.h).value
    else:
        value = estimate_event_probability(args.n, [args.h], args.trials, args.seed)[0][1]
    print(f"{value:.6g}")


def _cmd_meshnorm(args) -> None:
    nodes = NodeSet.sample_uniform(args.seed, args.n)
    out = {
        "mesh_norm": nodes.mesh_norm(),
        "max_loo_mesh_norm": float(np.max(nodes.loo_mesh_norms())),
    }
    if args.h is not None:
        out["in_xi"] = nodes.xi_membership(args.h)
    print(json.dumps(out))


def _cmd_cv(args) -> None:
    samples, _ = _sampled_set(args)
    run = loo_cv_fast if args.method == "fast" else loo_cv_naive
    result = run(samples, hat_kernel(args.h), args.policy)
    print(json.dumps({"score": result.score, "skipped": result.skipped}))


def _cmd_risk(args) -> None:
    samples, f = _sampled_set(args)
    grid_size = args.grid_size if args.grid_size is not None else 10 * args.n
    model = ShepardModel(samples, hat_kernel(args.h), args.policy)
    print(json.dumps({"risk": model.risk_estimate(f, grid_size)}))


def _cmd_bound(args) -> None:
    if args.mode == "epsilon":
        if args.alpha is None:
            raise CliValidationError("--alpha is required in epsilon mode")
        value = bounds_mod.epsilon_bound(
            args.alpha, args.lipschitz, args.h, args.n, args.gamma, args.p_fail
        )
    else:
        params = bounds_mod.BoundParams(
            n=args.n,
            h=args.h,
            lipschitz_L=args.lipschitz,
            sup_norm_f=args.sup_norm,
            C1=args.c1,
            C2=args.c2,
            gamma=args.gamma,
            M=args.m_bound,
        )
        if args.mode == "quantile":
            if args.delta is None:
                raise CliValidationError("--delta is required in quantile mode")
            value = bounds_mod.quantile_bound_shepard(params, args.delta)
        else:
            if args.eps is None:
                raise CliValidationError("--eps is required in tail mode")
            value = bounds_mod.tail_probability(
                args.kind, args.eps, params, args.two_constants
            )
    print(f"{value:.12g}")


def _write_experiment_outputs(cfg, out_dir):
    records, aggregates = run_experiment(cfg)
    os.makedirs(out_dir, exist_ok=True)
    records_path = os.path.join(out_dir, "records.csv")
    aggregates_path = os.path.join(out_dir, "aggregates.csv")
    write_records_csv(records, records_path)
    write_aggregates_csv(aggregates, aggregates_path)
    return records_path, aggregates_path


def _cmd_experiment(args) -> None:
    cfg = _load_config(args)
    records_path, aggregates_path = _write_experiment_outputs(cfg, args.out)
    print(json.dumps({"records": records_path, "aggregates": aggregates_path}))


def _write_fig3_curves(cfg, path):
    curves = estimate_event_probability(cfg.n, cfg.h_grid, cfg.trials, cfg.seed)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("h,empirical,bound,gumbel\n")
        for h, empirical in curves:
            bound = bounds_mod.gamma_upper(cfg.n, h, gumbel_fallback=True).value
            gumbel = bounds_mod.gamma_gumbel(cfg.n, h).value
            fh.write(
                ",".join(format_value(float(v)) for v in (h, empirical, bound, gumbel))
                + "\n"
            )


def _cmd_figure(args) -> None:
    cfg = _load_config(args)
    os.makedirs(args.out, exist_ok=True)
    if args.which == "3":
        curves_path = os.path.join(args.out, "fig3_curves.csv")
        _write_fig3_curves(cfg, curves_path)
        manifest = {"figure": "fig3", "csv": {"curves": "fig3_curves.csv"}}
    else:
        _write_experiment_outputs(cfg, args.out)
        manifest = {
            "figure": "fig4",
            "csv": {"records": "records.csv", "aggregates": "aggregates.csv"},
        }
    manifest_path = os.path.join(args.out, "manifest.json")
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, sort_keys=True)
        fh.write("\n")
    print(json.dumps({"manifest": manifest_path}))


_COMMANDS = {
    "gamma": _cmd_gamma,
    "meshnorm": _cmd_meshnorm,
    "cv": _cmd_cv,
    "risk": _cmd_risk,
    "bound": _cmd_bound,
    "experiment": _cmd_experiment,
    "figure": _cmd_figure,
}


def _fail(kind: str, message: str, code: int, **extra) -> int:
    payload = {"error": kind, "message": message, **extra}
    print(json.dumps(payload), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        _COMMANDS[args.subcommand](args)
        return 0
    except NumericInstabilityError as exc:
        return _fail(
            "numeric-instability", str(exc), 2, best_estimate=exc.best_estimate
        )
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        return _fail("validation", str(exc), 1)


if __name__ == "__main__":
    sys.exit(main())
