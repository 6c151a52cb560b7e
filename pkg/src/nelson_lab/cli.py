"""Command-line entry point ``nelson-lab``.

Every subcommand prints one JSON object with ``"schema_version": 1`` on
standard output.  Usage errors exit with status 2 (message on standard
error), domain errors with status 1 and a JSON error object.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys

import numpy as np

from . import __version__
from .bound import (DEFAULT_P, BoundParams, evaluate_bound, large_alpha_bound, optimize_bound,
                    small_alpha_bound)
from .counterterm import ModelParams, q_counterterm, q_log_asymptote
from .errors import (DivergentCounterterm, DomainError, PreconditionError, SizingError,
                     ToleranceNotReached)
from .partitions import (cyclic_latin_square, holder_inequality_check, is_admissible,
                         min_admissible_size, partition_from_square)
from .pathmc import (SimConfig, action, clark_ocone_rho, energy_estimate, expectation_check,
                     sample_paths, supermartingale_check)
from .phi import derived_constants, phi_norms
from .polaron import polaron_bounds

SCHEMA_VERSION = 1
SEED_ENV = "NELSON_LAB_SEED"
_DOMAIN_ERRORS = (DomainError, PreconditionError, DivergentCounterterm, SizingError,
                  ToleranceNotReached)


# ---------------------------------------------------------------------------
# serialization

def _number(x):
    x = float(x)
    if not math.isfinite(x):
        return "null"
    if x == 0.0:
        return "0"
    return format(x, ".17g")


def to_json(obj, indent=2, _level=0):
    """Serialize with every float written to 17 significant digits.

    Non-finite floats become ``null``.  The output is deterministic: dict
    keys keep insertion order.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _number(obj)
    if isinstance(obj, str):
        import json
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{to_json(str(k))}: {to_json(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{pad}{to_json(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def load_schema(name):
    """Return the checked-in JSON schema for a subcommand (or ``"error"``)."""
    import json
    from importlib import resources
    text = resources.files("nelson_lab").joinpath("schemas", f"{name}.json").read_text()
    return json.loads(text)


def _emit(payload, stream=None):
    stream = stream or sys.stdout
    stream.write(to_json({"schema_version": SCHEMA_VERSION, **payload}) + "\n")


# ---------------------------------------------------------------------------
# subcommands

def _model(args, **overrides):
    values = dict(alpha=args.alpha, mu=getattr(args, "mu", 1.0),
                  lambda_uv=getattr(args, "lambda_uv", math.inf), n=args.n)
    values.update(overrides)
    return ModelParams(**values)


def _params_dict(bp):
    return {"theta": bp.theta, "phi": bp.phi_param, "eps": bp.epsilon, "p": bp.p}


def cmd_constants(args):
    norms = phi_norms()
    const = derived_constants(args.theta, args.phi, args.eps)
    return {
        "command": "constants",
        "phi_norms": {"sup_norm": norms.sup_norm, "one_norm_over_x": norms.one_norm_over_x,
                      "weighted_sup_theta_half": norms.weighted_sup(0.5 * args.theta)},
        "parameters": {"theta": args.theta, "phi": args.phi, "eps": args.eps},
        "derived": {"a_theta": const.a_theta, "b_theta": const.b_theta,
                    "c_const": const.c_const, "d_eps": const.d_eps, "f_theta": const.f_theta},
    }


def cmd_counterterm(args):
    model = _model(args)
    q = q_counterterm(model, tol=args.tol)
    asym = q_log_asymptote(model)
    return {"command": "counterterm", "alpha": model.alpha, "mu": model.mu,
            "lambda": model.lambda_uv, "n": model.n, "q": q, "log_asymptote": asym,
            "ratio": q / asym if asym != 0 else None}


def cmd_bound(args):
    model = _model(args)
    bp = BoundParams(theta=args.theta, phi_param=args.phi, epsilon=args.eps, p=args.p)
    br = evaluate_bound(model, bp)
    return {"command": "bound", "alpha": model.alpha, "n": model.n, "params": _params_dict(bp),
            **br.as_dict(), "metadata": {"default_p": DEFAULT_P,
                                         "uniform_in_mu_and_cutoff": True}}


def cmd_optimize(args):
    model = _model(args)
    # here --tol is the simplex convergence tolerance; quadrature is not involved
    tol = args.tol if args.tol_given else 1e-8
    res = optimize_bound(model, starts=args.starts, tol=tol)
    out = {"command": "optimize", "alpha": model.alpha, "n": model.n,
           "best_params": _params_dict(res.best), "breakdown": res.breakdown.as_dict(),
           "converged": res.converged, "local_searches": res.n_local_searches,
           "evaluations": res.evaluations, "specializations": {}}
    try:
        out["specializations"]["large_alpha"] = large_alpha_bound(model).value
    except PreconditionError:
        out["specializations"]["large_alpha"] = None
    try:
        out["specializations"]["small_alpha"] = small_alpha_bound(model).value
    except PreconditionError:
        out["specializations"]["small_alpha"] = None
    return out


def cmd_polaron(args):
    b = polaron_bounds(args.alpha, args.n)
    return {"command": "polaron", "alpha": args.alpha, "n": args.n, **b.as_dict(),
            "metadata": {"note": "the cutoff-uniform bound is the p/2-free form; a sharper "
                                 "alpha^2 coefficient may be available and is not asserted"}}


def cmd_simulate(args):
    offsets = None
    if args.offset:
        offsets = tuple(tuple(float(c) for c in o.split(",")) for o in args.offset)
        if any(len(o) != 3 for o in offsets):
            raise DomainError("each --offset needs three comma-separated numbers", "offset")
    cfg = SimConfig(t_final=args.t, dt=args.dt, n_paths=args.paths, seed=args.seed,
                    n_particles=args.n, offsets=offsets)
    model = _model(args, lambda_uv=args.lambda_uv)
    ens = sample_paths(cfg)
    stats = action(ens, model, cfg, args.model)
    out = {"command": "simulate", "model": args.model, "alpha": model.alpha, "mu": model.mu,
           "lambda": model.lambda_uv, "n": model.n, "t": cfg.t_final, "dt": cfg.dt,
           "paths": cfg.n_paths, "seed": cfg.seed,
           "stats": {"mean": stats.mean, "variance": stats.variance,
                     "log_mean_exp": stats.log_mean_exp,
                     "standard_error": stats.standard_error}}
    if args.check == "expectation":
        out["report"] = expectation_check(stats, model, cfg, args.model)
    elif args.check == "energy":
        out["report"] = energy_estimate(stats, model, cfg, args.model)
    elif args.check in ("clark-ocone", "supermartingale"):
        if args.check == "clark-ocone":
            co = clark_ocone_rho(ens, model, cfg, args.model, action_stats=stats)
            out["report"] = {"expected_action": co.expected_action,
                             "residual_mean": float(np.mean(co.residuals)),
                             "residual_variance": co.residual_variance,
                             "left_point_residual_variance": co.left_point_residual_variance}
        else:
            other = SimConfig(t_final=args.t, dt=args.dt, n_paths=args.paths,
                              seed=(args.seed + 1) % 2 ** 64, n_particles=args.n, offsets=offsets)
            co = clark_ocone_rho(sample_paths(other), model, other, args.model)
            out["report"] = supermartingale_check(stats, co, args.p)
    if args.dump_csv:
        with open(args.dump_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["path_index", "a_t"])
            for k, v in enumerate(stats.samples):
                writer.writerow([k, _number(v)])
    return out


def cmd_partition(args):
    part = partition_from_square(cyclic_latin_square(args.n))
    out = {"command": "partition", "n": args.n, "blocks": part.as_lists(),
           "admissible": is_admissible(part)}
    if args.verify_min:
        out["min_size"] = min_admissible_size(args.n)
    if args.holder_trials:
        out["holder"] = holder_inequality_check(min(max(args.n, 2), 3), trials=args.holder_trials,
                                                seed=args.seed).as_dict()
    return out


def cmd_verify(args):
    from .acceptance import run_all
    numbers = None
    if args.criteria:
        try:
            numbers = sorted({int(c) for c in args.criteria.split(",")})
        except ValueError:
            raise DomainError(f"bad criteria list {args.criteria!r}", "criteria") from None
        if any(k not in range(1, 10) for k in numbers):
            raise DomainError("criteria are numbered 1 to 9", "criteria")
    results = run_all(numbers)
    for r in results:
        print(r.line(), file=sys.stderr)
    return {"command": "verify", "passed": all(r.passed for r in results),
            "criteria": [r.as_dict() for r in results]}


# ---------------------------------------------------------------------------
# parser

def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"nelson-lab: error: {SEED_ENV}={raw!r} is not an integer") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="quadrature tolerance (default 1e-10)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help=f"random seed (default ${SEED_ENV} or 0)")

    parser = argparse.ArgumentParser(prog="nelson-lab", parents=[common],
                                     description="Nelson and polaron ground-state bounds")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", parents=[common], help="norms of phi and derived constants")
    p.add_argument("--theta", type=float, default=1.5)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--eps", type=float, default=1.0)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("counterterm", parents=[common], help="renormalization counterterm Q")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--lambda", dest="lambda_uv", type=float, required=True)
    p.add_argument("--n", type=_positive_int, default=1)
    p.set_defaults(func=cmd_counterterm)

    p = sub.add_parser("bound", parents=[common], help="four-term Nelson lower bound")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--theta", type=float, default=1.5)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--p", type=float, default=DEFAULT_P)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("optimize", parents=[common], help="optimize the bound parameters")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--starts", type=_positive_int, default=4, help="grid points per coordinate")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("polaron", parents=[common], help="polaron bounds")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=_positive_int, default=1)
    p.set_defaults(func=cmd_polaron)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo path functionals")
    p.add_argument("--model", choices=("nelson", "polaron"), default="nelson")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--lambda", dest="lambda_uv", type=float, required=True)
    p.add_argument("--n", type=_positive_int, default=1)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--paths", type=_positive_int, default=100)
    p.add_argument("--offset", action="append", metavar="X,Y,Z",
                   help="initial position of one particle; repeat once per particle")
    p.add_argument("--check", choices=("expectation", "energy", "clark-ocone", "supermartingale"))
    p.add_argument("--p", type=float, default=DEFAULT_P, help="Hölder exponent for supermartingale")
    p.add_argument("--dump-csv", metavar="PATH", help="write per-path samples as CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("partition", parents=[common], help="admissible pair partitions")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--verify-min", action="store_true")
    p.add_argument("--holder-trials", type=int, default=0, metavar="K")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance criteria")
    p.add_argument("--criteria", help="comma-separated subset, e.g. 1,2,3")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv=None, stdout=None):
    """Parse ``argv``, dispatch, print the JSON report; return the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    args.tol_given = hasattr(args, "tol")
    if not args.tol_given:
        args.tol = 1e-10
    if not hasattr(args, "seed"):
        args.seed = _default_seed()
    if not args.tol > 0:
        parser.error("--tol must be positive")
    try:
        payload = args.func(args)
    except _DOMAIN_ERRORS as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc),
                         "parameter": getattr(exc, "parameter", None)}}, stdout)
        return 1
    _emit(payload, stdout)
    if args.command == "verify" and not payload["passed"]:
        return 1
    return 0


def main():
    sys.exit(run())
