"""Command-line interface: ``deq limits | nodes | integrate | converge``.

Exit status: 0 success, 2 invalid input, 3 not converged, 4 unsupported model.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import cases
from .engine import integrate_adaptive, integrate_nd, usable_window
from .errors import DeqError, NotConverged, OrderExceedsMax, UnsupportedModel
from .float_model import get_model, window_limits
from .nodes import build_table, table_to_document
from .spacing import SpacingStrategy, h_maximal, h_optimal, max_order
from .sweep import convergence_sweep, write_sweep_csv

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_CONVERGED = 3
EXIT_UNSUPPORTED = 4

# default ceiling for adaptive doubling, per dimension
_DEFAULT_N_LIMIT = {1: 4096, 2: 512, 3: 128}


def _strategy(name: str) -> SpacingStrategy:
    return SpacingStrategy.optimal() if name == "optimal" else SpacingStrategy.maximal()


def _first_decimals(value: float, digits: int = 3) -> str:
    """Show ``digits`` decimals without rounding up, as window limits are upper bounds."""
    scale = 10**digits
    return f"{math.floor(value * scale) / scale:.{digits}f}"


def limits_row(model_name: str, dim: int) -> dict:
    model = get_model(model_name)
    lim = window_limits(model, dim)
    return {
        "model": model.name.value,
        "e_min": model.min_exponent,
        # the extended UFL has no double representation
        "ufl": float(model.ufl) if model.min_exponent >= -1022 else np.format_float_scientific(model.ufl, precision=3),
        "dimension": dim,
        "weight_power": lim.weight_power,
        "t_max_x": lim.t_max_x,
        "t_max_w": lim.t_max_w,
        "t_max_xw": lim.t_max_xw,
        "n_max_xw": max_order(lim.t_max_xw),
    }


def cmd_limits(args) -> int:
    row = limits_row(args.model, args.dim)
    if args.json:
        print(json.dumps(row))
        return EXIT_OK
    ufl = row["ufl"] if isinstance(row["ufl"], str) else f"{row['ufl']:.3e}"
    header = f"{'model':<9}{'e_min':>7}{'UFL':>12}{'D':>3}{'t_max^x':>9}{'t_max^w':>9}{'t_max^xw':>10}{'n_max^xw':>10}"
    print(header)
    print(
        f"{row['model']:<9}{row['e_min']:>7}{ufl:>12}{row['dimension']:>3}"
        f"{_first_decimals(row['t_max_x']):>9}{_first_decimals(row['t_max_w']):>9}"
        f"{_first_decimals(row['t_max_xw']):>10}{row['n_max_xw']:>10}"
    )
    return EXIT_OK


def node_document(model_name: str, n: int, strategy_name: str, dim: int) -> dict:
    model = get_model(model_name)
    t_max = window_limits(model, dim).t_max_xw
    t_safe = usable_window(model, t_max)
    if strategy_name == "optimal":
        n_max = max_order(t_safe)
        if n > n_max:
            raise OrderExceedsMax(n, n_max, t_max)
        h = h_optimal(n)
    else:
        h = h_maximal(n, model.dtype(t_safe))
    table = build_table(model, n, h, t_max, dimension_hint=dim)
    doc = table_to_document(table)
    doc["strategy"] = strategy_name
    return doc


def cmd_nodes(args) -> int:
    print(json.dumps(node_document(args.model, args.n, args.strategy, args.dim)))
    return EXIT_OK


def _case_params(args) -> dict:
    params = {}
    if args.case == "reciprocal":
        if args.delta is not None:
            params["delta"] = args.delta
        if args.guard_a is not None:
            params["a"] = args.guard_a
    elif args.delta is not None or args.guard_a is not None:
        raise ValueError("--delta and --guard-a only apply to the reciprocal case")
    return params


def cmd_integrate(args) -> int:
    case = cases.get_case(args.case, **_case_params(args))
    model = get_model(args.model)
    strategy = _strategy(args.strategy)
    status = EXIT_OK
    if args.n is not None:
        result = integrate_nd(case.integrand, case.domains, model, strategy, args.n)
    else:
        n_limit = args.n_limit or _DEFAULT_N_LIMIT.get(case.dimension, 64)
        try:
            result = integrate_adaptive(
                case.integrand, case.domains, model, strategy, args.rel_tol, args.n_start, n_limit
            )
        except NotConverged as exc:
            result = exc.result
            status = EXIT_NOT_CONVERGED
    report = {
        "case": case.name,
        "model": model.name.value,
        "strategy": strategy.kind.value,
        "value": float(result.value),
        "exact": case.exact_value,
        "relative_error": result.relative_error(case.exact_value),
        "n": result.order,
        "evaluations": result.evaluations,
        "error_estimate": result.error_estimate,
        "converged": result.converged,
        "t_max": result.t_max_used,
        "h": result.h_used,
    }
    if args.json:
        print(json.dumps({k: None if isinstance(v, float) and math.isnan(v) else v for k, v in report.items()}))
    else:
        for key, val in report.items():
            print(f"{key:>15}: {val!r}" if isinstance(val, float) else f"{key:>15}: {val}")
    return status


def cmd_converge(args) -> int:
    case = cases.get_case(args.case, **_case_params(args))
    models = [get_model(m.strip()) for m in args.models.split(",") if m.strip()]
    if not models:
        raise ValueError("--models is empty")
    if args.schedule:
        schedule = [int(v) for v in args.schedule.split(",") if v.strip()]
    else:
        schedule = list(range(args.n_min, args.n_max + 1, args.step))
    records, notes = convergence_sweep(case, models, schedule, include_gl=not args.no_gl)
    write_sweep_csv(args.out, records, notes)
    print(f"wrote {len(records)} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deq", description="Floating-point aware tanh-sinh quadrature")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("limits", help="intrinsic window limits of a floating-point model")
    p.add_argument("--model", required=True)
    p.add_argument("--dim", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("nodes", help="emit a node table as JSON")
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strategy", choices=("optimal", "maximal"), default="maximal")
    p.add_argument("--dim", type=int, choices=(1, 2, 3), default=1)
    p.set_defaults(func=cmd_nodes)

    p = sub.add_parser("integrate", help="integrate a registered benchmark case")
    p.add_argument("--case", required=True)
    p.add_argument("--model", default="double")
    p.add_argument("--strategy", choices=("optimal", "maximal"), default="maximal")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--rel-tol", type=float)
    group.add_argument("--n", type=int)
    p.add_argument("--n-start", type=int, default=4)
    p.add_argument("--n-limit", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--guard-a", type=float)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("converge", help="relative error versus order, as CSV")
    p.add_argument("--case", required=True)
    p.add_argument("--models", default="double")
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--schedule", help="comma-separated orders; overrides --n-min/--n-max/--step")
    p.add_argument("--out", required=True)
    p.add_argument("--delta", type=float)
    p.add_argument("--guard-a", type=float)
    p.add_argument("--no-gl", action="store_true", help="skip the Gauss-Legendre rows")
    p.set_defaults(func=cmd_converge)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedModel as exc:
        print(f"deq: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (DeqError, ValueError, KeyError) as exc:
        print(f"deq: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"deq: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
