"""Relative error versus order for every benchmark case, written as CSV.

One file per case lands in ``--out-dir``: ``reciprocal.csv`` is the 1-D
singular-endpoint comparison (optimal vs maximal spacing vs Gauss-Legendre),
``f1.csv`` .. ``f3.csv`` the 1-D to 3-D radial singularities.  Plotting is
left to the reader; the columns are n, evaluations, method, model,
relative_error, wall_time_ns.
"""

import argparse
from pathlib import Path

from deq.cases import case_fdim, case_reciprocal
from deq.float_model import MODELS
from deq.sweep import convergence_sweep, write_sweep_csv

# orders per case; the 3-D grid grows as (2n+1)^3, so it stops earlier
SCHEDULES = {
    "reciprocal": list(range(1, 20)) + list(range(20, 200, 10)) + list(range(200, 461, 20)),
    "f1": list(range(1, 61)),
    "f2": list(range(2, 61, 2)) + list(range(70, 201, 10)),
    "f3": list(range(2, 41, 2)) + list(range(50, 101, 10)),
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--cases", default="reciprocal,f1,f2,f3")
    parser.add_argument("--delta", type=float, default=1e-6, help="lower bound of the reciprocal case")
    parser.add_argument("--guard-a", type=float, default=100.0)
    parser.add_argument("--models", default=None, help="comma-separated; default every available model")
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.models:
        models = [MODELS[m] for m in args.models.split(",")]
    else:
        models = [m for m in MODELS.values() if m.available]

    for name in args.cases.split(","):
        if name == "reciprocal":
            case = case_reciprocal(args.delta, args.guard_a)
        else:
            case = case_fdim(int(name[1:]))
        # the 3-D case is only swept in double precision to keep run time modest
        case_models = [m for m in models if m.name.value == "double"] if case.dimension == 3 else models
        records, notes = convergence_sweep(case, case_models, SCHEDULES[name])
        path = out_dir / f"{name}.csv"
        write_sweep_csv(path, records, notes)
        for model in case_models:
            for method in ("ts_optimal", "ts_maximal"):
                rows = [r for r in records if r.method == method and r.model == str(model)]
                if rows:
                    best = min(rows, key=lambda r: r.relative_error)
                    print(f"{name:<11}{str(model):<9}{method:<12} best {best.relative_error:.2e} at n={best.n}")
        gl = [r for r in records if r.method == "gauss_legendre"]
        if gl:
            best = min(gl, key=lambda r: r.relative_error)
            print(f"{name:<11}{'double':<9}{'gauss_leg.':<12} best {best.relative_error:.2e} at n={best.n}")
        print(f"  -> {path}")


if __name__ == "__main__":
    main()
