"""Recompute the table of intrinsic window limits and maximal optimal orders.

Prints the rounded layout next to the full-precision values and, with
``--out``, writes all rows as JSON.
"""

import argparse
import json

from deq.cli import limits_row
from deq.float_model import MODELS


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", help="write the rows as JSON to this file")
    args = parser.parse_args()

    rows = []
    print(f"{'model':<9}{'D':>2}{'t_max^x':>12}{'t_max^w':>12}{'t_max^xw':>12}{'n_max':>8}")
    for name, model in MODELS.items():
        if not model.available:
            print(f"{name:<9} (not available on this platform)")
            continue
        for dim in (1, 2, 3):
            row = limits_row(name, dim)
            rows.append(row)
            print(
                f"{name:<9}{dim:>2}{row['t_max_x']:>12.6f}{row['t_max_w']:>12.6f}"
                f"{row['t_max_xw']:>12.6f}{row['n_max_xw']:>8}"
            )
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
