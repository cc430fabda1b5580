"""Convergence sweeps over quadrature order, written as CSV."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence

from .baseline import integrate_gl
from .cases import BenchmarkCase
from .engine import _Rule, integrate_nd
from .float_model import FloatModel
from .spacing import SpacingStrategy

METHODS = ("ts_optimal", "ts_maximal", "gauss_legendre")
CSV_COLUMNS = ("n", "evaluations", "method", "model", "relative_error", "wall_time_ns")


@dataclass(frozen=True)
class SweepRecord:
    n: int
    evaluations: int
    method: str
    model: str
    relative_error: float
    wall_time_ns: int


def _timed(fn):
    start = time.perf_counter_ns()
    result = fn()
    return result, time.perf_counter_ns() - start


def convergence_sweep(
    case: BenchmarkCase,
    models: Sequence[FloatModel],
    schedule: Sequence[int],
    include_gl: bool = True,
) -> tuple[list[SweepRecord], list[str]]:
    """Relative error of every method at every order in ``schedule``.

    Returns the records, ordered by (method, model, n), and comment lines
    noting the orders skipped because they exceed the optimal n_max.
    """
    schedule = list(schedule)
    if not schedule:
        raise ValueError("the order schedule is empty")
    if any(n < 1 for n in schedule) or schedule != sorted(set(schedule)):
        raise ValueError("the order schedule must be strictly ascending positive integers")

    records: list[SweepRecord] = []
    notes: list[str] = []
    dims = case.dimension
    optimal = SpacingStrategy.optimal()
    maximal = SpacingStrategy.maximal()
    for model in models:
        n_max = _Rule(case.integrand, list(case.domains), model, optimal).n_max
        skipped = [n for n in schedule if n > n_max]
        if skipped:
            notes.append(
                f"ts_optimal omitted for n > {n_max} (model={model}, n_max={n_max}, "
                f"{len(skipped)} orders skipped)"
            )
        for method, strategy in (("ts_optimal", optimal), ("ts_maximal", maximal)):
            for n in schedule:
                if method == "ts_optimal" and n > n_max:
                    continue
                res, ns = _timed(
                    lambda: integrate_nd(case.integrand, case.domains, model, strategy, n)
                )
                records.append(
                    SweepRecord(n, res.evaluations, method, str(model), res.relative_error(case.exact_value), ns)
                )
    if include_gl:
        for n in schedule:
            res, ns = _timed(lambda: integrate_gl(case.integrand, case.domains, 2 * n + 1))
            records.append(
                SweepRecord(n, (2 * n + 1) ** dims, "gauss_legendre", "double",
                            res.relative_error(case.exact_value), ns)
            )
    model_rank = {str(m): i for i, m in enumerate(models)}
    records.sort(key=lambda r: (METHODS.index(r.method), model_rank.get(r.model, -1), r.n))
    return records, notes


def write_sweep_csv(path: str | Path, records: Iterable[SweepRecord], notes: Iterable[str] = ()) -> None:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            for note in notes:
                fh.write(f"# {note}\n")
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in records:
                writer.writerow([r.n, r.evaluations, r.method, r.model, repr(r.relative_error), r.wall_time_ns])
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV {path}: {exc.strerror or exc}") from exc


def read_sweep_csv(path: str | Path) -> list[SweepRecord]:
    path = Path(path)
    with path.open(newline="") as fh:
        rows = csv.DictReader(line for line in fh if not line.startswith("#"))
        if tuple(rows.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected header {rows.fieldnames}")
        types = {f.name: f.type for f in fields(SweepRecord)}
        conv = {"int": int, "float": float, "str": str}
        return [SweepRecord(**{k: conv[types[k]](v) for k, v in row.items()}) for row in rows]
