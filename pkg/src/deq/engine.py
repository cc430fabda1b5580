"""Tanh-sinh quadrature over finite boxes.

Integrands are called with one :class:`EvaluationPoint` per axis.  The
fields of each point are numpy arrays already shaped for broadcasting
(axis k varies along array dimension k), so a single call evaluates a whole
tensor grid.  Near an endpoint the distance fields carry full relative
precision; ``x`` itself does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, EvaluationFailure, NotConverged, OrderExceedsMax
from .float_model import DOUBLE, FloatModel, window_limits
from .nodes import NodeTable, build_table
from .spacing import SpacingStrategy, h_maximal, h_optimal, max_order
from .summation import compensated_sum

WindowLimit = Union[float, Callable[[FloatModel], float], None]

# relative inward margin applied to every window so that rounding of t = i*h
# and of sinh/exp in the model cannot push the outermost node below the UFL
_WINDOW_GUARD_ULPS = 16


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError(f"interval bounds must be finite, got [{self.lower}, {self.upper}]")
        if not self.lower < self.upper:
            raise ValueError(f"interval needs lower < upper, got [{self.lower}, {self.upper}]")

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class EvaluationPoint:
    """Coordinates of evaluation nodes along one axis.

    ``dist_lower``/``dist_upper`` are the distances to the interval bounds;
    the one belonging to the nearer bound is formed directly from the stored
    endpoint distance, never as a difference of abscissae.
    """

    x: np.ndarray
    dist_lower: np.ndarray
    dist_upper: np.ndarray
    axis: int


@dataclass(frozen=True)
class Integrand:
    """Integrand of ``arity`` variables.

    ``func(*points)`` receives one EvaluationPoint per axis and returns values
    broadcastable to the tensor grid.  ``window_limit`` is an optional
    integrand-specific bound on |t|, either a number or a function of the
    floating-point model.
    """

    func: Callable[..., np.ndarray]
    arity: int = 1
    window_limit: WindowLimit = None
    name: str = ""

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError(f"arity must be >= 1, got {self.arity}")

    def limit_for(self, model: FloatModel) -> float | None:
        if self.window_limit is None:
            return None
        if callable(self.window_limit):
            return float(self.window_limit(model))
        return float(self.window_limit)

    def __call__(self, *points: EvaluationPoint):
        return self.func(*points)


@dataclass(frozen=True)
class IntegrationResult:
    value: np.floating
    order: int
    evaluations: int
    error_estimate: float = math.nan
    converged: bool = False
    t_max_used: float = math.nan
    h_used: float = math.nan
    model: FloatModel = DOUBLE

    def relative_error(self, exact: float) -> float:
        return abs(float(self.value) - exact) / abs(exact)


def effective_window(model: FloatModel, dimension: int, integrand_limit: float | None = None) -> float:
    """min(t_max^xw(model, dimension), integrand_limit)."""
    t_max = window_limits(model, dimension).t_max_xw
    if integrand_limit is not None:
        if not integrand_limit > 0:
            raise ValueError(f"integrand window limit must be positive, got {integrand_limit}")
        t_max = min(t_max, integrand_limit)
    return t_max


def usable_window(model: FloatModel, t_max: float) -> float:
    """t_max pulled inward by a few units of rounding (model or double, whichever is coarser)."""
    eps = max(float(model.machine_epsilon), np.finfo(np.float64).eps)
    return t_max * (1 - _WINDOW_GUARD_ULPS * eps)


def _as_intervals(domains) -> list[Interval]:
    if isinstance(domains, Interval):
        return [domains]
    out = []
    for d in domains:
        out.append(d if isinstance(d, Interval) else Interval(*d))
    return out


def _axis_points(table: NodeTable, interval: Interval, axis: int, dims: int) -> EvaluationPoint:
    dtype = table.model.dtype
    full = table.full()
    idx = table.indices()
    a, b = dtype(interval.lower), dtype(interval.upper)
    width = b - a
    half = width / 2
    dist = half * full["y"]
    left, right = idx < 0, idx > 0
    dist_lower = np.where(left, dist, np.where(right, width - dist, half))
    dist_upper = np.where(right, dist, np.where(left, width - dist, half))
    x = np.where(left, a + dist, np.where(right, b - dist, a + half))
    shape = [1] * dims
    shape[axis] = -1
    return EvaluationPoint(
        x=x.reshape(shape),
        dist_lower=dist_lower.reshape(shape),
        dist_upper=dist_upper.reshape(shape),
        axis=axis,
    )


def _select(point: EvaluationPoint, positions: np.ndarray | None) -> EvaluationPoint:
    if positions is None:
        return point
    axis = point.axis
    return EvaluationPoint(
        x=np.take(point.x, positions, axis=axis),
        dist_lower=np.take(point.dist_lower, positions, axis=axis),
        dist_upper=np.take(point.dist_upper, positions, axis=axis),
        axis=axis,
    )


def _evaluate(f: Integrand, points: list[EvaluationPoint], dtype) -> np.ndarray:
    shape = tuple(max(p.x.shape[p.axis], 1) for p in points)
    try:
        with np.errstate(all="ignore"):
            values = f(*points)
        values = np.broadcast_to(np.asarray(values, dtype=dtype), shape)
    except EvaluationFailure:
        raise
    except Exception as exc:
        ranges = ", ".join(
            f"axis {p.axis}: x in [{float(p.x.min()):.6g}, {float(p.x.max()):.6g}]" for p in points
        )
        raise EvaluationFailure(f"integrand {f.name or f.func!r} raised {exc!r} ({ranges})") from exc
    bad = ~np.isfinite(values)
    if bad.any():
        where = np.unravel_index(np.argmax(bad), shape)
        coords = ", ".join(
            f"x{p.axis}={float(np.ravel(p.x)[k])!r} (dist_lower={float(np.ravel(p.dist_lower)[k])!r})"
            for p, k in zip(points, where)
        )
        raise EvaluationFailure(
            f"integrand {f.name or f.func!r} returned {values[where]!r} at {coords}"
        )
    return values


def _grid_values(f, points, dtype, previous: np.ndarray | None) -> tuple[np.ndarray, int]:
    """Integrand on the full tensor grid, reusing ``previous`` on even positions.

    With nested grids (h halved) the previous order's nodes sit at the even
    positions of the new grid.  The remaining points are covered by D
    disjoint blocks: axis k odd, axes before k even, axes after k anything.
    """
    dims = len(points)
    if previous is None:
        values = _evaluate(f, points, dtype)
        return np.array(values), values.size
    length = previous.shape[0] * 2 - 1
    even = np.arange(0, length, 2)
    odd = np.arange(1, length, 2)
    grid = np.empty((length,) * dims, dtype=dtype)
    grid[(slice(None, None, 2),) * dims] = previous
    count = 0
    for k in range(dims):
        sel = [even] * k + [odd] + [None] * (dims - k - 1)
        block = _evaluate(f, [_select(p, s) for p, s in zip(points, sel)], dtype)
        index = tuple(s if s is not None else np.arange(length) for s in sel)
        grid[np.ix_(*index)] = block
        count += block.size
    return grid, count


def _axis_weights(w: np.ndarray, dims: int) -> list[np.ndarray]:
    out = []
    for axis in range(dims):
        shape = [1] * dims
        shape[axis] = -1
        out.append(w.reshape(shape))
    return out


def weights_by_magnitude(axis_weights: list[np.ndarray]) -> list[np.ndarray]:
    """Per grid point, the axis weights ordered from largest to smallest.

    Applying the weights in this order makes every term independent of which
    axis a weight came from, so permuting the variables of the integrand
    permutes the terms without changing any of them.
    """
    if len(axis_weights) == 1:
        return list(axis_weights)
    if len(axis_weights) == 2:
        a, b = axis_weights
        return [np.maximum(a, b), np.minimum(a, b)]
    if len(axis_weights) == 3:
        a, b, c = axis_weights
        lo_ab, hi_ab = np.minimum(a, b), np.maximum(a, b)
        return [np.maximum(hi_ab, c), np.maximum(lo_ab, np.minimum(hi_ab, c)), np.minimum(lo_ab, c)]
    stacked = np.sort(np.stack(np.broadcast_arrays(*axis_weights)), axis=0)
    return list(stacked[::-1])


def apply_weights(values: np.ndarray, axis_weights: list[np.ndarray]) -> np.ndarray:
    """values * prod(weights), multiplied in one factor at a time, largest weight first.

    The running product starts from the integrand value, so a tiny weight
    can be offset by a large value before anything underflows.
    """
    terms = values
    for w in weights_by_magnitude(axis_weights):
        terms = terms * w
    return terms


def outer_weight_product(table: NodeTable, dims: int) -> np.ndarray:
    """Per grid point, the product of all weights but the smallest.

    This is the largest pure weight product formed while applying weights,
    and the quantity the dimension-aware window keeps above the UFL.
    """
    dtype = table.model.dtype
    ordered = weights_by_magnitude(_axis_weights(table.full()["w"], dims))
    product = np.ones((1,) * dims, dtype=dtype)
    for w in ordered[:-1]:
        product = product * w
    return product


def _tensor_sum(table: NodeTable, intervals: list[Interval], values: np.ndarray) -> np.floating:
    dtype = table.model.dtype
    dims = len(intervals)
    terms = apply_weights(values, _axis_weights(table.full()["w"], dims))
    scale = dtype(1)
    for interval in intervals:
        scale = scale * (table.spacing * ((dtype(interval.upper) - dtype(interval.lower)) / 2))
    return compensated_sum(terms) * scale


@dataclass
class _Rule:
    f: Integrand
    intervals: list[Interval]
    model: FloatModel
    strategy: SpacingStrategy

    def __post_init__(self):
        if self.f.arity != len(self.intervals):
            raise DimensionMismatch(
                f"integrand arity {self.f.arity} differs from the number of domains {len(self.intervals)}"
            )
        self.dims = len(self.intervals)
        self.t_max = effective_window(self.model, self.dims, self.f.limit_for(self.model))
        self.t_safe = usable_window(self.model, self.t_max)
        self.n_max = (
            max_order(self.t_safe, self.strategy.strip_width_d) if self.strategy.is_optimal else None
        )

    def spacing(self, n: int):
        if n < 1:
            raise ValueError(f"order must be >= 1, got {n}")
        if self.strategy.is_optimal:
            if n > self.n_max:
                raise OrderExceedsMax(n, self.n_max, self.t_max)
            return h_optimal(n, self.strategy.strip_width_d)
        return h_maximal(n, self.model.dtype(self.t_safe))

    def evaluate(self, n: int, previous: np.ndarray | None = None):
        h = self.spacing(n)
        table = build_table(self.model, n, h, self.t_max, dimension_hint=self.dims)
        points = [_axis_points(table, iv, k, self.dims) for k, iv in enumerate(self.intervals)]
        values, count = _grid_values(self.f, points, self.model.dtype, previous)
        return _tensor_sum(table, self.intervals, values), values, count, table

    def result(self, value, n, evaluations, table, **kw) -> IntegrationResult:
        return IntegrationResult(
            value=value,
            order=n,
            evaluations=evaluations,
            t_max_used=float(table.window),
            h_used=float(table.spacing),
            model=self.model,
            **kw,
        )


def _default_strategy(strategy):
    return SpacingStrategy.maximal() if strategy is None else strategy


def integrate_nd(
    f: Integrand,
    domains: Sequence[Interval],
    model: FloatModel = DOUBLE,
    strategy: SpacingStrategy | None = None,
    n: int = 50,
) -> IntegrationResult:
    """Tensor-product tanh-sinh rule of order n on every axis.

    The node table is built once, validated for the weight power
    max(1, D-1), and shared by all axes.
    """
    rule = _Rule(f, _as_intervals(domains), model, _default_strategy(strategy))
    value, _, count, table = rule.evaluate(n)
    return rule.result(value, n, count, table)


def integrate_1d(
    f: Integrand,
    domain: Interval,
    model: FloatModel = DOUBLE,
    strategy: SpacingStrategy | None = None,
    n: int = 50,
) -> IntegrationResult:
    if f.arity != 1:
        raise DimensionMismatch(f"integrate_1d needs a 1-variable integrand, got arity {f.arity}")
    return integrate_nd(f, [domain], model, strategy, n)


def integrate_adaptive(
    f: Integrand,
    domains,
    model: FloatModel = DOUBLE,
    strategy: SpacingStrategy | None = None,
    rel_tol: float = 1e-12,
    n_start: int = 4,
    n_limit: int = 1024,
) -> IntegrationResult:
    """Double the order until two successive estimates agree to ``rel_tol``.

    Under maximal spacing the grids are nested and every integrand value is
    reused at the next order.  Under optimal spacing nothing is reused and
    the ladder is clamped at n_max.  Raises ``NotConverged`` (carrying the
    last estimate) when the tolerance is not met.
    """
    if not rel_tol > 0:
        raise ValueError(f"rel_tol must be positive, got {rel_tol}")
    if n_start < 1:
        raise ValueError(f"n_start must be >= 1, got {n_start}")
    rule = _Rule(f, _as_intervals(domains), model, _default_strategy(strategy))
    reuse = not rule.strategy.is_optimal
    ceiling = n_limit if rule.n_max is None else min(n_limit, rule.n_max)
    if n_start > ceiling:
        if rule.n_max is not None and n_start > rule.n_max:
            raise OrderExceedsMax(n_start, rule.n_max, rule.t_max)
        raise ValueError(f"n_start={n_start} exceeds n_limit={n_limit}")

    n = n_start
    value, values, total, table = rule.evaluate(n)
    err = math.nan
    while True:
        if reuse:
            nxt = 2 * n
            if nxt > ceiling:
                break
        else:
            nxt = min(2 * n, ceiling)
            if nxt == n:
                break
        new_value, new_values, count, table = rule.evaluate(nxt, values if reuse else None)
        total += count
        diff = abs(new_value - value)
        n, value, values, err = nxt, new_value, new_values, float(diff)
        if diff <= rel_tol * abs(new_value):
            return rule.result(value, n, total, table, error_estimate=err, converged=True)
    raise NotConverged(rule.result(value, n, total, table, error_estimate=err, converged=False))
