"""Double-precision Gauss-Legendre quadrature, used as a comparison baseline."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .engine import (
    EvaluationPoint,
    Integrand,
    IntegrationResult,
    Interval,
    _as_intervals,
    _axis_weights,
    _evaluate,
    apply_weights,
)
from .errors import DimensionMismatch, NoConvergence
from .float_model import DOUBLE
from .summation import compensated_sum

MAX_POINTS = 20001
_MAX_NEWTON_ITERATIONS = 100
_ROOT_TOL = 2 * np.finfo(np.float64).eps


@dataclass(frozen=True, eq=False)
class GaussLegendreRule:
    points: int
    abscissae: np.ndarray
    weights: np.ndarray


def _legendre(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_n(x) and P_n'(x) by the three-term recurrence."""
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    if n == 0:
        return p0, np.zeros_like(x)
    dp = n * (x * p1 - p0) / (x * x - 1)
    return p1, dp


@functools.lru_cache(maxsize=64)
def gauss_legendre_rule(n_points: int) -> GaussLegendreRule:
    """Roots of P_N by Newton iteration from cos(pi (i - 1/4)/(N + 1/2)).

    Only the roots in (0, 1) are iterated; the rest follow by symmetry.
    """
    if not 1 <= n_points <= MAX_POINTS:
        raise ValueError(f"number of points must lie in [1, {MAX_POINTS}], got {n_points}")
    half = (n_points + 1) // 2
    i = np.arange(1, half + 1)
    x = np.cos(np.pi * (i - 0.25) / (n_points + 0.5))
    converged = np.zeros(half, dtype=bool)
    for _ in range(_MAX_NEWTON_ITERATIONS):
        p, dp = _legendre(n_points, x)
        step = np.where(converged, 0.0, p / dp)
        x = x - step
        converged |= np.abs(step) <= _ROOT_TOL
        if converged.all():
            break
    else:
        raise NoConvergence(
            f"Newton iteration for {int((~converged).sum())} Legendre roots (N={n_points}) did not converge"
        )
    if n_points % 2:
        x[-1] = 0.0
    _, dp = _legendre(n_points, x)
    w = 2 / ((1 - x * x) * dp * dp)
    # descending positive roots -> ascending full rule
    mirror = slice(None, None, -1)
    if n_points % 2:
        xs = np.concatenate([-x[:-1], x[mirror]])
        ws = np.concatenate([w[:-1], w[mirror]])
    else:
        xs = np.concatenate([-x, x[mirror]])
        ws = np.concatenate([w, w[mirror]])
    xs.setflags(write=False)
    ws.setflags(write=False)
    return GaussLegendreRule(n_points, xs, ws)


def _axis_points(rule: GaussLegendreRule, interval: Interval, axis: int, dims: int) -> EvaluationPoint:
    half = (interval.upper - interval.lower) / 2
    dist_lower = half * (1 + rule.abscissae)
    dist_upper = half * (1 - rule.abscissae)
    x = interval.lower + dist_lower
    shape = [1] * dims
    shape[axis] = -1
    return EvaluationPoint(
        x=x.reshape(shape),
        dist_lower=dist_lower.reshape(shape),
        dist_upper=dist_upper.reshape(shape),
        axis=axis,
    )


def integrate_gl(f: Integrand, domain, n_points: int) -> IntegrationResult:
    """Affine-mapped N-point Gauss-Legendre rule, tensorised for arity > 1.

    Always runs in double precision.
    """
    intervals = _as_intervals(domain)
    if f.arity != len(intervals):
        raise DimensionMismatch(
            f"integrand arity {f.arity} differs from the number of domains {len(intervals)}"
        )
    rule = gauss_legendre_rule(n_points)
    dims = len(intervals)
    points = [_axis_points(rule, iv, k, dims) for k, iv in enumerate(intervals)]
    values = _evaluate(f, points, np.float64)
    terms = apply_weights(values, _axis_weights(rule.weights, dims))
    scale = math.prod((iv.upper - iv.lower) / 2 for iv in intervals)
    value = compensated_sum(terms) * scale
    return IntegrationResult(value=value, order=n_points, evaluations=values.size, model=DOUBLE)
