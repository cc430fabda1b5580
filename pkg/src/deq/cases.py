"""Benchmark integrands with closed-form values and their window guards."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .engine import Integrand, Interval
from .errors import UnknownCase
from .float_model import FloatModel
from .nodes import inverse_endpoint_distance, window_for_log_distance

CATALAN = 0.91596559417721901505460351493238411

_TI2_REL_TOL = 1e-18


def _ti2_direct(x: float) -> float:
    total = 0.0
    x2 = x * x
    power = x
    k = 0
    while True:
        term = power / (2 * k + 1) ** 2
        total += -term if k % 2 else term
        if abs(term) < _TI2_REL_TOL * abs(total):
            return total
        power *= x2
        k += 1


def _ti2_accelerated(x: float, terms: int = 40) -> float:
    # Cohen-Rodriguez Villegas-Zagier acceleration; the coefficients
    # x^(2k+1)/(2k+1)^2 form a moment sequence for 0 < x <= 1.
    d = (3 + math.sqrt(8)) ** terms
    d = (d + 1 / d) / 2
    b, c, s = -1.0, -d, 0.0
    x2 = x * x
    power = x
    for k in range(terms):
        c = b - c
        s += c * power / (2 * k + 1) ** 2
        b *= (k + terms) * (k - terms) / ((k + 0.5) * (k + 1))
        power *= x2
    return s / d


def inverse_tangent_integral(x: float) -> float:
    """Ti2(x) = sum_k (-1)^k x^(2k+1) / (2k+1)^2 for |x| <= 1."""
    if abs(x) > 1:
        raise ValueError(f"inverse tangent integral series needs |x| <= 1, got {x}")
    if x == 0:
        return 0.0
    if abs(x) <= 0.5:
        return _ti2_direct(x)
    return math.copysign(_ti2_accelerated(abs(x)), x)


@dataclass(frozen=True)
class BenchmarkCase:
    name: str
    dimension: int
    domains: tuple[Interval, ...]
    integrand: Integrand
    exact_value: float
    guard: str
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.exact_value):
            raise ValueError(f"exact value of {self.name} is not finite")
        if self.integrand.arity != self.dimension or len(self.domains) != self.dimension:
            raise ValueError(f"case {self.name}: dimension, arity and domains disagree")

    def window_limit(self, model: FloatModel) -> float | None:
        return self.integrand.limit_for(model)


def reciprocal_window(delta: float, a: float, model: FloatModel) -> float:
    """Largest t with (x_{-n} - delta)/delta > a * eps, for nodes on [delta, 1]."""
    eps = float(model.machine_epsilon)
    half = (1 - delta) / 2
    return inverse_endpoint_distance(a * eps * delta / half)


def case_reciprocal(delta: float = 1e-6, a: float = 100.0) -> BenchmarkCase:
    """Integral of 1/x over [delta, 1], exact value -ln(delta)."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if a < 1:
        raise ValueError(f"guard factor a must be >= 1, got {a}")

    def f(p):
        # x = delta + dist_lower on the left half, 1 - dist_upper on the right
        return 1 / p.x

    integrand = Integrand(
        f, arity=1, window_limit=lambda model: reciprocal_window(delta, a, model), name="reciprocal"
    )
    return BenchmarkCase(
        name="reciprocal",
        dimension=1,
        domains=(Interval(delta, 1.0),),
        integrand=integrand,
        exact_value=-math.log(delta),
        guard=f"(x_min - delta)/delta > {a:g} * eps",
        parameters={"delta": delta, "a": a},
    )


def sqrt_ufl_window(model: FloatModel) -> float:
    """Largest t with smallest abscissa on (0, 1] still >= sqrt(UFL)."""
    # distance on (0, 1] is y/2, so the bound is y >= 2 sqrt(UFL)
    return window_for_log_distance(math.log(2) * (1 + model.min_exponent / 2))


def _f1(p):
    return 1 / np.sqrt(p.dist_lower)


def _f2(p, q):
    return 1 / np.sqrt(p.dist_lower**2 + q.dist_lower**2)


def _f3(p, q, r):
    return 1 / (p.dist_lower**2 + q.dist_lower**2 + r.dist_lower**2)


def _exact_i3() -> float:
    s2 = math.sqrt(2)
    return 3 * (inverse_tangent_integral(3 - 2 * s2) - CATALAN) + 0.75 * math.pi * math.atanh(
        2 * s2 / 3
    )


def case_fdim(dimension: int) -> BenchmarkCase:
    """f_D over (0, 1]^D with the singularity at the origin."""
    if dimension not in (1, 2, 3):
        raise ValueError(f"dimension must be 1, 2 or 3, got {dimension}")
    unit = tuple(Interval(0.0, 1.0) for _ in range(dimension))
    if dimension == 1:
        return BenchmarkCase("f1", 1, unit, Integrand(_f1, 1, name="f1"), 2.0, "none")
    guard = "x_min >= sqrt(UFL)"
    if dimension == 2:
        exact = 2 * math.log(1 + math.sqrt(2))
        return BenchmarkCase("f2", 2, unit, Integrand(_f2, 2, sqrt_ufl_window, "f2"), exact, guard)
    return BenchmarkCase("f3", 3, unit, Integrand(_f3, 3, sqrt_ufl_window, "f3"), _exact_i3(), guard)


_REGISTRY: dict[str, Callable[..., BenchmarkCase]] = {
    "reciprocal": case_reciprocal,
    "f1": lambda: case_fdim(1),
    "f2": lambda: case_fdim(2),
    "f3": lambda: case_fdim(3),
}

CASE_NAMES = tuple(_REGISTRY)


def get_case(name: str, **params) -> BenchmarkCase:
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise UnknownCase(f"unknown case {name!r}; choose from {', '.join(CASE_NAMES)}") from None
    return factory(**params)
