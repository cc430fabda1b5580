import math

import mpmath
import numpy as np
import pytest

from deq.cases import (
    CASE_NAMES,
    CATALAN,
    case_fdim,
    case_reciprocal,
    get_case,
    inverse_tangent_integral,
    reciprocal_window,
    sqrt_ufl_window,
)
from deq.engine import _Rule, integrate_1d, integrate_nd
from deq.errors import UnknownCase
from deq.float_model import DOUBLE, EXTENDED, SINGLE, extended_available, window_limits
from deq.nodes import build_table
from deq.spacing import SpacingStrategy, h_maximal

MODELS = [SINGLE, DOUBLE] + ([EXTENDED] if extended_available() else [])


def test_ti2_examples():
    assert inverse_tangent_integral(0.0) == 0.0
    assert abs(inverse_tangent_integral(1.0) - CATALAN) < 1e-15
    x = 3 - 2 * math.sqrt(2)
    with mpmath.workdps(30):
        ref = mpmath.quad(lambda t: mpmath.atan(t) / t, [0, x])
    assert abs(inverse_tangent_integral(x) - float(ref)) < 1e-12


@pytest.mark.parametrize("x", [-1.0, -0.7, -0.2, 1e-8, 0.3, 0.5, 0.51, 0.9, 0.999])
def test_ti2_matches_quadrature(x):
    with mpmath.workdps(30):
        ref = mpmath.quad(lambda t: mpmath.atan(t) / t, [0, x])
    assert inverse_tangent_integral(x) == pytest.approx(float(ref), rel=1e-14, abs=1e-16)


def test_ti2_domain():
    with pytest.raises(ValueError):
        inverse_tangent_integral(1.5)


def test_catalan_literal():
    assert CATALAN == float(mpmath.catalan)


def test_exact_values():
    assert case_reciprocal(1e-6).exact_value == pytest.approx(13.8155105579643, rel=1e-14)
    assert case_reciprocal(0.5).exact_value == pytest.approx(0.693147180559945, rel=1e-14)
    assert case_fdim(1).exact_value == 2.0
    assert case_fdim(2).exact_value == pytest.approx(1.76274717403909, rel=1e-14)
    # quoted elsewhere as ~1.91851; the closed form gives 1.9185310556 (see the polylog check below)
    assert case_fdim(3).exact_value == pytest.approx(1.91851, abs=5e-5)


def test_i3_closed_form_high_precision():
    # the same closed form evaluated with mpmath's own Ti2 (polylog) and Catalan
    with mpmath.workdps(30):
        x = 3 - 2 * mpmath.sqrt(2)
        ti2 = (mpmath.polylog(2, 1j * x) - mpmath.polylog(2, -1j * x)).imag / 2
        ref = 3 * (ti2 - mpmath.catalan) + 0.75 * mpmath.pi * mpmath.atanh(2 * mpmath.sqrt(2) / 3)
    assert case_fdim(3).exact_value == pytest.approx(float(ref), rel=1e-14)


def test_i3_midpoint_cross_check():
    """10^6-cell midpoint rule on (0,1]^3 with the singular corner cell excluded.

    1/r^2 is homogeneous of degree -2, so the corner cube [0, 1/m]^3 holds
    exactly 1/m of the whole integral; the other cells give (1 - 1/m) I.
    """
    m = 100
    c = (np.arange(m) + 0.5) / m
    x, y = np.meshgrid(c, c, indexing="ij")
    r2 = x**2 + y**2
    total = 0.0
    for z in c:
        total += np.sum(1 / (r2 + z * z))
    total -= 1 / (3 * (0.5 / m) ** 2)
    estimate = total / m**3 / (1 - 1 / m)
    assert abs(estimate - case_fdim(3).exact_value) / case_fdim(3).exact_value < 1e-3


def test_registry():
    assert set(CASE_NAMES) == {"reciprocal", "f1", "f2", "f3"}
    assert get_case("reciprocal", delta=1e-3).parameters["delta"] == 1e-3
    for name in CASE_NAMES:
        case = get_case(name)
        assert case.integrand.arity == case.dimension == len(case.domains)
    with pytest.raises(UnknownCase):
        get_case("f4")
    with pytest.raises(KeyError):
        get_case("nope")


def test_parameter_validation():
    for bad in (0.0, 1.0, -1.0):
        with pytest.raises(ValueError):
            case_reciprocal(bad)
    with pytest.raises(ValueError):
        case_reciprocal(1e-3, 0.5)
    with pytest.raises(ValueError):
        case_fdim(4)


@pytest.mark.parametrize("model", MODELS, ids=str)
def test_guard_monotone_in_a(model):
    for delta in (1e-3, 1e-6, 1e-9):
        assert reciprocal_window(delta, 1000, model) <= reciprocal_window(delta, 100, model)
        assert reciprocal_window(delta, 100, model) <= reciprocal_window(delta, 1, model)


@pytest.mark.parametrize("model", MODELS, ids=str)
@pytest.mark.parametrize("delta", [1e-3, 1e-6])
def test_guard_keeps_left_abscissae_distinct(model, delta):
    """Near delta every abscissa stays resolvable: x_{-n} - delta > a*eps*delta, no ties."""
    case = case_reciprocal(delta, 100)
    rule = _Rule(case.integrand, list(case.domains), model, SpacingStrategy.maximal())
    dtype = model.dtype
    for n in (20, 100, 400):
        table = build_table(model, n, h_maximal(n, dtype(rule.t_safe)), rule.t_max)
        half = (dtype(1) - dtype(delta)) / 2
        x_left = dtype(delta) + half * table.y[::-1]  # from x_{-n} to the centre
        assert np.all(np.diff(x_left) > 0)
        # maximal spacing puts x_{-n} on the guard itself; rounding to ulp(delta) moves it by <= eps/2
        assert (x_left[0] - dtype(delta)) / dtype(delta) > (100 - 1) * model.machine_epsilon


@pytest.mark.parametrize("model", MODELS, ids=str)
def test_sqrt_ufl_guard(model):
    # smallest abscissa on (0, 1] is y/2; compare ln(y/2) with ln sqrt(UFL) in wide precision
    t = sqrt_ufl_window(model)
    with mpmath.workdps(40):
        u = mpmath.pi / 2 * mpmath.sinh(t)
        log_x_min = -u - mpmath.log(mpmath.cosh(u)) - mpmath.log(2)
        target = model.min_exponent / 2 * mpmath.log(2)
        assert abs(log_x_min - target) < 1e-9 * abs(target)
    assert t < window_limits(model, 3).t_max_x


def test_reciprocal_engine_accuracy():
    case = case_reciprocal(0.5)
    res = integrate_1d(case.integrand, case.domains[0], DOUBLE, SpacingStrategy.maximal(), 30)
    assert abs(float(res.value) - math.log(2)) < 1e-14


def test_cases_reproduced_at_double():
    mx = SpacingStrategy.maximal()
    for case, n, tol in ((case_fdim(1), 40, 1e-12), (case_reciprocal(1e-6), 200, 1e-12), (case_fdim(2), 150, 1e-10)):
        res = integrate_nd(case.integrand, case.domains, DOUBLE, mx, n)
        assert res.relative_error(case.exact_value) < tol
