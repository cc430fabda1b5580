"""Tanh-sinh quadrature with window limits derived from the floating-point model."""

from .engine import (
    EvaluationPoint,
    Integrand,
    IntegrationResult,
    Interval,
    effective_window,
    integrate_1d,
    integrate_adaptive,
    integrate_nd,
)
from .float_model import DOUBLE, EXTENDED, SINGLE, FloatModel, get_model, window_limits
from .spacing import SpacingStrategy, h_maximal, h_optimal, lambert_w0, max_order

__all__ = [
    "DOUBLE",
    "EXTENDED",
    "SINGLE",
    "EvaluationPoint",
    "FloatModel",
    "Integrand",
    "IntegrationResult",
    "Interval",
    "SpacingStrategy",
    "effective_window",
    "get_model",
    "h_maximal",
    "h_optimal",
    "integrate_1d",
    "integrate_adaptive",
    "integrate_nd",
    "lambert_w0",
    "max_order",
    "window_limits",
]
