"""Floating-point models and the underflow-driven window limits they imply.

The limits are evaluated in multiple-precision arithmetic (mpmath) regardless
of the model they describe; they only parameterize node-table construction.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import UnsupportedModel

_WORK_DPS = 50
_BISECT_BRACKET = (1.0, 60.0)
_BISECT_TOL = 1e-9


class ModelName(str, enum.Enum):
    SINGLE = "single"
    DOUBLE = "double"
    EXTENDED = "extended"


_MIN_EXPONENT = {
    ModelName.SINGLE: -126,
    ModelName.DOUBLE: -1022,
    ModelName.EXTENDED: -16382,
}

_SIGNIFICAND_BITS = {
    ModelName.SINGLE: 24,
    ModelName.DOUBLE: 53,
    ModelName.EXTENDED: 64,
}


def extended_available() -> bool:
    """True when ``np.longdouble`` is a genuine x87-style 64-bit-significand type."""
    info = np.finfo(np.longdouble)
    return info.nmant >= 63 and info.minexp == _MIN_EXPONENT[ModelName.EXTENDED]


@dataclass(frozen=True)
class FloatModel:
    """A named IEEE-754 floating-point model.

    ``ufl`` and ``machine_epsilon`` are numpy scalars of the model's own type,
    so the extended UFL (about 3.4e-4932) is representable.
    """

    name: ModelName
    min_exponent: int
    significand_bits: int

    @property
    def dtype(self) -> type[np.floating]:
        if self.name is ModelName.SINGLE:
            return np.float32
        if self.name is ModelName.DOUBLE:
            return np.float64
        if not extended_available():
            raise UnsupportedModel("extended precision is not available on this platform")
        return np.longdouble

    @property
    def ufl(self) -> np.floating:
        return np.ldexp(self.dtype(1), self.min_exponent)

    @property
    def machine_epsilon(self) -> np.floating:
        return np.ldexp(self.dtype(1), 1 - self.significand_bits)

    @property
    def available(self) -> bool:
        return self.name is not ModelName.EXTENDED or extended_available()

    def __str__(self) -> str:
        return self.name.value


SINGLE = FloatModel(ModelName.SINGLE, -126, 24)
DOUBLE = FloatModel(ModelName.DOUBLE, -1022, 53)
EXTENDED = FloatModel(ModelName.EXTENDED, -16382, 64)

MODELS = {m.name.value: m for m in (SINGLE, DOUBLE, EXTENDED)}


def get_model(name: str | ModelName | FloatModel) -> FloatModel:
    """Look up a model by name.

    Raises ``ValueError`` for an unknown name and ``UnsupportedModel`` for a
    known model without native support on this platform.
    """
    if isinstance(name, FloatModel):
        model = name
    else:
        key = name.value if isinstance(name, ModelName) else str(name).lower()
        if key not in MODELS:
            raise ValueError(f"unknown floating-point model {name!r}; choose from {', '.join(MODELS)}")
        model = MODELS[key]
    if not model.available:
        raise UnsupportedModel(f"{model.name.value} precision is not available on this platform")
    return model


def weight_power(dimension: int) -> int:
    """Exponent applied to a single weight when validating a window, max(1, D-1)."""
    if dimension < 1:
        raise ValueError(f"dimension must be >= 1, got {dimension}")
    return max(1, dimension - 1)


@dataclass(frozen=True)
class WindowLimits:
    t_max_x: float
    t_max_w: float
    t_max_xw: float
    dimension: int
    weight_power: int


def _log_psi_prime(t: mpmath.mpf) -> mpmath.mpf:
    lam = mpmath.pi / 2
    return mpmath.log(lam * mpmath.cosh(t)) - 2 * mpmath.log(mpmath.cosh(lam * mpmath.sinh(t)))


@functools.lru_cache(maxsize=None)
def intrinsic_abscissa_limit(model: FloatModel) -> float:
    """Largest t whose endpoint distance 1 - Psi(t) is still >= UFL."""
    with mpmath.workdps(_WORK_DPS):
        ufl = mpmath.ldexp(1, model.min_exponent)
        return float(mpmath.asinh(mpmath.log(2 / ufl - 1) / mpmath.pi))


@functools.lru_cache(maxsize=None)
def intrinsic_weight_limit(model: FloatModel, dimension: int) -> float:
    """Largest t with Psi'(t)**P >= UFL, P = max(1, dimension - 1).

    Psi' is strictly decreasing on [1, inf), so plain bisection on the
    bracket [1, 60] is safe; the lower end is returned so the condition holds.
    """
    power = weight_power(dimension)
    with mpmath.workdps(_WORK_DPS):
        log_ufl = model.min_exponent * mpmath.log(2)
        lo, hi = (mpmath.mpf(v) for v in _BISECT_BRACKET)
        while hi - lo > _BISECT_TOL:
            mid = (lo + hi) / 2
            if power * _log_psi_prime(mid) >= log_ufl:
                lo = mid
            else:
                hi = mid
        return float(lo)


def window_limits(model: FloatModel, dimension: int) -> WindowLimits:
    t_x = intrinsic_abscissa_limit(model)
    t_w = intrinsic_weight_limit(model, dimension)
    return WindowLimits(
        t_max_x=t_x,
        t_max_w=t_w,
        t_max_xw=min(t_x, t_w),
        dimension=dimension,
        weight_power=weight_power(dimension),
    )
