"""Tanh-sinh transform and underflow-safe node tables.

All node quantities are evaluated in the arithmetic of the target model
(``np.float32``, ``np.float64`` or ``np.longdouble``).  Near the window edge
the abscissae crowd against +-1, so the distance to the nearer endpoint is
computed directly instead of as ``1 - |x|``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import UnderflowDetected, WindowExceeded
from .float_model import FloatModel, get_model, weight_power

# enough digits for a correctly rounded long double
_HALF_PI = "1.57079632679489661923132169163975144"

TABLE_FORMAT_VERSION = 1


def _dtype_of(dtype) -> type[np.floating]:
    return np.dtype(dtype).type


def half_pi(dtype=np.float64) -> np.floating:
    return _dtype_of(dtype)(_HALF_PI)


def _arg(t, dtype):
    return np.asarray(t, dtype=dtype)


def _out(value):
    return value[()] if isinstance(value, np.ndarray) and value.ndim == 0 else value


def psi(t, dtype=np.float64):
    """Abscissa map tanh(pi/2 * sinh t)."""
    t = _arg(t, dtype)
    with np.errstate(over="ignore"):
        return _out(np.tanh(half_pi(dtype) * np.sinh(t)))


def psi_prime(t, dtype=np.float64):
    """Weight function pi/2 * cosh t / cosh^2(pi/2 * sinh t).

    Evaluated as ``(lam*cosh t * s) * s`` with ``s = 1/cosh(u)`` so that no
    intermediate leaves the normal range while the weight itself is normal;
    for very large |t| the result flushes to zero instead of producing inf/inf.
    """
    t = _arg(t, dtype)
    lam = half_pi(dtype)
    with np.errstate(over="ignore", invalid="ignore"):
        sech_u = 1 / np.cosh(lam * np.sinh(t))
        w = (lam * np.cosh(t) * sech_u) * sech_u
        # cosh t itself overflows only where sech u is already zero (inf * 0)
        return _out(np.where(sech_u == 0, t.dtype.type(0), w))


def endpoint_distance(t, dtype=np.float64):
    """Distance 1 - |Psi(t)| from the abscissa to the nearer endpoint.

    Uses exp(-|u|)/cosh(u), u = pi/2 sinh t, which keeps full relative
    accuracy down to the underflow level (no ``1 - x`` cancellation).
    """
    t = _arg(t, dtype)
    with np.errstate(over="ignore"):
        u = np.abs(half_pi(dtype) * np.sinh(t))
        return _out(np.exp(-u) / np.cosh(u))


def inverse_endpoint_distance(y: float) -> float:
    """Smallest t >= 0 with endpoint_distance(t) == y, for 0 < y <= 1 (double arithmetic)."""
    if not 0 < y <= 1:
        raise ValueError(f"endpoint distance must lie in (0, 1], got {y}")
    return math.asinh(math.log(2 / y - 1) / math.pi)


def window_for_log_distance(log_y: float) -> float:
    """As ``inverse_endpoint_distance`` but from ln(y), for y below the double range."""
    if not log_y <= 0:
        raise ValueError(f"ln(endpoint distance) must be <= 0, got {log_y}")
    if log_y > -30:
        return inverse_endpoint_distance(math.exp(log_y))
    # ln(2/y - 1) = ln 2 - ln y to double precision once y < 1e-13
    return math.asinh((math.log(2) - log_y) / math.pi)


class Side(str, enum.Enum):
    LEFT = "left"
    CENTER = "center"
    RIGHT = "right"


@dataclass(frozen=True)
class Node:
    index: int
    t: np.floating
    x: np.floating
    y: np.floating
    weight: np.floating
    side: Side


@dataclass(frozen=True, eq=False)
class NodeTable:
    """Nodes for i = -n..n; only i >= 0 is stored, the rest is mirrored.

    ``t``, ``x``, ``y`` and ``w`` are read-only arrays of length n+1 in the
    model's dtype, indexed by i = 0..n.
    """

    model: FloatModel
    order: int
    spacing: np.floating
    window: np.floating
    t: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    dimension_hint: int = 1

    def __len__(self) -> int:
        return 2 * self.order + 1

    def __iter__(self) -> Iterator[Node]:
        n = self.order
        for i in range(-n, n + 1):
            k = abs(i)
            side = Side.CENTER if i == 0 else (Side.LEFT if i < 0 else Side.RIGHT)
            sign = -1 if i < 0 else 1
            yield Node(
                index=i,
                t=sign * self.t[k],
                x=sign * self.x[k],
                y=self.y[k],
                weight=self.w[k],
                side=side,
            )

    def indices(self) -> np.ndarray:
        return np.arange(-self.order, self.order + 1)

    def full(self) -> dict[str, np.ndarray]:
        """Mirrored arrays of length 2n+1 ordered by index -n..n."""
        k = np.abs(self.indices())
        sign = np.sign(self.indices()).astype(self.t.dtype)
        sign[self.order] = 1
        return {
            "t": sign * self.t[k],
            "x": sign * self.x[k],
            "y": self.y[k].copy(),
            "w": self.w[k].copy(),
        }

    def to_json(self) -> str:
        return json.dumps(table_to_document(self))

    @classmethod
    def from_json(cls, text: str) -> "NodeTable":
        return table_from_document(json.loads(text))


def build_table(
    model: FloatModel,
    n: int,
    h: float,
    window_limit: float,
    dimension_hint: int = 1,
) -> NodeTable:
    """Node table with t_i = i*h, i = 0..n, evaluated in the model's arithmetic.

    Raises ``WindowExceeded`` if n*h > window_limit and ``UnderflowDetected``
    if a stored distance, or a weight raised to max(1, dimension_hint - 1),
    drops below the model's UFL.
    """
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if not h > 0:
        raise ValueError(f"spacing must be positive, got {h}")
    dtype = model.dtype
    h = dtype(h)
    window = dtype(n) * h
    # n*h may round a couple of ulps past a limit it meets exactly (h = limit/n)
    if window > dtype(window_limit) * (1 + 2 * model.machine_epsilon):
        raise WindowExceeded(
            f"window n*h = {float(window):.9g} exceeds the limit {float(window_limit):.9g} "
            f"(n={n}, h={float(h):.9g}, model={model})"
        )
    t = np.arange(n + 1, dtype=dtype) * h
    x = np.asarray(psi(t, dtype))
    y = np.asarray(endpoint_distance(t, dtype))
    w = np.asarray(psi_prime(t, dtype))
    x[0] = 0
    y[0] = 1

    ufl = model.ufl
    power = weight_power(dimension_hint)
    if y[-1] < ufl or not y.min() >= ufl:
        raise UnderflowDetected(f"endpoint distance {float(y.min()):.3e} below UFL of {model}")
    if not w.min() ** power >= ufl:
        raise UnderflowDetected(
            f"weight {float(w.min()):.3e} raised to {power} is below UFL of {model}"
        )
    for arr in (t, x, y, w):
        arr.setflags(write=False)
    return NodeTable(
        model=model,
        order=n,
        spacing=h,
        window=window,
        t=t,
        x=x,
        y=y,
        w=w,
        dimension_hint=dimension_hint,
    )


def _encode(values: np.ndarray) -> list:
    if values.dtype.itemsize <= 8:
        return [float(v) for v in values]
    return [np.format_float_scientific(v, unique=True) for v in values]


def _encode_scalar(value) -> float | str:
    return _encode(np.asarray([value]))[0]


def table_to_document(table: NodeTable) -> dict:
    """JSON-ready document of the stored (i >= 0) half of a table.

    Extended-precision values are written as decimal strings so that the
    round trip stays bit-exact.
    """
    return {
        "version": TABLE_FORMAT_VERSION,
        "model": table.model.name.value,
        "n": table.order,
        "h": _encode_scalar(table.spacing),
        "window": _encode_scalar(table.window),
        "dimension_hint": table.dimension_hint,
        "t": _encode(table.t),
        "x": _encode(table.x),
        "y": _encode(table.y),
        "w": _encode(table.w),
    }


def table_from_document(doc: dict) -> NodeTable:
    if doc.get("version") != TABLE_FORMAT_VERSION:
        raise ValueError(f"unsupported node table version {doc.get('version')!r}")
    model = get_model(doc["model"])
    dtype = model.dtype
    n = int(doc["n"])
    arrays = {}
    for key in ("t", "x", "y", "w"):
        arr = np.array([dtype(v) for v in doc[key]], dtype=dtype)
        if arr.shape != (n + 1,):
            raise ValueError(f"array {key!r} has {arr.size} entries, expected {n + 1}")
        arr.setflags(write=False)
        arrays[key] = arr
    return NodeTable(
        model=model,
        order=n,
        spacing=dtype(doc["h"]),
        window=dtype(doc["window"]),
        dimension_hint=int(doc.get("dimension_hint", 1)),
        **arrays,
    )
