"""Abscissa spacing rules: optimal (Lambert W based) and maximal."""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass

from .errors import NoConvergence

EPS = sys.float_info.epsilon
DEFAULT_STRIP_WIDTH = math.pi / 2

_MAX_HALLEY_ITERATIONS = 50
_MAX_ORDER_CAP = 1 << 40


class SpacingKind(str, enum.Enum):
    OPTIMAL = "optimal"
    MAXIMAL = "maximal"


@dataclass(frozen=True)
class SpacingStrategy:
    kind: SpacingKind = SpacingKind.MAXIMAL
    strip_width_d: float = DEFAULT_STRIP_WIDTH

    def __post_init__(self):
        object.__setattr__(self, "kind", SpacingKind(self.kind))
        if not 0 < self.strip_width_d <= DEFAULT_STRIP_WIDTH:
            raise ValueError(f"strip width d must lie in (0, pi/2], got {self.strip_width_d}")

    @classmethod
    def optimal(cls, d: float = DEFAULT_STRIP_WIDTH) -> "SpacingStrategy":
        return cls(SpacingKind.OPTIMAL, d)

    @classmethod
    def maximal(cls) -> "SpacingStrategy":
        return cls(SpacingKind.MAXIMAL)

    @property
    def is_optimal(self) -> bool:
        return self.kind is SpacingKind.OPTIMAL

    def spacing(self, n: int, t_max: float) -> float:
        if self.is_optimal:
            return h_optimal(n, self.strip_width_d)
        return h_maximal(n, t_max)


def _initial_guess(z: float) -> float:
    if z < 1:
        return z
    if z >= math.e:
        lz = math.log(z)
        return lz - math.log(lz)
    # both neighbouring guesses equal 1 at the ends of [1, e)
    return 1.0


def lambert_w0(z: float) -> float:
    """Principal branch W0(z) for z >= 0 by Halley iteration.

    Stops when the step no longer changes w, then keeps whichever of the
    final iterate and its float neighbours has the smallest residual.
    """
    if z < 0 or math.isnan(z):
        raise ValueError(f"lambert_w0 is defined here for z >= 0 only, got {z}")
    if z == 0:
        return 0.0
    if math.isinf(z):
        return math.inf
    w = _initial_guess(z)
    for _ in range(_MAX_HALLEY_ITERATIONS):
        ew = math.exp(w)
        f = w * ew - z
        fp = ew * (w + 1)
        step = f / (fp - (w + 2) * f / (2 * w + 2))
        w_next = w - step
        if w_next == w or abs(step) <= 2 * EPS * abs(w):
            w = w_next
            break
        w = w_next
    else:
        raise NoConvergence(f"Halley iteration for W0({z!r}) did not converge")
    return min(
        (w, math.nextafter(w, -math.inf), math.nextafter(w, math.inf)),
        key=lambda c: abs(c * math.exp(c) - z),
    )


def h_optimal(n: int, d: float = DEFAULT_STRIP_WIDTH) -> float:
    """(2/N) W0(2 d N) with N = 2n + 1."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if not d > 0:
        raise ValueError(f"strip width must be positive, got {d}")
    big_n = 2 * n + 1
    return 2.0 / big_n * lambert_w0(2.0 * d * big_n)


def h_maximal(n: int, t_max):
    """t_max / n; keeps the type of ``t_max`` so model-precision windows stay exact."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if not t_max > 0:
        raise ValueError(f"window limit must be positive, got {t_max}")
    return t_max / n


def optimal_window(n: int, d: float = DEFAULT_STRIP_WIDTH) -> float:
    return n * h_optimal(n, d)


def max_order(t_max: float, d: float = DEFAULT_STRIP_WIDTH) -> int:
    """Largest n with n * h_optimal(n, d) <= t_max (0 if even n = 1 exceeds it)."""
    if not t_max > 0:
        raise ValueError(f"window limit must be positive, got {t_max}")

    def fits(n: int) -> bool:
        return optimal_window(n, d) <= t_max

    if not fits(1):
        return 0
    lo, hi = 1, 2
    while fits(hi):
        lo, hi = hi, 2 * hi
        if hi > _MAX_ORDER_CAP:
            return _MAX_ORDER_CAP
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if fits(mid):
            lo = mid
        else:
            hi = mid
    return lo
