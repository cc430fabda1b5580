"""Exception hierarchy shared by the quadrature modules and the CLI."""

from __future__ import annotations


class DeqError(Exception):
    """Base class for every error raised by this package."""


class UnsupportedModel(DeqError):
    """The requested floating-point model has no native type on this platform."""


class WindowExceeded(DeqError, ValueError):
    """The transformed window n*h lies beyond the allowed window limit."""


class UnderflowDetected(DeqError, ArithmeticError):
    """A stored weight or endpoint distance fell below the underflow level."""


class OrderExceedsMax(DeqError, ValueError):
    """Optimal spacing was requested for an order above n_max."""

    def __init__(self, n: int, n_max: int, t_max: float):
        super().__init__(
            f"order n={n} exceeds the maximal optimal order n_max={n_max} "
            f"for window limit t_max={t_max:.6g}"
        )
        self.n = n
        self.n_max = n_max
        self.t_max = t_max


class DimensionMismatch(DeqError, ValueError):
    """Integrand arity differs from the number of integration domains."""


class EvaluationFailure(DeqError):
    """The integrand raised or produced a non-finite value."""


class NoConvergence(DeqError, RuntimeError):
    """An internal iteration (Lambert W, Legendre roots) did not converge."""


class NotConverged(DeqError):
    """Adaptive integration stopped before reaching the requested tolerance.

    The best available estimate is kept in ``result``.
    """

    def __init__(self, result, message: str | None = None):
        super().__init__(
            message
            or f"not converged at n={result.order}: "
            f"value={float(result.value)!r}, error estimate={float(result.error_estimate):.3e}"
        )
        self.result = result


class UnknownCase(DeqError, KeyError):
    """No benchmark case is registered under the given name."""
