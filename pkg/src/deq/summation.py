"""Deterministic compensated summation in an arbitrary numpy float dtype."""

from __future__ import annotations

import numpy as np


def two_sum(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Knuth's error-free transformation: a + b == s + e exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def canonical_order(values: np.ndarray) -> np.ndarray:
    """Terms sorted by increasing magnitude, ties broken by value.

    Depends only on the multiset of terms, so permuting the input (e.g.
    transposing a 2-D grid) cannot change the result of ``compensated_sum``.
    """
    v = np.sort(np.ravel(values))
    return v[np.argsort(np.abs(v), kind="stable")]


def compensated_sum(values) -> np.floating:
    """Cascaded pairwise summation with TwoSum error terms, in the input dtype.

    The error of every pairwise addition is kept and summed separately, which
    gives a result close to the correctly rounded sum; the order is fixed by
    ``canonical_order``.
    """
    v = canonical_order(np.asarray(values))
    dtype = v.dtype.type
    if v.size == 0:
        return dtype(0)
    errors = []
    while v.size > 1:
        if v.size % 2:
            v = np.append(v, dtype(0))
        s, e = two_sum(v[0::2], v[1::2])
        errors.append(e)
        v = s
    if not errors:
        return v[0]
    err = np.concatenate(errors)
    err_sum = np.sum(canonical_order(err), dtype=v.dtype)
    return v[0] + err_sum
