"""Fuse per-reference partial decision scores into one value."""

from __future__ import annotations

import numpy as np

from .errors import InputError

FUSION_RULES = ("max", "mean", "median", "min")


def fuse(scores, rule: str) -> float:
    """Combine partial scores with max, mean, median, or min.

    Even-length median is the mean of the two central order statistics.
    """
    if rule not in FUSION_RULES:
        raise InputError(f"unknown fusion rule {rule!r}; expected one of {FUSION_RULES}")
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InputError("scores must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise InputError("scores contain non-finite values")
    if rule == "max":
        return float(np.max(arr))
    if rule == "min":
        return float(np.min(arr))
    # sort first so mean and median are exactly permutation invariant
    arr = np.sort(arr)
    if arr[0] == arr[-1]:  # constant input: exact idempotence
        return float(arr[0])
    if rule == "mean":
        return float(np.mean(arr))
    return float(np.median(arr))
