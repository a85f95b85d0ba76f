"""Argument checks shared by the numerical modules."""
import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


def as_float(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return arr


def check_prob(p, name="p", *, lo=0.0, hi=1.0, open_lo=False, open_hi=False):
    arr = as_float(p, name)
    bad = (arr < lo) | (arr > hi)
    if open_lo:
        bad |= arr == lo
    if open_hi:
        bad |= arr == hi
    if np.any(bad):
        lb = "(" if open_lo else "["
        rb = ")" if open_hi else "]"
        raise DomainError(f"{name} must lie in {lb}{lo}, {hi}{rb}, got {p!r}")
    return arr


def check_positive_int(n, name="n"):
    if isinstance(n, (bool, np.bool_)) or int(n) != n or n < 1:
        raise DomainError(f"{name} must be a positive integer, got {n!r}")
    return int(n)


def scalar_or_array(arr):
    """Return a Python float for 0-d results, the array otherwise."""
    arr = np.asarray(arr)
    return float(arr) if arr.ndim == 0 else arr
