"""The lower-tail constant C0 = inf_{0<x<1/2} 2 / (x (1-x) log(1/x)).

The infimum is attained at the maximiser x0 of ``x (1-x) log(1/x)`` on
``(0, 1/2)``, found here by golden-section search.
"""
import math
from dataclasses import dataclass
from functools import lru_cache

from ._validate import DomainError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

SEARCH_LO = 1e-6
SEARCH_HI = 0.5 - 1e-6
DEFAULT_TOLERANCE = 1e-12
MAX_ITERATIONS = 500

#: exponent constant of the earlier lower-tail bound
LEGACY_LOWER_CONSTANT = math.e / 2.0
#: 4 * lim_{q -> 1/2+} log(q/(1-q)) / ((2q-1) log(1/q))
EIGHT_OVER_LN2 = 8.0 / math.log(2.0)


class ConvergenceError(RuntimeError):
    pass


def f_objective(x):
    """``x (1 - x) log(1/x)`` on ``(0, 1)``."""
    if not (0.0 < x < 1.0) or math.isnan(x):
        raise DomainError(f"x must lie in (0, 1), got {x!r}")
    return x * (1.0 - x) * -math.log(x)


def golden_section_max(f, lo, hi, tol=DEFAULT_TOLERANCE, max_iter=MAX_ITERATIONS):
    """Maximise a unimodal ``f`` on ``[lo, hi]``.

    Returns ``(x_best, f_best, iterations)`` where ``x_best`` is the best probe
    evaluated.  Raises ConvergenceError if the bracket is still wider than
    ``tol`` after ``max_iter`` iterations.
    """
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    best_x, best_f = (x1, f1) if f1 >= f2 else (x2, f2)
    it = 0
    while b - a > tol:
        if it >= max_iter:
            raise ConvergenceError(f"golden-section bracket {b - a:.3g} > {tol:.3g} after {it} iterations")
        it += 1
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
            if f1 > best_f:
                best_x, best_f = x1, f1
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
            if f2 > best_f:
                best_x, best_f = x2, f2
    return best_x, best_f, it


@dataclass(frozen=True)
class ExtremalResult:
    x0: float
    f_at_x0: float
    c0: float
    iterations: int
    tolerance: float

    @property
    def c0_over_4(self):
        return self.c0 / 4.0


@lru_cache(maxsize=None)
def find_x0(tolerance=DEFAULT_TOLERANCE):
    """Locate x0 and C0 = 2 / f(x0)."""
    if not tolerance > 0:
        raise DomainError("tolerance must be positive")
    x0, fx0, it = golden_section_max(f_objective, SEARCH_LO, SEARCH_HI, tolerance)
    return ExtremalResult(x0=x0, f_at_x0=fx0, c0=2.0 / fx0, iterations=it, tolerance=tolerance)


def compute_c0(tolerance=DEFAULT_TOLERANCE):
    return find_x0(tolerance).c0
