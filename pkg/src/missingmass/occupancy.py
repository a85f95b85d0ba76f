"""Occupancy-indicator MGF bounds and the resulting missing-mass tail bounds.

For a symbol of mass ``p`` and sample size ``n`` the indicator "symbol not
seen" is Bernoulli(q) with ``q = (1-p)^n``.  Its centred, ``p``-weighted MGF
satisfies

    (a)  q e^{lam(p - pq)} + (1-q) e^{-lam pq} <= exp(p lam^2 / 4n)
    (b)  q e^{lam(pq - p)} + (1-q) e^{lam pq}  <= exp(p lam^2 / (C0 n))

for ``lam >= 0``.  Multiplying over symbols and optimising the Chernoff
parameter gives ``P(U > E U + eps) <= e^{-n eps^2}`` and
``P(U < E U - eps) <= e^{-C0 n eps^2 / 4}``.
"""
import math
from dataclasses import dataclass

import numpy as np

from ._validate import DomainError, as_float, check_positive_int, check_prob, scalar_or_array
from .constants import EIGHT_OVER_LN2, LEGACY_LOWER_CONSTANT, compute_c0
from .inequalities import DEFAULT_TOLERANCE, centered_bernoulli_mgf_log, ks_coefficient, logit_grid
from .reports import GapReport


def survival_prob(p, n):
    """``(1-p)^n`` via ``exp(n log1p(-p))``; exactly 1 at ``p = 0`` and 0 at ``p = 1``."""
    n = check_positive_int(n)
    p = check_prob(p)
    with np.errstate(divide="ignore"):
        q = np.exp(n * np.log1p(-p))
    return scalar_or_array(q)


@dataclass(frozen=True)
class OccupancyPoint:
    n: int
    p: float
    lam: float

    def __post_init__(self):
        check_positive_int(self.n)
        check_prob(self.p)
        _check_lambda(self.lam)

    @property
    def q(self):
        return survival_prob(self.p, self.n)


def _check_lambda(lam):
    lam = as_float(lam, "lambda")
    if np.any(lam < 0):
        raise DomainError("lambda must be nonnegative")
    return lam


def lamp_gap_a(n, p, lam):
    """``p lam^2 / 4n - log[q e^{lam(p - pq)} + (1-q) e^{-lam pq}]``.

    The log term is the centred Bernoulli(q) log-MGF at ``t = lam p``.
    """
    n = check_positive_int(n)
    p = check_prob(p)
    lam = _check_lambda(lam)
    q = survival_prob(p, n)
    return scalar_or_array(p * lam**2 / (4.0 * n) - centered_bernoulli_mgf_log(q, lam * p))


def lamp_gap_b(n, p, lam, c0=None):
    """``p lam^2 / (C0 n) - log[q e^{lam(pq - p)} + (1-q) e^{lam pq}]``."""
    n = check_positive_int(n)
    p = check_prob(p)
    lam = _check_lambda(lam)
    c0 = compute_c0() if c0 is None else c0
    q = survival_prob(p, n)
    return scalar_or_array(p * lam**2 / (c0 * n) - centered_bernoulli_mgf_log(q, -lam * p))


# --- tail bounds ----------------------------------------------------------

def _check_tail_args(n, epsilon):
    n = check_positive_int(n)
    eps = float(epsilon)
    if not (eps > 0) or not math.isfinite(eps):
        raise DomainError(f"epsilon must be positive and finite, got {epsilon!r}")
    return n, eps


def chernoff_exponent(lam, n, epsilon, variance_constant):
    """``lam^2 / (K n) - lam eps``, the log Chernoff bound for proxy constant ``K``."""
    return lam**2 / (variance_constant * n) - lam * epsilon


def upper_tail_bound(n, epsilon):
    """``e^{-n eps^2}``, checked against the Chernoff expression at ``lam = 2 n eps``."""
    n, eps = _check_tail_args(n, epsilon)
    bound = math.exp(-n * eps * eps)
    at_opt = math.exp(chernoff_exponent(2.0 * n * eps, n, eps, 4.0))
    if not math.isclose(at_opt, bound, rel_tol=1e-12, abs_tol=1e-300):
        raise ArithmeticError(f"Chernoff value {at_opt!r} disagrees with e^(-n eps^2) = {bound!r}")
    return bound


def lower_tail_bound(n, epsilon, c0=None):
    """``e^{-C0 n eps^2 / 4}``."""
    n, eps = _check_tail_args(n, epsilon)
    c0 = compute_c0() if c0 is None else c0
    return math.exp(-c0 * n * eps * eps / 4.0)


def legacy_lower_tail_bound(n, epsilon):
    """``e^{-(e/2) n eps^2}``, the earlier lower-tail bound."""
    n, eps = _check_tail_args(n, epsilon)
    return math.exp(-LEGACY_LOWER_CONSTANT * n * eps * eps)


@dataclass(frozen=True)
class TailBound:
    n: int
    epsilon: float
    upper: float
    lower: float
    legacy_lower: float
    lambda_upper: float
    lambda_lower: float

    def row(self):
        return [self.n, self.epsilon, self.upper, self.lower, self.legacy_lower,
                self.lambda_upper, self.lambda_lower]


TAIL_BOUND_HEADER = ["n", "epsilon", "upper", "lower", "legacy_lower", "lambda_upper", "lambda_lower"]


def tail_bound(n, epsilon, c0=None):
    n, eps = _check_tail_args(n, epsilon)
    c0 = compute_c0() if c0 is None else c0
    return TailBound(
        n=n,
        epsilon=eps,
        upper=upper_tail_bound(n, eps),
        lower=lower_tail_bound(n, eps, c0),
        legacy_lower=legacy_lower_tail_bound(n, eps),
        lambda_upper=2.0 * n * eps,
        lambda_lower=c0 * n * eps / 2.0,
    )


# --- facts used inside the proof of the occupancy bounds ------------------

def ratio_L(q):
    """``(1 - 2q) log(1/q) / log((1-q)/q)``; at most 1 on ``(0, 1)``."""
    q = check_prob(q, open_lo=True, open_hi=True)
    return scalar_or_array(4.0 * np.asarray(ks_coefficient(q)) * -np.log(q))


def p_factor(p):
    """``log(1/(1-p)) / p``; at least 1 on ``(0, 1)``."""
    p = check_prob(p, open_lo=True, open_hi=True)
    return scalar_or_array(-np.log1p(-p) / p)


def monotone_factor(q):
    """``log(q/(1-q)) / ((2q - 1) log(1/q))``; nondecreasing on ``(1/2, 1)``, tends to ``2/ln 2`` at 1/2."""
    q = check_prob(q, open_lo=True, open_hi=True)
    return scalar_or_array(1.0 / (4.0 * np.asarray(ks_coefficient(q)) * -np.log(q)))


def concavity_f(q):
    """``log((1-q)/q) - (1 - 2q) log(1/q)``; nonnegative on ``(0, 1/2)``."""
    q = check_prob(q, open_lo=True, open_hi=True)
    return scalar_or_array(np.log1p(-q) - np.log(q) + (1.0 - 2.0 * q) * np.log(q))


# --- grid verification ----------------------------------------------------

DEFAULT_N_VALUES = tuple(2**k for k in range(11))
DEFAULT_LAMBDA_POINTS = 400
LAMBDA_SPAN = 10.0


def verify_lamp(n_values=DEFAULT_N_VALUES, p_grid=None, lambda_points=DEFAULT_LAMBDA_POINTS,
                tol=DEFAULT_TOLERANCE, c0=None):
    """Both occupancy MGF bounds on an ``(n, p, lam)`` grid, ``lam in [0, 10 n]``."""
    p_grid = logit_grid() if p_grid is None else np.asarray(p_grid, dtype=float)
    c0 = compute_c0() if c0 is None else c0
    cols = {k: [] for k in ("n", "p", "lam", "lhs_a", "rhs_a", "lhs_b", "rhs_b")}
    for n in n_values:
        lam = np.linspace(0.0, LAMBDA_SPAN * n, lambda_points)
        P, L = np.meshgrid(p_grid, lam, indexing="ij")
        q = survival_prob(P, n)
        cols["n"].append(np.full(P.size, float(n)))
        cols["p"].append(P.ravel())
        cols["lam"].append(L.ravel())
        cols["lhs_a"].append(np.ravel(centered_bernoulli_mgf_log(q, L * P)))
        cols["rhs_a"].append((P * L**2 / (4.0 * n)).ravel())
        cols["lhs_b"].append(np.ravel(centered_bernoulli_mgf_log(q, -L * P)))
        cols["rhs_b"].append((P * L**2 / (c0 * n)).ravel())
    c = {k: np.concatenate(v) for k, v in cols.items()}
    coords = {"n": c["n"], "p": c["p"], "lambda": c["lam"]}
    return (GapReport("lamp.a", coords, c["lhs_a"], c["rhs_a"], tol),
            GapReport("lamp.b", coords, c["lhs_b"], c["rhs_b"], tol))


def verify_internal_facts(num=20001, tol=DEFAULT_TOLERANCE, c0=None):
    """The four auxiliary inequalities from the proof of the occupancy bounds."""
    c0 = compute_c0() if c0 is None else c0
    q_all = logit_grid(num)
    reports = [GapReport("internal.L_le_1", {"q": q_all}, ratio_L(q_all), np.ones(num), tol),
               GapReport("internal.p_factor_ge_1", {"p": q_all}, np.ones(num), p_factor(q_all), tol)]

    q_hi = logit_grid(num, lo=0.5 + 1e-9, hi=1.0 - 1e-9)
    m = monotone_factor(q_hi)
    # consecutive pairs: m(q_i) <= m(q_{i+1}) up to relative rounding
    reports.append(GapReport("internal.monotone_factor", {"q": q_hi[:-1]}, m[:-1],
                             m[1:] + 1e-12 * np.abs(m[1:]), 0.0))
    limit = 4.0 * monotone_factor(0.5 + 1e-9)
    reports.append(GapReport("internal.limit_8_over_ln2", {"q": np.array([0.5])},
                             np.array([limit]), np.array([EIGHT_OVER_LN2]), 1e-6, two_sided=True))
    reports.append(GapReport("internal.limit_exceeds_c0", {"q": np.array([0.5])},
                             np.array([c0]), np.array([limit]), 0.0))

    q_lo = logit_grid(num, lo=1e-9, hi=0.5 - 1e-9)
    reports.append(GapReport("internal.f_nonneg", {"q": q_lo}, np.zeros(num), concavity_f(q_lo), tol))
    return reports
