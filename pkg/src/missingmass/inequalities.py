"""MGF inequalities for a centered Bernoulli variable.

For ``X ~ Bernoulli(p) - p`` the log-MGF is

    log f(t) = log[(1 - p) e^{-tp} + p e^{t(1-p)}].

Hoeffding bounds it by ``t^2/8``; the Kearns-Saul coefficient

    c(p) = (1 - 2p) / (4 log((1 - p)/p))

gives the distribution-sensitive bound ``c(p) t^2``, which is attained at
``t* = 2 log((1 - p)/p)``.  On ``p >= 1/2, t >= 0`` the coefficient can be
lowered further to ``p(1 - p)/2``.

All functions broadcast over numpy arrays and return a Python float for
scalar input.  Checks are done in log domain.
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from ._io import render_csv
from ._validate import DomainError, as_float, check_prob, scalar_or_array
from .reports import GapReport

DEFAULT_TOLERANCE = 1e-9

# below this |p - 1/2| the coefficient uses its second-order series
KS_SERIES_RADIUS = 1e-4
# below this |t| the exponent g uses its cumulant expansion
G_SERIES_RADIUS = 1e-5
# |g'| at or below this counts as zero in the sign scan
G_PRIME_ZERO_TOL = 1e-7
G_PRIME_STEP = 1e-4


@dataclass(frozen=True)
class BernoulliParam:
    p: float

    def __post_init__(self):
        check_prob(self.p)


def centered_bernoulli_mgf_log(p, t):
    """``log[(1-p) e^{-tp} + p e^{t(1-p)}]``, finite for all finite ``t``.

    The larger exponent is factored out and the remainder goes through
    ``log1p``; when the remainder is close to -1 (``p`` near the far end)
    the two-term ``logaddexp`` form is used instead.
    """
    p = check_prob(p)
    t = as_float(t, "t")
    p, t = np.broadcast_arrays(p, t)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        neg = t <= 0
        # t <= 0: f = e^{-tp} (1 + p (e^t - 1));  t > 0: f = e^{t(1-p)} (1 + (1-p)(e^{-t} - 1))
        u = np.where(neg, p * np.expm1(np.minimum(t, 0.0)), (1.0 - p) * np.expm1(-np.maximum(t, 0.0)))
        shift = np.where(neg, -t * p, t * (1.0 - p))
        near = shift + np.log1p(u)
        far = np.logaddexp(np.log1p(-p) - t * p, np.log(p) + t * (1.0 - p))
        out = np.where(u > -0.5, near, far)
    return scalar_or_array(out)


def hoeffding_log_bound(t, a, b):
    """Log of Hoeffding's MGF bound ``(b - a)^2 t^2 / 8`` for a ``[a, b]``-valued variable."""
    t = as_float(t, "t")
    a = as_float(a, "a")
    b = as_float(b, "b")
    if np.any(a > b):
        raise DomainError(f"need a <= b, got a={a!r}, b={b!r}")
    return scalar_or_array((b - a) ** 2 * t**2 / 8.0)


def ks_coefficient(p):
    """Kearns-Saul coefficient ``(1 - 2p) / (4 log((1-p)/p))``.

    Evaluated as ``d / (4 artanh(2d))`` with ``d = p - 1/2``, which is the same
    expression without the ``0/0`` at ``p = 1/2``; the limits ``c(0) = c(1) = 0``
    and ``c(1/2) = 1/8`` come out directly.
    """
    p = check_prob(p)
    d = p - 0.5
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = d / (4.0 * np.arctanh(2.0 * d))
    series = 0.125 - d * d / 6.0
    out = np.where(np.abs(d) < KS_SERIES_RADIUS, series, closed)
    return scalar_or_array(out)


def ks_gap(p, t):
    """``c(p) t^2 - log f(t)``; nonnegative by the Kearns-Saul inequality."""
    p = check_prob(p)
    t = as_float(t, "t")
    return scalar_or_array(ks_coefficient(p) * t**2 - centered_bernoulli_mgf_log(p, t))


def refined_gap(p, t):
    """``p(1-p) t^2 / 2 - log f(t)`` for ``p in [1/2, 1]``, ``t >= 0``."""
    p = check_prob(p, lo=0.5)
    t = as_float(t, "t")
    if np.any(t < 0):
        raise DomainError("refined bound only holds for t >= 0")
    return scalar_or_array(p * (1.0 - p) * t**2 / 2.0 - centered_bernoulli_mgf_log(p, t))


def g_exponent(p, t):
    """``g(t) = log f(t) / t^2``, with the cumulant expansion near ``t = 0``."""
    p = check_prob(p, open_lo=True, open_hi=True)
    t = as_float(t, "t")
    p, t = np.broadcast_arrays(p, t)
    k2 = p * (1.0 - p)
    k3 = k2 * (1.0 - 2.0 * p)
    small = np.abs(t) < G_SERIES_RADIUS
    safe_t = np.where(small, 1.0, t)
    direct = centered_bernoulli_mgf_log(p, safe_t) / safe_t**2
    out = np.where(small, k2 / 2.0 + k3 * t / 6.0, direct)
    return scalar_or_array(out)


def _log_odds(p):
    """``log((1-p)/p)`` without forming the quotient."""
    return np.log1p(-p) - np.log(p)


def t_star(p):
    """Critical point ``2 log((1-p)/p)`` where the Kearns-Saul bound is attained."""
    p = check_prob(p, open_lo=True, open_hi=True)
    return scalar_or_array(2.0 * _log_odds(p))


def h_s_value(p, s):
    """Kearns-Saul inequality after ``t = 2 s log((1-p)/p)`` and multiplying by ``e^{tp}``.

    ``s (s + 2p(1-s)) log((1-p)/p) - log(1 - p + p ((1-p)/p)^{2s})``
    """
    p = check_prob(p, open_lo=True, open_hi=True)
    s = as_float(s, "s")
    p, s = np.broadcast_arrays(p, s)
    lo = _log_odds(p)
    x = 2.0 * s * lo
    # log(1 - p + p e^x) = log1p(p expm1(x)) = x + log1p((1-p) expm1(-x))
    neg = x <= 0
    u = np.where(neg, p * np.expm1(np.minimum(x, 0.0)), (1.0 - p) * np.expm1(-np.maximum(x, 0.0)))
    near = np.where(neg, 0.0, x) + np.log1p(u)
    with np.errstate(over="ignore"):
        far = np.logaddexp(np.log1p(-p), np.log(p) + x)
    tail = np.where(u > -0.5, near, far)
    return scalar_or_array(s * (s + 2.0 * p * (1.0 - s)) * lo - tail)


def h_s_second_derivative(p, s):
    """Closed-form ``d^2 h_s / dp^2``.

    ``[((mu-1)p^2 - s + p(1 - mu + s + mu s)) / (p(1-p)(1 + (mu-1)p))]^2``
    with ``mu = ((1-p)/p)^{2s}``.  Where ``mu`` overflows the ratio is taken
    in the equivalent normalised form ``(w(2s-1) + p - s) / (p(1-p))`` with
    ``w = mu p / (1 - p + mu p)``.
    """
    p = check_prob(p, open_lo=True, open_hi=True)
    s = as_float(s, "s")
    p, s = np.broadcast_arrays(p, s)
    log_mu = 2.0 * s * _log_odds(p)
    with np.errstate(over="ignore", invalid="ignore"):
        mu = np.exp(log_mu)
        denom = p * (1.0 - p) * (1.0 + (mu - 1.0) * p)
        numer = (mu - 1.0) * p**2 - s + p * (1.0 - mu + s + mu * s)
        ratio = numer / denom
    overflow = ~np.isfinite(mu) | ~np.isfinite(ratio)
    if np.any(~overflow & ~(denom > 0)):
        raise ArithmeticError("non-positive denominator 1 + (mu - 1) p in h_s''")
    if np.any(overflow):
        w = expit(np.log(p) - np.log1p(-p) + log_mu)
        ratio = np.where(overflow, (w * (2.0 * s - 1.0) + p - s) / (p * (1.0 - p)), ratio)
    return scalar_or_array(ratio**2)


# five-point central stencil for the second derivative
_STENCIL = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


def h_s_second_derivative_fd(p, s, step=1e-4):
    """Central finite-difference estimate of ``d^2 h_s / dp^2`` and its rounding floor.

    Returns ``(estimate, floor)``; ``floor`` bounds the cancellation error of
    the stencil from the magnitude of the intermediate terms of ``h_s``.
    """
    p = np.asarray(p, dtype=float)
    s = np.asarray(s, dtype=float)
    offsets = np.arange(-2, 3) * step
    vals = [h_s_value(p + o, s) for o in offsets]
    est = sum(c * v for c, v in zip(_STENCIL, vals)) / step**2
    lo = _log_odds(p)
    scale = (np.abs(s * (s + 2.0 * p * (1.0 - s)) * lo) + np.abs(np.log1p(-p))
             + np.abs(np.log(p) + 2.0 * s * lo))
    floor = np.abs(_STENCIL).sum() * 4.0 * np.finfo(float).eps * scale / step**2
    return scalar_or_array(est), scalar_or_array(floor)


def g_prime(p, t, step=G_PRIME_STEP):
    """Central-difference estimate of ``g'(t)``."""
    t = np.asarray(t, dtype=float)
    return scalar_or_array((np.asarray(g_exponent(p, t + step)) - np.asarray(g_exponent(p, t - step))) / (2.0 * step))


@dataclass
class SignScanReport:
    """Numerical evidence on the sign pattern of ``g'`` around ``t*``.

    The expected pattern is ``g' > 0`` left of ``t*``, ``g' = 0`` at ``t*`` and
    ``g' < 0`` to the right.  This is a grid observation only and is not
    a proof of that pattern.
    """

    p: float
    t_grid: np.ndarray
    g_prime: np.ndarray
    derivative_signs: np.ndarray
    t_star: float
    g_at_t_star: float
    g_prime_at_t_star: float
    sign_at_t_star: int
    violations: list
    zero_tolerance: float
    label: str = "numerical evidence only, not a proof"

    @property
    def passed(self):
        return not self.violations

    def to_csv(self):
        sym = {1: "+", 0: "0", -1: "-"}
        rows = [(self.p, t, sym[int(s)]) for t, s in zip(self.t_grid, self.derivative_signs)]
        return render_csv(["p", "t", "sign"], rows, comment=self.label)


def _classify(values, tol):
    return np.where(np.abs(values) <= tol, 0, np.sign(values)).astype(int)


def scan_g_prime_signs(p, t_grid, *, step=G_PRIME_STEP, zero_tol=G_PRIME_ZERO_TOL, exclude_radius=5e-3):
    """Classify the sign of a central-difference ``g'`` on ``t_grid``.

    Grid points within ``exclude_radius`` of 0 are dropped; there ``g`` is
    defined by its limit.  A violation is a nonzero sign on the wrong side of
    ``t*`` (or a nonzero sign at ``t*`` itself); values inside the zero band
    never count as violations.
    """
    check_prob(p, open_lo=True, open_hi=True)
    p = float(p)
    t_grid = as_float(t_grid, "t_grid").ravel()
    if np.any(np.diff(t_grid) < 0):
        raise DomainError("t_grid must be sorted")
    t_grid = t_grid[np.abs(t_grid) >= exclude_radius]
    ts = t_star(p)
    gp = np.asarray(g_prime(p, t_grid, step))
    signs = _classify(gp, zero_tol)
    wrong = ((t_grid < ts) & (signs < 0)) | ((t_grid > ts) & (signs > 0)) | ((t_grid == ts) & (signs != 0))
    violations = [(float(t), float(v)) for t, v in zip(t_grid[wrong], gp[wrong])]
    gp_star = float(g_prime(p, ts, step))
    return SignScanReport(
        p=p,
        t_grid=t_grid,
        g_prime=gp,
        derivative_signs=signs,
        t_star=ts,
        g_at_t_star=float(g_exponent(p, ts)),
        g_prime_at_t_star=gp_star,
        sign_at_t_star=int(_classify(np.array(gp_star), zero_tol)),
        violations=violations,
        zero_tolerance=zero_tol,
    )


# --- grids ----------------------------------------------------------------

def logit_grid(num=2001, margin=1e-6, lo=None, hi=None):
    """Probabilities evenly spaced in log-odds between ``margin`` and ``1 - margin``."""
    lo = margin if lo is None else lo
    hi = 1.0 - margin if hi is None else hi
    x = np.linspace(np.log(lo / (1 - lo)), np.log(hi / (1 - hi)), num)
    return expit(x)


def linear_grid(lo, hi, num):
    return np.linspace(lo, hi, num)


def default_p_grid(num=2001):
    return logit_grid(num)


def default_t_grid(num=1201, limit=60.0):
    return np.linspace(-limit, limit, num)


# --- grid verification ----------------------------------------------------

def verify_ks(p_grid, t_grid, tol=DEFAULT_TOLERANCE):
    """``log f(t) <= c(p) t^2`` over the product grid."""
    P, T = np.meshgrid(p_grid, t_grid, indexing="ij")
    lhs = centered_bernoulli_mgf_log(P, T)
    rhs = ks_coefficient(P) * T**2
    return GapReport("ks.grid", {"p": P, "t": T}, lhs, rhs, tol)


def verify_ks_equality(p_grid, tol=DEFAULT_TOLERANCE):
    """Equality of both sides at ``t = t*(p)``."""
    p = np.asarray(p_grid, dtype=float)
    p = p[(p > 0) & (p < 1)]
    ts = t_star(p)
    lhs = centered_bernoulli_mgf_log(p, ts)
    rhs = ks_coefficient(p) * ts**2
    return GapReport("ks.equality_at_t_star", {"p": p, "t": ts}, lhs, rhs, tol, two_sided=True)


def verify_cosh(t_grid, tol=DEFAULT_TOLERANCE):
    """``log cosh t <= t^2 / 2``."""
    t = np.asarray(t_grid, dtype=float)
    lhs = np.logaddexp(t, -t) - np.log(2.0)
    return GapReport("ks.cosh", {"t": t}, lhs, t**2 / 2.0, tol)


def verify_coefficient(p_grid, tol=1e-12, band=1e-3):
    """``c(p) = c(1-p)`` and ``c(p) < 1/8`` away from ``p = 1/2``.

    Returns two reports: symmetry (equality) and the Hoeffding comparison with
    strict margin ``tol`` whenever ``|p - 1/2| > band``.
    """
    p = np.asarray(p_grid, dtype=float)
    c = ks_coefficient(p)
    sym = GapReport("ks.coefficient_symmetry", {"p": p}, c, ks_coefficient(1.0 - p), tol, two_sided=True)
    off = np.abs(p - 0.5) > band
    po = p[off]
    strict = GapReport("ks.coefficient_below_hoeffding", {"p": po}, ks_coefficient(po) + tol,
                       np.full(po.shape, 0.125), 0.0)
    return sym, strict


def verify_refined(p_grid, t_grid, tol=DEFAULT_TOLERANCE):
    """``log f(t) <= p(1-p) t^2 / 2`` on ``p in [1/2, 1]``, ``t >= 0``."""
    P, T = np.meshgrid(p_grid, t_grid, indexing="ij")
    lhs = centered_bernoulli_mgf_log(P, T)
    rhs = P * (1.0 - P) * T**2 / 2.0
    return GapReport("refine.grid", {"p": P, "t": T}, lhs, rhs, tol)


def verify_majorization(p_grid, tol=DEFAULT_TOLERANCE):
    """``p(1-p)/2 <= c(p)`` on ``[1/2, 1]``."""
    p = np.asarray(p_grid, dtype=float)
    return GapReport("refine.majorization", {"p": p}, p * (1.0 - p) / 2.0, ks_coefficient(p), tol)


def verify_h_s(p_grid, s_grid, tol=DEFAULT_TOLERANCE):
    """``h_s(p) >= 0`` over the product grid."""
    P, S = np.meshgrid(p_grid, s_grid, indexing="ij")
    return GapReport("hs.grid", {"p": P, "s": S}, np.zeros(P.shape), h_s_value(P, S), tol)


def verify_h_s_roots(p_grid, s_grid, tol_half=1e-12, tol_roots=1e-10):
    """Zeros of ``h_s``: at ``p = 1/2`` for all ``s``, and at ``s = 0, 1`` for all ``p``."""
    s = np.asarray(s_grid, dtype=float)
    half = GapReport("hs.zero_at_half", {"s": s}, np.zeros(s.shape), h_s_value(0.5, s), tol_half, two_sided=True)
    p = np.asarray(p_grid, dtype=float)
    P, S = np.meshgrid(p, [0.0, 1.0], indexing="ij")
    roots = GapReport("hs.zero_at_s0_s1", {"p": P, "s": S}, np.zeros(P.shape), h_s_value(P, S),
                      tol_roots, two_sided=True)
    return half, roots


def verify_h_s_second_derivative(points=1000, seed=0, rtol=1e-4, step=1e-4,
                                 p_range=(0.01, 0.99), s_range=(-10.0, 10.0)):
    """Closed-form ``h_s''`` against central differences at random ``(p, s)``.

    Passes where ``|fd - exact| <= rtol |exact| + floor`` and ``exact >= 0``;
    the report's gap is the remaining slack of that comparison.
    """
    rng = np.random.default_rng(seed)
    p = rng.uniform(*p_range, size=points)
    s = rng.uniform(*s_range, size=points)
    exact = h_s_second_derivative(p, s)
    fd, floor = h_s_second_derivative_fd(p, s, step)
    err = np.abs(fd - exact)
    allowed = rtol * np.abs(exact) + floor
    fd_report = GapReport("hs.second_derivative_fd", {"p": p, "s": s}, err, allowed, 0.0)
    sign_report = GapReport("hs.second_derivative_nonneg", {"p": p, "s": s}, np.zeros(points), exact, 0.0)
    return fd_report, sign_report
