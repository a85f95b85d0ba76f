"""Named verification suites over the default grids."""
from dataclasses import dataclass

import numpy as np

from . import inequalities as ineq
from .occupancy import verify_internal_facts, verify_lamp
from .reports import format_where

SUITES = ("ks", "refine", "hs", "lamp", "internal", "gprime")

DEFAULT_GRID = {
    "p": 2001,        # logit-spaced probabilities
    "t": 1201,        # t in [-60, 60]
    "s": 401,         # s in [-10, 10]
    "lambda": 400,    # lambda in [0, 10 n]
    "nmax": 10,       # n = 1, 2, 4, ..., 2^nmax
    "internal": 20001,
    "points": 1000,   # random (p, s) for the h_s'' finite-difference check
}

GPRIME_P_VALUES = tuple(round(0.01 * i, 2) for i in range(1, 100))
GPRIME_T_GRID = np.round(np.arange(-1000, 1001) * 0.01, 10)
EVIDENCE_NOTE = "numerical evidence only, not a proof"


@dataclass
class CheckRow:
    """One summary line of a suite run."""

    name: str
    points: int
    violations: int
    worst: float
    where: str
    tolerance: float
    passed: bool
    note: str = ""

    def row(self):
        return [self.name, self.points, self.violations, self.worst, self.where,
                self.tolerance, self.passed, self.note]


def _from_report(report, note=""):
    return CheckRow(report.name, len(report), report.violations, report.min_gap,
                    format_where(report.argmin), report.tolerance, report.passed, note)


def ks_reports(grid, tol):
    p = ineq.default_p_grid(grid["p"])
    t = ineq.default_t_grid(grid["t"])
    sym, strict = ineq.verify_coefficient(p)
    return [ineq.verify_ks(np.r_[0.0, p, 1.0], t, tol), ineq.verify_ks_equality(p, tol), sym, strict,
            ineq.verify_cosh(t, tol)]


def refine_reports(grid, tol):
    p = np.r_[ineq.logit_grid((grid["p"] + 1) // 2, lo=0.5, hi=1 - 1e-6), 1.0]
    t = np.linspace(0.0, 60.0, (grid["t"] + 1) // 2)
    return [ineq.verify_refined(p, t, tol), ineq.verify_majorization(p, tol)]


def hs_reports(grid, tol, seed):
    p = ineq.default_p_grid(grid["p"])
    s = np.linspace(-10.0, 10.0, grid["s"])
    half, roots = ineq.verify_h_s_roots(p, s)
    fd, nonneg = ineq.verify_h_s_second_derivative(points=grid["points"], seed=seed)
    return [ineq.verify_h_s(p, s, tol), half, roots, fd, nonneg]


def lamp_reports(grid, tol):
    n_values = [2**i for i in range(grid["nmax"] + 1)]
    return list(verify_lamp(n_values, ineq.default_p_grid(grid["p"]), grid["lambda"], tol))


def gprime_check(p_values=GPRIME_P_VALUES, t_grid=GPRIME_T_GRID):
    """Sign scans of ``g'`` for each ``p``, folded into one summary row."""
    scans = [ineq.scan_g_prime_signs(p, t_grid) for p in p_values]
    violations = sum(len(s.violations) for s in scans)
    worst = max(scans, key=lambda s: abs(s.g_prime_at_t_star))
    points = sum(s.t_grid.size for s in scans)
    passed = violations == 0 and all(s.sign_at_t_star == 0 for s in scans)
    return CheckRow("gprime.sign_pattern", points, violations, abs(worst.g_prime_at_t_star),
                    format_where({"p": worst.p, "t": worst.t_star}), ineq.G_PRIME_ZERO_TOL, passed,
                    EVIDENCE_NOTE), scans


def run_suite(name, grid=None, tol=ineq.DEFAULT_TOLERANCE, seed=0):
    """Run one suite (or ``all``) and return its CheckRows in a fixed order."""
    g = dict(DEFAULT_GRID)
    g.update(grid or {})
    names = SUITES if name == "all" else (name,)
    rows = []
    for suite in names:
        if suite == "ks":
            rows += [_from_report(r) for r in ks_reports(g, tol)]
        elif suite == "refine":
            rows += [_from_report(r) for r in refine_reports(g, tol)]
        elif suite == "hs":
            rows += [_from_report(r) for r in hs_reports(g, tol, seed)]
        elif suite == "lamp":
            rows += [_from_report(r) for r in lamp_reports(g, tol)]
        elif suite == "internal":
            rows += [_from_report(r) for r in verify_internal_facts(g["internal"], tol)]
        elif suite == "gprime":
            rows.append(gprime_check()[0])
        else:
            raise ValueError(f"unknown suite {suite!r}")
    return rows
