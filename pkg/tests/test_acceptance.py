"""The twelve acceptance criteria, each at its stated tolerance and time budget."""
import math
import time

import numpy as np
import pytest

from missingmass import cli, inequalities as ineq, lab, oracle
from missingmass.constants import LEGACY_LOWER_CONSTANT, find_x0
from missingmass.occupancy import (legacy_lower_tail_bound, lower_tail_bound, verify_internal_facts,
                                   verify_lamp)
from missingmass.verification import GPRIME_P_VALUES, GPRIME_T_GRID, gprime_check

from conftest import SMALL_ZOO, build


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_01_constants():
    find_x0.cache_clear()
    with Timer() as t:
        res = find_x0(1e-12)
    assert abs(res.x0 - 0.2356) <= 5e-4
    assert abs(res.c0 - 7.6821) <= 5e-4
    assert abs(res.c0_over_4 - 1.9205) <= 2e-4
    assert abs(LEGACY_LOWER_CONSTANT - 1.3591) <= 1e-4
    assert res.c0_over_4 > LEGACY_LOWER_CONSTANT
    assert t.elapsed < 1.0


def test_criterion_02_kearns_saul():
    p = ineq.default_p_grid(2001)
    t = ineq.default_t_grid(1201)
    with Timer() as timer:
        grid = ineq.verify_ks(np.r_[0.0, p, 1.0], t, 1e-9)
        eq = ineq.verify_ks_equality(p, 1e-9)
    assert len(grid) == 2003 * 1201
    assert grid.passed, (grid.min_gap, grid.argmin)
    assert eq.passed, (eq.min_gap, eq.argmin)
    assert timer.elapsed < 30.0


def test_criterion_03_refinement():
    p = np.r_[ineq.logit_grid(1001, lo=0.5, hi=1 - 1e-6), 1.0]
    t = np.linspace(0.0, 60.0, 601)
    assert ineq.verify_refined(p, t, 1e-9).passed
    assert ineq.verify_majorization(p, 1e-9).passed


def test_criterion_04_h_s():
    p = ineq.default_p_grid(2001)
    s = np.linspace(-10.0, 10.0, 401)
    assert ineq.verify_h_s(p, s, 1e-9).passed
    half, roots = ineq.verify_h_s_roots(p, s, tol_half=1e-12)
    assert half.passed and roots.passed
    fd, nonneg = ineq.verify_h_s_second_derivative(points=1000, seed=0, rtol=1e-4)
    assert len(fd) == 1000
    assert fd.passed, (fd.min_gap, fd.argmin)
    assert nonneg.passed


def test_criterion_05_occupancy_bounds():
    a, b = verify_lamp(tol=1e-9)
    assert a.passed, (a.min_gap, a.argmin)
    assert b.passed, (b.min_gap, b.argmin)
    facts = verify_internal_facts(20001)
    assert len(facts) == 6
    for report in facts:
        assert report.passed, report.name


@pytest.mark.parametrize("name", sorted(SMALL_ZOO))
def test_criterion_06_oracle_exactness(name):
    d = build(SMALL_ZOO[name])
    lambdas = np.linspace(-20.0, 20.0, 401)
    for n in range(1, 9):
        dep = oracle.exact_missing_mass_distribution(d, n)
        ind = oracle.exact_independent_distribution(d, n)
        assert abs(dep.mean - lab.expected_missing_mass(d, n)) <= 1e-12
        assert np.all(oracle.mgf_domination_slack(dep, ind, lambdas) >= -1e-12)
        assert dep.variance <= ind.variance


def test_criterion_07_exact_tail_bounds():
    with Timer() as timer:
        c0 = find_x0().c0
        d = lab.make_distribution("uniform", k=3)
        n = 6
        law = oracle.exact_missing_mass_distribution(d, n)
        mean = lab.expected_missing_mass(d, n)
        for eps in np.round(np.arange(1, 11) * 0.05, 2):
            assert oracle.exact_tail(law, "above", mean + eps) <= math.exp(-n * eps**2)
            assert oracle.exact_tail(law, "below", mean - eps) <= math.exp(-c0 * n * eps**2 / 4)
    assert timer.elapsed < 5.0


def test_criterion_08_counterexample():
    d = lab.make_distribution("uniform", k=2)
    dep = oracle.exact_missing_mass_distribution(d, 2)
    ind = oracle.exact_independent_distribution(d, 2)
    assert oracle.exact_tail(dep, "above", 0.45) == 0.5
    assert oracle.exact_tail(ind, "above", 0.45) == 0.4375
    assert np.all(oracle.mgf_domination_slack(dep, ind, np.linspace(-20, 20, 401)) >= -1e-12)


def test_criterion_09_monte_carlo():
    with Timer() as timer:
        d = lab.make_distribution("uniform", k=20)
        res = lab.run_tail_experiment(d, lab.SampleConfig(50, 100_000, 0, (0.05, 0.1)))
    for row in res.rows:
        assert row.empirical_upper <= row.bound_upper
        assert row.empirical_lower <= row.bound_lower
        assert row.wilson_upper_ci[0] <= row.bound_upper
        assert row.wilson_lower_ci[0] <= row.bound_lower
    assert timer.elapsed < 60.0


def test_criterion_10_bound_ordering():
    for n in (1, 2, 5, 10, 50, 100, 1000, 10_000):
        for eps in (0.001, 0.01, 0.05, 0.1, 0.2, 0.5, 1.0):
            assert lower_tail_bound(n, eps) <= legacy_lower_tail_bound(n, eps)
    p = ineq.default_p_grid(2001)
    c = ineq.ks_coefficient(p)
    assert np.all(c <= 0.125)
    assert np.all(c[np.abs(p - 0.5) > 1e-3] < 0.125)
    assert ineq.ks_coefficient(0.5) == 0.125


def test_criterion_11_open_problem_scan():
    row, scans = gprime_check(GPRIME_P_VALUES, GPRIME_T_GRID)
    assert len(scans) == 99
    assert row.violations == 0 and row.passed
    assert "not a proof" in row.note
    assert all("not a proof" in s.to_csv() for s in scans)


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "all"],
    ["constants"],
    ["bounds", "--n", "100", "--eps", "0.05,0.1"],
    ["simulate", "--dist", "uniform:20", "--n", "50", "--trials", "100000", "--seed", "0", "--eps", "0.05,0.1"],
    ["oracle", "--dist", "uniform:3", "--n", "6", "--threshold", "0.1"],
])
def test_criterion_12_determinism(tmp_path, argv):
    outputs = []
    for name in ("first.csv", "second.csv"):
        path = tmp_path / name
        assert cli.main([*argv, "-o", str(path)]) == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]
