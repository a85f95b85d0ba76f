import math

import numpy as np
import pytest
from scipy.optimize import brentq

from missingmass import constants as k
from missingmass._validate import DomainError


def test_objective_values():
    assert k.f_objective(0.5) == pytest.approx(0.25 * math.log(2), rel=1e-15)
    assert k.f_objective(1 / math.e) == pytest.approx((1 / math.e) * (1 - 1 / math.e), rel=1e-15)
    assert k.f_objective(1e-300) < 1e-296


@pytest.mark.parametrize("x", [0.0, 1.0, -0.1, float("nan")])
def test_objective_domain(x):
    with pytest.raises(DomainError):
        k.f_objective(x)


def test_x0_and_c0_match_published_values():
    res = k.find_x0(1e-10)
    assert res.x0 == pytest.approx(0.2356, abs=5e-4)
    assert res.c0 == pytest.approx(7.6821, abs=5e-4)
    assert res.f_at_x0 == pytest.approx(2 / 7.6821, abs=1e-4)
    assert res.c0 == 2 / res.f_at_x0


def test_against_root_of_derivative():
    # independent route: f'(x) = (1 - 2x) log(1/x) - (1 - x) = 0
    root = brentq(lambda x: (1 - 2 * x) * math.log(1 / x) - (1 - x), 0.1, 0.4, xtol=1e-15)
    res = k.find_x0()
    assert res.x0 == pytest.approx(root, abs=1e-6)
    assert res.c0 == pytest.approx(2 / k.f_objective(root), rel=1e-13)


def test_commented_out_characterisation_agrees():
    # log x = -(1 - x)/(1 - 2x) is the same stationarity condition rearranged
    root = brentq(lambda x: math.log(x) + (1 - x) / (1 - 2 * x), 0.1, 0.4, xtol=1e-15)
    assert k.find_x0().x0 == pytest.approx(root, abs=1e-6)


def test_bracket_probes():
    res = k.find_x0()
    assert res.f_at_x0 > k.f_objective(0.1)
    assert res.f_at_x0 > k.f_objective(0.4)


def test_infimum_property():
    rng = np.random.default_rng(3)
    xs = rng.uniform(0, 0.5, 10_000)
    xs = xs[xs > 0]
    c0 = k.compute_c0()
    assert all(2 / k.f_objective(float(x)) >= c0 for x in xs)


def test_optimizer_stability():
    assert abs(k.compute_c0(1e-8) - k.compute_c0(1e-12)) < 1e-7


def test_comparison_constants():
    c0 = k.compute_c0()
    assert c0 / 4 == pytest.approx(1.9205, abs=2e-4)
    assert c0 < k.EIGHT_OVER_LN2
    assert k.EIGHT_OVER_LN2 == pytest.approx(11.5416, abs=1e-4)
    assert c0 / 4 > k.LEGACY_LOWER_CONSTANT


def test_golden_section_on_quadratic():
    x, fx, it = k.golden_section_max(lambda x: -(x - 0.3) ** 2, 0.0, 1.0, tol=1e-10)
    assert x == pytest.approx(0.3, abs=1e-9)
    assert it < 100


def test_golden_section_iteration_cap():
    with pytest.raises(k.ConvergenceError):
        k.golden_section_max(lambda x: -x * x, -1.0, 1.0, tol=1e-12, max_iter=5)


def test_nonpositive_tolerance():
    with pytest.raises(DomainError):
        k.find_x0(0.0)
