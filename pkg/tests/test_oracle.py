import itertools
import math

import numpy as np
import pytest
from scipy.stats import binom

from missingmass import lab, oracle
from missingmass._validate import DomainError
from missingmass.constants import compute_c0

from conftest import SMALL_ZOO, build

LAMBDAS = np.linspace(-20, 20, 401)


def as_dict(law):
    return {round(v, 12): p for v, p in law.as_dict().items()}


class TestExactLaws:
    def test_uniform2_dependent(self):
        law = oracle.exact_missing_mass_distribution(lab.make_distribution("uniform", k=2), 2)
        assert law.as_dict() == {0.0: 0.5, 0.5: 0.5}
        assert law.provenance == oracle.DEPENDENT

    def test_single_atom(self):
        d = lab.make_distribution("uniform", k=1)
        assert oracle.exact_missing_mass_distribution(d, 5).as_dict() == {0.0: 1.0}
        assert oracle.exact_independent_distribution(d, 1).as_dict() == {0.0: 1.0}

    def test_skewed_one_draw(self):
        d = lab.make_distribution("explicit", atoms=[0.9, 0.1])
        law = as_dict(oracle.exact_missing_mass_distribution(d, 1))
        assert law == pytest.approx({0.1: 0.9, 0.9: 0.1})

    def test_uniform2_independent(self):
        law = oracle.exact_independent_distribution(lab.make_distribution("uniform", k=2), 2)
        assert law.as_dict() == {0.0: 9 / 16, 0.5: 6 / 16, 1.0: 1 / 16}
        assert law.provenance == oracle.INDEPENDENT

    def test_variances_uniform2(self):
        d = lab.make_distribution("uniform", k=2)
        assert oracle.exact_missing_mass_distribution(d, 2).variance == pytest.approx(0.0625, rel=1e-15)
        assert oracle.exact_independent_distribution(d, 2).variance == pytest.approx(0.09375, rel=1e-15)

    def test_against_itertools_enumeration(self):
        # straightforward product enumeration as a second oracle
        d = lab.make_distribution("explicit", atoms=[0.6, 0.3, 0.1])
        n = 4
        ref = {}
        for seq in itertools.product(range(3), repeat=n):
            w = math.prod(d.atoms[j] for j in seq)
            u = round(sum(d.atoms[j] for j in range(3) if j not in seq), 12)
            ref[u] = ref.get(u, 0.0) + w
        assert as_dict(oracle.exact_missing_mass_distribution(d, n)) == pytest.approx(ref, rel=1e-13)

    def test_zero_mass_atom_ignored(self):
        a = oracle.exact_missing_mass_distribution(lab.make_distribution("explicit", atoms=[0.5, 0, 0.5]), 3)
        b = oracle.exact_missing_mass_distribution(lab.make_distribution("uniform", k=2), 3)
        assert a.as_dict() == b.as_dict()

    def test_size_guard(self):
        with pytest.raises(oracle.InstanceTooLarge):
            oracle.exact_missing_mass_distribution(lab.make_distribution("uniform", k=10), 8)
        with pytest.raises(oracle.InstanceTooLarge):
            oracle.exact_independent_distribution(lab.make_distribution("uniform", k=30), 2)

    def test_merge_tolerance(self):
        law = oracle.ExactDistribution.from_pairs([0.1, 0.1 + 1e-13, 0.2], [0.25, 0.25, 0.5], "x")
        assert len(law) == 2 and law.probs[0] == 0.5
        law = oracle.ExactDistribution.from_pairs([0.1, 0.1 + 1e-9], [0.5, 0.5], "x")
        assert len(law) == 2

    def test_invariants(self, small_dist):
        law = oracle.exact_missing_mass_distribution(small_dist, 3)
        assert np.all(np.diff(law.support) > 0) and np.all(law.probs > 0)
        assert math.fsum(law.probs) == pytest.approx(1.0, abs=1e-12)


class TestTailAndMgf:
    dep = oracle.ExactDistribution(np.array([0.0, 0.5]), np.array([0.5, 0.5]), oracle.DEPENDENT)
    ind = oracle.ExactDistribution(np.array([0.0, 0.5, 1.0]), np.array([9, 6, 1]) / 16, oracle.INDEPENDENT)

    def test_tails(self):
        assert oracle.exact_tail(self.dep, "above", 0.45) == 0.5
        assert oracle.exact_tail(self.dep, "above", 1.0) == 0.0
        assert oracle.exact_tail(self.ind, "above", 0.45) == 0.4375

    def test_tails_partition(self, small_dist):
        law = oracle.exact_missing_mass_distribution(small_dist, 4)
        for x in law.support:
            point = law.probs[law.support == x].sum()
            total = oracle.exact_tail(law, "above", x) + oracle.exact_tail(law, "below", x) + point
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_bad_direction(self):
        with pytest.raises(DomainError):
            oracle.exact_tail(self.dep, "sideways", 0.1)

    def test_mgf(self):
        assert oracle.exact_mgf(self.dep, 0.0) == pytest.approx(1.0, rel=1e-15)
        assert oracle.exact_mgf(self.dep, 1.0) == pytest.approx(0.5 + 0.5 * math.exp(0.5), rel=1e-14)
        expect = 9 / 16 + 6 / 16 * math.exp(0.5) + math.exp(1) / 16
        assert oracle.exact_mgf(self.ind, 1.0) == pytest.approx(expect, rel=1e-14)
        assert oracle.exact_mgf(self.ind, 1.0) == pytest.approx(1.3506631, abs=1e-7)

    def test_mgf_large_lambda(self):
        assert math.isfinite(oracle.exact_mgf(self.ind, 700.0))


def _pairs():
    for name in sorted(SMALL_ZOO):
        for n in range(1, 9):
            yield name, n


@pytest.mark.parametrize("name,n", list(_pairs()))
def test_formula_mgf_and_variance(name, n):
    d = build(SMALL_ZOO[name])
    dep = oracle.exact_missing_mass_distribution(d, n)
    ind = oracle.exact_independent_distribution(d, n)
    formula = lab.expected_missing_mass(d, n)
    assert abs(dep.mean - formula) <= 1e-12
    assert abs(ind.mean - formula) <= 1e-12
    slack = oracle.mgf_domination_slack(dep, ind, LAMBDAS)
    assert slack.min() >= -1e-12
    assert dep.variance <= ind.variance


def test_exact_tail_bounds():
    d = lab.make_distribution("uniform", k=3)
    n = 6
    law = oracle.exact_missing_mass_distribution(d, n)
    mean = lab.expected_missing_mass(d, n)
    c0 = compute_c0()
    for eps in np.arange(1, 20) * 0.05:
        assert oracle.exact_tail(law, "above", mean + eps) <= math.exp(-n * eps**2)
        assert oracle.exact_tail(law, "below", mean - eps) <= math.exp(-c0 * n * eps**2 / 4)


def test_raw_tail_domination_fails_but_mgf_holds():
    d = lab.make_distribution("uniform", k=2)
    dep = oracle.exact_missing_mass_distribution(d, 2)
    ind = oracle.exact_independent_distribution(d, 2)
    assert oracle.exact_tail(dep, "above", 0.45) > oracle.exact_tail(ind, "above", 0.45)
    assert oracle.mgf_domination_slack(dep, ind, LAMBDAS).min() >= -1e-12


@pytest.mark.parametrize("name", ["uniform3", "skewed3", "zipf4"])
def test_monte_carlo_within_binomial_bands(name):
    d = build(SMALL_ZOO[name])
    n, trials = 4, 200_000
    dep = oracle.exact_missing_mass_distribution(d, n)
    u = lab.simulate_missing_mass(d, n, trials, 31)
    mean = lab.expected_missing_mass(d, n)
    for eps in (0.0, 0.05, 0.1, 0.2):
        for direction, hits in (("above", np.count_nonzero(u > mean + eps)),
                                ("below", np.count_nonzero(u < mean - eps))):
            x = mean + eps if direction == "above" else mean - eps
            p = oracle.exact_tail(dep, direction, x)
            lo, hi = binom.interval(0.999, trials, p)
            assert lo <= hits <= hi
