"""Concentration bounds for the missing mass.

Numerical verification of the Kearns-Saul MGF inequality and its
refinement, the lower-tail constant C0, the occupancy-indicator MGF bounds,
and the resulting tail bounds, with exact enumeration and Monte Carlo
checks.
"""
__version__ = "0.1.0"

from .constants import ExtremalResult, compute_c0, f_objective, find_x0
from .inequalities import (centered_bernoulli_mgf_log, g_exponent, h_s_second_derivative, h_s_value,
                           hoeffding_log_bound, ks_coefficient, ks_gap, refined_gap, scan_g_prime_signs,
                           t_star)
from .lab import (DiscreteDistribution, SampleConfig, expected_missing_mass, make_distribution,
                  run_tail_experiment, sample_independent_analogue, sample_missing_mass)
from .occupancy import (TailBound, lamp_gap_a, lamp_gap_b, lower_tail_bound, survival_prob, tail_bound,
                        upper_tail_bound)
from .oracle import (ExactDistribution, exact_independent_distribution, exact_mgf,
                     exact_missing_mass_distribution, exact_tail)
