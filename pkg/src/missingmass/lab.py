"""Sampling distributions, the missing mass, and Monte Carlo tail experiments.

The missing mass of an i.i.d. sample ``X_1..X_n`` from atoms ``p_1..p_k`` is
``U_n = sum_j p_j [j not in sample]``.  Its independent analogue ``U_n'``
replaces the (dependent) indicators with independent Bernoulli(``(1-p_j)^n``)
variables with the same marginals.

Trials are simulated in fixed-size blocks.  Block ``b`` draws from a
generator seeded with ``(seed, b, stream)``, so results depend only on the seed and
the trial count, never on how blocks are scheduled.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import binomtest

from ._validate import DomainError, check_positive_int
from .constants import compute_c0
from .occupancy import lower_tail_bound, survival_prob, upper_tail_bound

BLOCK_TRIALS = 4096
WILSON_CONFIDENCE = 0.99
# cap on the (block, k) indicator matrix
_MAX_BLOCK_CELLS = 1 << 23

KINDS = ("uniform", "zipf", "truncated-geometric", "explicit")


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    atoms: np.ndarray
    kind: str = "explicit"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float).ravel()
        if atoms.size < 1:
            raise DomainError("a distribution needs at least one atom")
        if not np.all(np.isfinite(atoms)) or np.any(atoms < 0):
            raise DomainError("atoms must be finite and nonnegative")
        if abs(math.fsum(atoms) - 1.0) > 1e-12:
            raise DomainError(f"atoms sum to {math.fsum(atoms)!r}, not 1")
        atoms.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)

    @property
    def k(self):
        return self.atoms.size

    @property
    def has_zero_mass(self):
        return bool(np.any(self.atoms == 0))

    @property
    def positive_atoms(self):
        return self.atoms[self.atoms > 0]

    def spec(self):
        return {"kind": self.kind, "params": dict(self.params)}

    def __repr__(self):
        return f"DiscreteDistribution(kind={self.kind!r}, params={self.params!r}, k={self.k})"


def _normalize(weights):
    w = np.asarray(weights, dtype=float)
    return w / math.fsum(w)


def make_distribution(kind, **params):
    """Build a normalised distribution.

    ``uniform(k)``, ``zipf(k, alpha)`` with atoms proportional to ``j^-alpha``,
    ``truncated-geometric(k, rho)`` with atoms proportional to ``rho^(j-1) (1-rho)``,
    and ``explicit(atoms)``.  Infinite-support families are truncated to
    ``k`` atoms and renormalised.
    """
    if kind == "geometric":
        kind = "truncated-geometric"
    if kind in ("uniform", "zipf", "truncated-geometric"):
        k = params.get("k")
        if k is None:
            raise DomainError(f"{kind} needs k")
        k = check_positive_int(k, "k")
    if kind == "uniform":
        _only(params, {"k"})
        return DiscreteDistribution(np.full(k, 1.0 / k), kind, {"k": k})
    if kind == "zipf":
        _only(params, {"k", "alpha"})
        alpha = float(params.get("alpha", 1.0))
        if not alpha > 0:
            raise DomainError("zipf exponent must be positive")
        j = np.arange(1, k + 1, dtype=float)
        return DiscreteDistribution(_normalize(j**-alpha), kind, {"k": k, "alpha": alpha})
    if kind == "truncated-geometric":
        _only(params, {"k", "rho"})
        rho = float(params.get("rho", 0.5))
        if not 0 < rho < 1:
            raise DomainError("rho must lie in (0, 1)")
        j = np.arange(k, dtype=float)
        return DiscreteDistribution(_normalize(rho**j * (1 - rho)), kind, {"k": k, "rho": rho})
    if kind == "explicit":
        _only(params, {"atoms"})
        atoms = np.asarray(params.get("atoms", []), dtype=float)
        if atoms.size == 0 or np.any(atoms < 0) or not np.all(np.isfinite(atoms)):
            raise DomainError("explicit atoms must be a nonempty list of nonnegative numbers")
        if atoms.sum() <= 0:
            raise DomainError("explicit atoms are all zero")
        return DiscreteDistribution(_normalize(atoms), kind, {"atoms": [float(a) for a in atoms]})
    raise DomainError(f"unknown distribution kind {kind!r}; expected one of {KINDS}")


def _only(params, allowed):
    extra = set(params) - allowed
    if extra:
        raise DomainError(f"unexpected parameters {sorted(extra)}")


def parse_distribution(text):
    """Parse ``kind:args`` such as ``uniform:20``, ``zipf:10,1.2``,
    ``truncated-geometric:8,0.5`` or ``explicit:0.9,0.1``."""
    kind, _, rest = text.partition(":")
    args = [a for a in rest.split(",") if a.strip()]
    try:
        if kind == "uniform":
            (k,) = args
            return make_distribution(kind, k=int(k))
        if kind == "zipf":
            k, alpha = args
            return make_distribution(kind, k=int(k), alpha=float(alpha))
        if kind in ("truncated-geometric", "geometric"):
            k, rho = args
            return make_distribution(kind, k=int(k), rho=float(rho))
        if kind == "explicit":
            return make_distribution(kind, atoms=[float(a) for a in args])
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"cannot parse distribution {text!r}: {exc}") from None
    raise DomainError(f"unknown distribution kind {kind!r}; expected one of {KINDS}")


def distribution_from_config(obj):
    """Build a distribution from ``{"kind": ..., "params": {...}}``."""
    if not isinstance(obj, dict) or set(obj) - {"kind", "params"} or "kind" not in obj:
        raise DomainError(f"distribution must be an object with keys kind, params; got {obj!r}")
    return make_distribution(obj["kind"], **obj.get("params", {}))


def expected_missing_mass(dist, n):
    """``E U_n = sum_j p_j (1 - p_j)^n``."""
    n = check_positive_int(n)
    return math.fsum(dist.atoms * survival_prob(dist.atoms, n))


def _cdf(atoms):
    cdf = np.cumsum(atoms)
    cdf[-1] = 1.0
    return cdf


def _draw_indices(rng, cdf, size):
    u = rng.random(size)
    return np.minimum(np.searchsorted(cdf, u, side="right"), cdf.size - 1)


def sample_missing_mass(dist, n, rng):
    """One draw of ``U_n`` using inverse-CDF sampling from ``rng``."""
    n = check_positive_int(n)
    idx = _draw_indices(rng, _cdf(dist.atoms), n)
    seen = np.zeros(dist.k, dtype=bool)
    seen[idx] = True
    return float(np.where(seen, 0.0, dist.atoms).sum())


def sample_independent_analogue(dist, n, rng):
    """One draw of ``U_n' = sum_j p_j xi_j'`` with independent ``xi_j' ~ Bernoulli((1-p_j)^n)``."""
    n = check_positive_int(n)
    q = survival_prob(dist.atoms, n)
    xi = rng.random(dist.k) < q
    return float(np.where(xi, dist.atoms, 0.0).sum())


def _block_size(k):
    return max(1, min(BLOCK_TRIALS, _MAX_BLOCK_CELLS // k))


def block_rng(seed, block, stream=0):
    return np.random.default_rng([int(seed), int(block), int(stream)])


def simulate_missing_mass(dist, n, trials, seed, independent=False):
    """Array of ``trials`` draws of ``U_n`` (or ``U_n'`` with ``independent``)."""
    n = check_positive_int(n)
    trials = check_positive_int(trials, "trials")
    size = _block_size(dist.k)
    cdf = _cdf(dist.atoms)
    q = survival_prob(dist.atoms, n)
    out = np.empty(trials)
    for b, start in enumerate(range(0, trials, size)):
        m = min(size, trials - start)
        rng = block_rng(seed, b, 1 if independent else 0)
        if independent:
            missing = rng.random((m, dist.k)) < q
        else:
            idx = _draw_indices(rng, cdf, (m, n))
            missing = np.ones((m, dist.k), dtype=bool)
            missing[np.arange(m)[:, None], idx] = False
        out[start:start + m] = np.where(missing, dist.atoms, 0.0).sum(axis=1)
    return out


@dataclass(frozen=True)
class SampleConfig:
    n: int
    trials: int
    seed: int
    epsilon_list: tuple

    def __post_init__(self):
        check_positive_int(self.n)
        check_positive_int(self.trials, "trials")
        if not (isinstance(self.seed, (int, np.integer)) and 0 <= self.seed < 2**64):
            raise DomainError("seed must be an unsigned 64-bit integer")
        eps = tuple(float(e) for e in self.epsilon_list)
        if not eps or any(not (e > 0 and math.isfinite(e)) for e in eps):
            raise DomainError("epsilons must be a nonempty list of positive numbers")
        object.__setattr__(self, "epsilon_list", eps)


def wilson_interval(count, total, confidence=WILSON_CONFIDENCE):
    ci = binomtest(int(count), int(total)).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


@dataclass(frozen=True)
class TailRow:
    epsilon: float
    empirical_upper: float
    wilson_upper_ci: tuple
    bound_upper: float
    empirical_lower: float
    wilson_lower_ci: tuple
    bound_lower: float
    expected_mass: float

    @property
    def dominated(self):
        """Wilson lower limits sit at or below the theoretical bounds."""
        return self.wilson_upper_ci[0] <= self.bound_upper and self.wilson_lower_ci[0] <= self.bound_lower

    def row(self):
        return [self.epsilon, self.empirical_upper, *self.wilson_upper_ci, self.bound_upper,
                self.empirical_lower, *self.wilson_lower_ci, self.bound_lower, self.expected_mass]


TAIL_HEADER = ["epsilon", "empirical_upper", "upper_wilson_lo", "upper_wilson_hi", "bound_upper",
               "empirical_lower", "lower_wilson_lo", "lower_wilson_hi", "bound_lower", "expected_mass"]


@dataclass
class TailExperimentResult:
    rows: list
    expected_mass: float
    mean: float
    variance: float
    trials: int
    analogue_mean: float = None
    analogue_variance: float = None

    @property
    def dominated(self):
        return all(r.dominated for r in self.rows)


def tail_rows(samples, expected_mass, n, epsilons, c0=None):
    c0 = compute_c0() if c0 is None else c0
    trials = samples.size
    rows = []
    for eps in epsilons:
        up = int(np.count_nonzero(samples > expected_mass + eps))
        lo = int(np.count_nonzero(samples < expected_mass - eps))
        rows.append(TailRow(
            epsilon=eps,
            empirical_upper=up / trials,
            wilson_upper_ci=wilson_interval(up, trials),
            bound_upper=upper_tail_bound(n, eps),
            empirical_lower=lo / trials,
            wilson_lower_ci=wilson_interval(lo, trials),
            bound_lower=lower_tail_bound(n, eps, c0),
            expected_mass=expected_mass,
        ))
    return rows


def run_tail_experiment(dist, config, include_analogue=False):
    """Simulate ``U_n`` and tabulate strict-inequality tail frequencies per epsilon."""
    mean_mass = expected_missing_mass(dist, config.n)
    u = simulate_missing_mass(dist, config.n, config.trials, config.seed)
    result = TailExperimentResult(
        rows=tail_rows(u, mean_mass, config.n, config.epsilon_list),
        expected_mass=mean_mass,
        mean=float(u.mean()),
        variance=float(u.var(ddof=1)) if u.size > 1 else 0.0,
        trials=config.trials,
    )
    if include_analogue:
        v = simulate_missing_mass(dist, config.n, config.trials, config.seed, independent=True)
        result.analogue_mean = float(v.mean())
        result.analogue_variance = float(v.var(ddof=1)) if v.size > 1 else 0.0
    return result
