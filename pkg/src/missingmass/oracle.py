"""Exact laws of the missing mass and its independent analogue on tiny instances.

``U_n`` is computed by brute force over all ``k^n`` sample sequences;
``U_n'`` over all ``2^k`` indicator patterns.  Probability mass is accumulated
with ``math.fsum``.  Atoms of zero mass are left out of the enumeration:
sequences that use them have probability 0 and they add 0 to either sum.
"""
import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ._validate import DomainError, check_positive_int
from .occupancy import survival_prob

ENUMERATION_LIMIT = 10**7
MERGE_TOLERANCE = 1e-12
_CHUNK_CELLS = 1 << 21

DEPENDENT = "dependent-enumeration"
INDEPENDENT = "independent-enumeration"


class InstanceTooLarge(DomainError):
    """Enumeration would exceed the configured size guard."""


@dataclass(frozen=True, eq=False)
class ExactDistribution:
    support: np.ndarray
    probs: np.ndarray
    provenance: str

    def __post_init__(self):
        if self.support.shape != self.probs.shape or self.support.size == 0:
            raise ValueError("support and probs must be nonempty and of equal length")
        if np.any(np.diff(self.support) <= 0):
            raise ValueError("support must be strictly increasing")
        if np.any(self.probs <= 0):
            raise ValueError("probabilities must be positive")
        if abs(math.fsum(self.probs) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {math.fsum(self.probs)!r}")

    @classmethod
    def from_pairs(cls, values, probs, provenance, merge_tol=MERGE_TOLERANCE):
        """Aggregate (value, probability) pairs; values within ``merge_tol`` of
        their neighbour are merged, keeping the smallest value of each run."""
        partial = defaultdict(list)
        for v, p in zip(values, probs):
            partial[v].append(p)
        return cls._merge(partial, provenance, merge_tol)

    @classmethod
    def _merge(cls, partial, provenance, merge_tol):
        keys = sorted(v for v, ps in partial.items() if math.fsum(ps) > 0)
        support, probs = [], []
        run_val, run_parts, prev = None, [], None
        for v in keys:
            if prev is not None and v - prev <= merge_tol:
                run_parts.extend(partial[v])
            else:
                if run_parts:
                    support.append(run_val)
                    probs.append(math.fsum(run_parts))
                run_val, run_parts = v, list(partial[v])
            prev = v
        support.append(run_val)
        probs.append(math.fsum(run_parts))
        return cls(np.array(support), np.array(probs), provenance)

    def __len__(self):
        return self.support.size

    def as_dict(self):
        return dict(zip(self.support.tolist(), self.probs.tolist()))

    @property
    def mean(self):
        return math.fsum(self.support * self.probs)

    @property
    def variance(self):
        m = self.mean
        return math.fsum(self.probs * (self.support - m) ** 2)

    def rows(self):
        return [(v, p, self.provenance) for v, p in zip(self.support, self.probs)]


def _chunks(total, per_row):
    step = max(1, _CHUNK_CELLS // max(per_row, 1))
    for start in range(0, total, step):
        yield start, min(total, start + step)


def exact_missing_mass_distribution(dist, n, limit=ENUMERATION_LIMIT):
    """Law of ``U_n`` by enumerating every sequence in ``{1..k}^n`` in lexicographic order."""
    n = check_positive_int(n)
    atoms = dist.positive_atoms
    k = atoms.size
    total = k**n
    if total > limit:
        raise InstanceTooLarge(f"k^n = {k}^{n} = {total} exceeds the enumeration limit {limit}")
    # most significant digit first
    place = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    partial = defaultdict(list)
    for lo, hi in _chunks(total, max(n, k)):
        idx = np.arange(lo, hi, dtype=np.int64)
        digits = (idx[:, None] // place) % k
        prob = np.prod(atoms[digits], axis=1)
        missing = np.ones((hi - lo, k), dtype=bool)
        missing[np.arange(hi - lo)[:, None], digits] = False
        value = np.where(missing, atoms, 0.0).sum(axis=1)
        uniq, inv = np.unique(value, return_inverse=True)
        order = np.argsort(inv, kind="stable")
        bounds = np.searchsorted(inv[order], np.arange(uniq.size + 1))
        sorted_prob = prob[order]
        for j, v in enumerate(uniq.tolist()):
            partial[v].append(math.fsum(sorted_prob[bounds[j]:bounds[j + 1]].tolist()))
    return ExactDistribution._merge(partial, DEPENDENT, MERGE_TOLERANCE)


def exact_independent_distribution(dist, n, limit=ENUMERATION_LIMIT):
    """Law of ``U_n'`` by enumerating all ``2^k`` patterns of independent indicators."""
    n = check_positive_int(n)
    atoms = dist.positive_atoms
    k = atoms.size
    total = 2**k
    if total > limit:
        raise InstanceTooLarge(f"2^k = 2^{k} = {total} exceeds the enumeration limit {limit}")
    q = np.asarray(survival_prob(atoms, n), dtype=float).reshape(k)
    bits = np.arange(k - 1, -1, -1, dtype=np.int64)
    partial = defaultdict(list)
    for lo, hi in _chunks(total, k):
        pattern = ((np.arange(lo, hi, dtype=np.int64)[:, None] >> bits) & 1).astype(bool)
        prob = np.prod(np.where(pattern, q, 1.0 - q), axis=1)
        value = np.where(pattern, atoms, 0.0).sum(axis=1)
        for v, p in zip(value.tolist(), prob.tolist()):
            partial[v].append(p)
    return ExactDistribution._merge(partial, INDEPENDENT, MERGE_TOLERANCE)


def exact_tail(law, direction, threshold):
    """``P(U > threshold)`` for ``above``, ``P(U < threshold)`` for ``below``."""
    if direction == "above":
        mask = law.support > threshold
    elif direction == "below":
        mask = law.support < threshold
    else:
        raise DomainError(f"direction must be 'above' or 'below', got {direction!r}")
    return math.fsum(law.probs[mask])


def exact_mgf(law, lam):
    """``E e^{lam U}`` evaluated with log-sum-exp."""
    lam = float(lam)
    if not math.isfinite(lam):
        raise DomainError("lambda must be finite")
    return float(np.exp(logsumexp(lam * law.support, b=law.probs)))


def mgf_domination_slack(dependent, independent, lambdas):
    """``E e^{lam U'} - E e^{lam U}`` for each ``lam``."""
    return np.array([exact_mgf(independent, x) - exact_mgf(dependent, x) for x in lambdas])


@dataclass(frozen=True)
class OracleSummary:
    mean_dependent: float
    mean_independent: float
    mean_formula: float
    variance_dependent: float
    variance_independent: float
    mgf_slack_min: float
    mgf_slack_argmin: float

    HEADER = ("mean_dependent", "mean_independent", "mean_formula", "variance_dependent",
              "variance_independent", "mgf_slack_min", "mgf_slack_argmin")

    def row(self):
        return [getattr(self, k) for k in self.HEADER]


def summarize(dependent, independent, mean_formula, lambdas):
    slack = mgf_domination_slack(dependent, independent, lambdas)
    i = int(np.argmin(slack))
    return OracleSummary(
        mean_dependent=dependent.mean,
        mean_independent=independent.mean,
        mean_formula=mean_formula,
        variance_dependent=dependent.variance,
        variance_independent=independent.variance,
        mgf_slack_min=float(slack[i]),
        mgf_slack_argmin=float(lambdas[i]),
    )
