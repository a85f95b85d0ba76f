"""Grid-scan reports for log-domain inequality checks."""
from dataclasses import dataclass, field

import numpy as np

from ._io import render_csv


@dataclass
class GapReport:
    """Left/right sides of an inequality ``lhs <= rhs`` over a grid, in log domain.

    ``coords`` maps coordinate names (``p``, ``t``, ``n``, ...) to flat arrays of
    equal length.  With ``two_sided`` the check is ``|gap| <= tolerance``
    (an equality check) instead of ``gap >= -tolerance``.
    """

    name: str
    coords: dict
    lhs_log: np.ndarray
    rhs_log: np.ndarray
    tolerance: float
    two_sided: bool = False
    gap: np.ndarray = field(init=False)

    def __post_init__(self):
        self.coords = {k: np.ravel(np.asarray(v, dtype=float)) for k, v in self.coords.items()}
        self.lhs_log = np.ravel(np.asarray(self.lhs_log, dtype=float))
        self.rhs_log = np.ravel(np.asarray(self.rhs_log, dtype=float))
        self.gap = self.rhs_log - self.lhs_log
        size = self.gap.size
        if size == 0:
            raise ValueError("empty report")
        for k, v in self.coords.items():
            if v.size != size:
                raise ValueError(f"coordinate {k!r} has {v.size} entries, expected {size}")

    def __len__(self):
        return self.gap.size

    @property
    def _worst_index(self):
        if self.two_sided:
            return int(np.argmax(np.abs(self.gap)))
        return int(np.argmin(self.gap))

    @property
    def min_gap(self):
        """Smallest gap, or the signed gap of largest magnitude for equality checks."""
        return float(self.gap[self._worst_index])

    @property
    def argmin(self):
        i = self._worst_index
        return {k: float(v[i]) for k, v in self.coords.items()}

    @property
    def passed(self):
        if not np.all(np.isfinite(self.gap)):
            return False
        if self.two_sided:
            return bool(np.max(np.abs(self.gap)) <= self.tolerance)
        return bool(self.min_gap >= -self.tolerance)

    @property
    def violations(self):
        if self.two_sided:
            return int(np.count_nonzero(~(np.abs(self.gap) <= self.tolerance)))
        return int(np.count_nonzero(~(self.gap >= -self.tolerance)))

    def to_csv(self):
        names = list(self.coords)
        header = names + ["lhs_log", "rhs_log", "gap"]
        cols = [self.coords[k] for k in names] + [self.lhs_log, self.rhs_log, self.gap]
        return render_csv(header, zip(*cols))

    def summary_row(self, note=""):
        return [self.name, len(self), self.violations, self.min_gap, format_where(self.argmin),
                self.tolerance, self.passed, note]


def format_where(coords):
    return ";".join(f"{k}={v:.17g}" for k, v in coords.items())


SUMMARY_HEADER = ["check", "points", "violations", "worst", "where", "tolerance", "pass", "note"]
