import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from ..exceptions import DomainError

MIN_GRID = 3


@dataclass
class IndexEstimate(object):
    """
    An empirical slope of log(quotient) against log(n). It is a lower
    estimate for the searched families only, never the index itself.

    """
    slope: float
    intercept: float
    residual: float
    grid: List[int] = field(default_factory=list)

    @property
    def constant(self):
        return math.exp(self.intercept)

    def to_json(self):
        return {'slope': self.slope, 'intercept': self.intercept,
                'residual': self.residual, 'grid': list(self.grid),
                'label': 'empirical slope'}


def estimate_index(samples):
    """Least squares fit of log(quotient) = slope * log(n) + intercept"""

    samples = sorted(samples, key=lambda s: s.n)
    grid = [s.n for s in samples]
    if len(samples) < MIN_GRID:
        raise DomainError("slope estimates need at least %d samples, got %d"
                          % (MIN_GRID, len(samples)))
    if len(set(grid)) != len(grid):
        raise DomainError("slope estimates need distinct n, got %s" % grid)
    quotients = np.array([s.quotient for s in samples], dtype=np.float64)
    if np.any(quotients <= 0):
        raise DomainError("log-log regression needs positive quotients")

    log_n = np.log(np.array(grid, dtype=np.float64))
    log_q = np.log(quotients)
    design = np.column_stack([log_n, np.ones_like(log_n)])
    (slope, intercept), *_ = np.linalg.lstsq(design, log_q, rcond=None)
    residual = float(np.max(np.abs(design @ np.array([slope, intercept]) - log_q)))
    return IndexEstimate(float(slope), float(intercept), residual, grid)
